#pragma once

// Koszul complexes over finite rings Z/p^N[u,w]/(monomials) and the
// divisibility shadow of p^k A cap x^l A = p^k x^l A in Z[u,w].

#include "crs/polyring.hpp"

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace crs {

/// Z/p^N[vars]/(relations). Every variable needs a pure-power relation so the
/// ring is finite and free over Z/p^N on the monomials outside the relation ideal.
class FiniteRingSpec {
public:
    FiniteRingSpec(OddPrime p, unsigned N, std::vector<Var> vars, std::vector<Monomial> relations);
    /// "Z/9", "Z/3[u]/(u^2)", "Z/9[u,w]/(u^2, w^2, u*w)".
    static FiniteRingSpec parse(const std::string& text);

    unsigned p() const { return p_; }
    unsigned N() const { return N_; }
    std::int64_t modulus() const { return mod_; }
    const std::vector<Var>& vars() const { return vars_; }
    const std::vector<Monomial>& basis() const { return basis_; }
    std::size_t rank() const { return basis_.size(); }
    std::string describe() const;

    /// Coordinates of f in the monomial basis (values in [0, p^N)).
    std::vector<std::int64_t> coords_of(const MPoly& f) const;
    /// Matrix (row-major, rank x rank) of multiplication by f.
    std::vector<std::int64_t> mult_matrix(const MPoly& f) const;
    /// f is in the maximal ideal (p, vars): p divides its constant term.
    bool in_max_ideal(const MPoly& f) const;

    std::int64_t mul(std::int64_t a, std::int64_t b) const { return static_cast<std::int64_t>((__int128)a * b % mod_); }
    std::int64_t add(std::int64_t a, std::int64_t b) const { return (a + b) % mod_; }
    std::int64_t norm(std::int64_t a) const { return ((a % mod_) + mod_) % mod_; }

private:
    std::ptrdiff_t index_of(const Monomial& m) const;

    unsigned p_;
    unsigned N_;
    std::int64_t mod_;
    std::vector<Var> vars_;
    std::vector<Monomial> relations_;
    std::vector<Monomial> basis_;
};

/// Dense matrix over Z/p^N.
struct ModMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> data;

    std::int64_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    std::int64_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// p-valuations (< N) of the nonzero diagonal entries of the Smith form.
std::vector<unsigned> smith_valuations(ModMatrix m, const FiniteRingSpec& ring);
/// log_p of the size of the image of m.
std::uint64_t log_image_size(const ModMatrix& m, const FiniteRingSpec& ring);

class KoszulComplex {
public:
    /// Kos(R^module_rank; seq); checks d o d = 0.
    KoszulComplex(FiniteRingSpec ring, std::vector<MPoly> seq, unsigned module_rank = 1);

    const FiniteRingSpec& ring() const { return ring_; }
    const std::vector<MPoly>& sequence() const { return seq_; }
    unsigned module_rank() const { return r_; }
    std::size_t length() const { return seq_.size(); }
    /// Z/p^N-rank of the degree-m term, C(n,m) * module_rank * rank(R).
    std::size_t term_rank(std::size_t m) const;
    /// d_m : K_m -> K_{m-1}, m = 1..n.
    const ModMatrix& boundary(std::size_t m) const { return d_.at(m - 1); }

private:
    FiniteRingSpec ring_;
    std::vector<MPoly> seq_;
    unsigned r_;
    std::vector<ModMatrix> d_;
};

struct HomologyReport {
    std::vector<std::uint64_t> log_orders;  // log_p |H_m|, m = 0..n
    bool all_positive_vanish() const;       // H_m = 0 for all m >= 1
    friend bool operator==(const HomologyReport&, const HomologyReport&) = default;
};

HomologyReport koszul_homology(const KoszulComplex& cx);

/// Sum (-1)^m log|H_m| == sum (-1)^m log|K_m|.
bool euler_characteristic_consistent(const KoszulComplex& cx, const HomologyReport& h);

struct PermReport {
    bool invariant = true;
    std::size_t permutations = 0;
    HomologyReport reference;
};

/// Homology of every permutation of seq (n <= 4) against the given order.
PermReport check_perm_invariance(const FiniteRingSpec& ring, const std::vector<MPoly>& seq, unsigned module_rank = 1);

struct RegularityReport {
    bool weakly_regular = false;    // each f_k injective on M/(f_1..f_{k-1})M
    bool quotient_nonzero = false;  // M/(f)M != 0
    bool h1_zero = false;
    bool all_h_zero = false;
    bool hypothesis = false;        // every f_k lies in the maximal ideal
    bool agreement = false;         // weakly_regular == h1_zero == all_h_zero
    bool pass() const { return !hypothesis || agreement; }
};

/// Regularity by exhaustion over the finite module (|M| <= 2^20), compared with Koszul homology.
RegularityReport check_reg_iff_h1(const FiniteRingSpec& ring, const std::vector<MPoly>& seq, unsigned module_rank = 1);

struct KoszulInstance {
    std::string ring;
    std::vector<std::string> seq;
    unsigned module_rank = 1;
};

/// Fixed instance set for the suite; every ring has at most 81 elements.
std::vector<KoszulInstance> koszul_fixed_instances();
/// Random sequence of length 1..3 over one of a few small rings.
KoszulInstance random_koszul_instance(std::mt19937_64& rng);

nlohmann::json koszul_report_json(const KoszulComplex& cx, const HomologyReport& h, const RegularityReport& reg);

struct DisjointnessReport {
    std::string x;
    unsigned k = 0;
    unsigned l = 0;
    unsigned trials = 0;
    std::uint64_t seed = 0;
    bool pass = true;
    std::vector<std::string> failures;
};

/// Positive trials a = p^k x^l r and negative trials a = p^k r with x not dividing r, in Z[u,w].
DisjointnessReport disjointness_property(const MPoly& x, const std::string& label, OddPrime p, unsigned k, unsigned l,
                                         unsigned trials, std::uint64_t seed);

}  // namespace crs
