#pragma once

// Frobenius lift, the Galois element tau, the delta operator, free
// delta-polynomials and fractions with powers of a fixed denominator.
//
// The residue field is F_p, so Frobenius fixes coefficients:
//   phi(u) = u^p,  phi(w) = (1+w)^p - 1,  phi(z) = z^p      (z = 1 + w)
//   tau(u) = (1+v) u = (1+w)^p u,  tau(w) = w,  tau(z) = z
// with v = (1+w)^p - 1.

#include "crs/polyring.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace crs {

/// Which generator of Z[u,w] = Z[u,z] the model-ring constructions are written in.
enum class Coords { W, Z };

/// 1 + w in the requested coordinates (w + 1, or z).
MPoly one_plus_w(Coords c, const CoeffDomain& d = CoeffDomain::exact());
/// w in the requested coordinates (w, or z - 1).
MPoly w_elem(Coords c, const CoeffDomain& d = CoeffDomain::exact());
/// v = (1+w)^p - 1.
MPoly v_elem(OddPrime p, Coords c, const CoeffDomain& d = CoeffDomain::exact());

/// Base ring data: the prime p and an Eisenstein polynomial E(u) of degree e.
class PrismParams {
public:
    /// Validates E: univariate in u, monic of degree e >= 1, lower coefficients
    /// divisible by p, constant term divisible by p exactly once.
    PrismParams(OddPrime p, const MPoly& eisenstein);
    static PrismParams parse(long long p, const std::string& eisenstein);

    OddPrime p() const { return p_; }
    unsigned e() const { return static_cast<unsigned>(eis_.size() - 1); }
    /// Ascending coefficient list of E(u), length e + 1.
    const std::vector<Integer>& eis() const { return eis_; }
    const MPoly& E() const { return E_; }

private:
    OddPrime p_;
    std::vector<Integer> eis_;
    MPoly E_;
};

/// s-fold Frobenius; s = 0 is the identity.
MPoly frobenius(const MPoly& f, OddPrime p, unsigned s = 1);

/// tau^(p^s): u -> (1+w)^(p^(s+1)) u; w and z are fixed.
MPoly tau_power(const MPoly& f, OddPrime p, unsigned s, Coords c = Coords::W);

/// delta(f) = (phi(f) - f^p) / p. Over Z/p^N the precision drops by one.
MPoly delta(const MPoly& f, OddPrime p);

// ---------------------------------------------------------------------------
// Free delta-polynomials

class DepthExhausted : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Free delta-ring on m symbols truncated at delta-depth D. The auxiliary
/// variable x(j*(D+1)+k+1) stands for delta^k of the j-th symbol, so
/// m*(D+1) <= 9.
class FreeDeltaRing {
public:
    FreeDeltaRing(unsigned symbols, unsigned depth, OddPrime p);

    unsigned symbols() const { return m_; }
    unsigned depth() const { return D_; }
    OddPrime p() const { return p_; }

    /// delta^k(x_j), 0 <= j < m, 0 <= k <= D.
    MPoly sym(unsigned j, unsigned k = 0) const;
    /// Largest delta-depth occurring in f (0 for constants).
    unsigned depth_of(const MPoly& f) const;

    /// phi(delta^k x) = (delta^k x)^p + p delta^(k+1) x; throws DepthExhausted at depth D.
    MPoly phi(const MPoly& f) const;
    MPoly delta(const MPoly& f) const;

    /// Random element of depth <= max_depth with small coefficients.
    MPoly random_element(std::mt19937_64& rng, unsigned max_depth, unsigned terms) const;

private:
    Var var_for(unsigned j, unsigned k) const { return aux_var(j * (D_ + 1) + k); }

    unsigned m_;
    unsigned D_;
    OddPrime p_;
};

struct LawCheck {
    std::string law;
    std::string instance;
    bool pass = false;
    std::string residual;  // text of LHS - RHS when nonzero
};

struct DeltaLawReport {
    unsigned symbols = 0;
    unsigned depth = 0;
    unsigned p = 0;
    std::uint64_t seed = 0;
    std::vector<LawCheck> checks;
    bool all_pass() const;
};

/// Verifies the Frobenius law, the product law and the sum law identically
/// (as polynomials) on the free delta-ring: on the symbols themselves, the
/// unit cases, and `trials` random pairs of depth < D.
DeltaLawReport check_delta_laws(unsigned symbols, unsigned depth, OddPrime p, unsigned trials,
                                std::uint64_t seed);

// ---------------------------------------------------------------------------
// Fractions num / base^k

class LocElem {
public:
    LocElem(MPoly num, unsigned k, MPoly base);

    const MPoly& num() const { return num_; }
    unsigned k() const { return k_; }
    const MPoly& base() const { return base_; }

    /// Cross-multiplied equality; fractions are never reduced.
    bool equals(const LocElem& other) const;

private:
    MPoly num_;
    unsigned k_;
    MPoly base_;
};

enum class LocOp { Add, Sub, Mul };
LocElem loc_arith(const LocElem& a, const LocElem& b, LocOp op);

/// (tau^(p^s)(num), k) over the base tau^(p^s)(E); requires base == E(u).
LocElem tau_on_loc(const LocElem& a, unsigned s, const PrismParams& params, Coords c = Coords::W);

struct CommuteReport {
    unsigned trials = 0;
    std::uint64_t seed = 0;
    bool pass = true;
    std::string counterexample;  // text of the failing f
};

/// Checks phi(tau^(p^s)(f)) == tau^(p^s)(phi(f)) on random f of the given degree.
CommuteReport phi_tau_commute_check(OddPrime p, unsigned s, unsigned trials, unsigned degree, std::uint64_t seed,
                                    Coords c = Coords::W);

/// Random polynomial in u and w (or z) with coefficients in [-bound, bound].
MPoly random_poly_uw(std::mt19937_64& rng, unsigned degree, long bound, Coords c);
/// Random polynomial in u alone of degree <= degree, coefficients in [-bound, bound].
MPoly random_poly_u(std::mt19937_64& rng, unsigned degree, long bound);

}  // namespace crs
