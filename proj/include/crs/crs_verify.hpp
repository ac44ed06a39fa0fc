#pragma once

// Named elements of the model ring (omega, xi_{s,i}, theta_{s,i}, I_s) and
// witness builders for the lemmas about them. Every verifier returns a
// report whose witness re-checks by exact arithmetic; nothing is trusted.

#include "crs/prism.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace crs {

/// omega = sum_{j<p} (1+w)^j; checked against ((1+w)^p - 1) / w.
MPoly make_omega(OddPrime p, Coords c = Coords::W);

/// xi_{s,i} = w * phi^{i+1}(omega) ... phi^s(omega). Throws std::logic_error if the
/// quotient form phi^s(v) / (omega phi(omega) ... phi^i(omega)) disagrees.
MPoly make_xi(OddPrime p, unsigned s, unsigned i, Coords c = Coords::W);

struct CrsIdeal {
    unsigned s = 0;
    unsigned p = 0;
    Coords coords = Coords::W;
    std::vector<MPoly> gens;  // xi_{s,i} u^(p^i), i = 0..s
};

CrsIdeal make_Is(OddPrime p, unsigned s, Coords c = Coords::W);

struct MembershipCert {
    MPoly target;
    std::vector<MPoly> coefficients;  // aligned with the ideal's generators

    /// sum coefficients[i] * gens[i] == target.
    bool recheck(const CrsIdeal& ideal) const;
};

struct NamedPoly {
    std::string name;
    MPoly poly;
};

struct LemmaReport {
    std::string lemma;
    nlohmann::json params = nlohmann::json::object();
    bool pass = false;
    std::vector<NamedPoly> witness;
    nlohmann::json details = nlohmann::json::object();
    std::vector<std::string> notes;
    std::uint64_t seed = 0;
    std::optional<double> elapsed_ms;

    nlohmann::json to_json() const;
};

/// sum_{j<i} (1+v)^(p^s j) = sum_{j<i} (1+w)^(p^(s+1) j); i >= 1.
MPoly geometric_quotient(unsigned i, unsigned s, OddPrime p, Coords c = Coords::W);

/// phi^s(v) = (1+w)^(p^(s+1)) - 1.
MPoly phi_s_v(OddPrime p, unsigned s, Coords c = Coords::W);

/// Witness Q with tau^(p^s)(f) - f = phi^s(v) u Q for f in Z[u].
MPoly lemma_coeff_witness(const MPoly& f, unsigned s, OddPrime p, Coords c = Coords::W);

LemmaReport verify_lemma_coeff(const MPoly& f, unsigned s, OddPrime p, Coords c = Coords::W);

/// `trials` random f of degree <= deg with coefficients in [-bound, bound].
LemmaReport lemma_coeff_trials(OddPrime p, unsigned s, unsigned trials, unsigned deg, long bound,
                               std::uint64_t seed, Coords c = Coords::W);

LemmaReport verify_delta_ideal(OddPrime p, unsigned s, Coords c = Coords::W);
LemmaReport verify_tau_stability(OddPrime p, unsigned s, Coords c = Coords::W);

/// phi^(i+1)(E) ... phi^s(E) u^(p^i) in Z[u].
MPoly theta(const PrismParams& params, unsigned s, unsigned i);

LemmaReport verify_is_mod_pn(const PrismParams& params, unsigned n, unsigned s);

LemmaReport verify_blowup_generator(const MPoly& y, const PrismParams& params, unsigned s, Coords c = Coords::W);

/// `trials` random y in Z[u] of degree <= deg.
LemmaReport blowup_trials(const PrismParams& params, unsigned s, unsigned trials, unsigned deg, std::uint64_t seed,
                          Coords c = Coords::W);

}  // namespace crs
