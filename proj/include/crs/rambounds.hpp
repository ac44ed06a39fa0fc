#pragma once

// Ramification bounds for mod-p etale cohomology and the Herbrand calculus
// behind them. All values are exact rationals; the one logarithmic term
// (Caruso's log_p(ip)) is kept symbolic.
//
// Upper/lower numbering uses the shifted convention: G_(lambda) is the group
// of g with v_M(g(x) - x) >= lambda, so phi(t) = phi_Serre(t - 1) + 1 for t >= 1.

#include "crs/arith.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace crs {

/// Unique t with p^t <= q < p^(t+1); exact. Throws for q <= 0.
long floor_log_p(const Rational& q, unsigned p);

struct BoundComponents {
    long alpha = 0;
    Rational beta;
    Rational a;  // iep/(p-1)
    Rational b;  // ie/(p-1)
    std::string max_arg;  // which argument realizes the max inside the floor-log
};

BoundComponents alpha_beta(OddPrime p, unsigned e, unsigned i);
Rational mu_bound_main(OddPrime p, unsigned e, unsigned i);
Rational different_bound_main(OddPrime p, unsigned e, unsigned i);

struct SimplifiedBound {
    std::string case_name;  // "e<=p", "e>p", "i=1"
    Rational value;
};

/// The tractable consequences whose guard holds for (p, e, i).
std::vector<SimplifiedBound> simplified_bounds(OddPrime p, unsigned e, unsigned i);

/// rational + coeff * log_p(arg).
struct RationalPlusLog {
    Rational rational;
    Rational coeff;
    Rational arg = 1;

    /// Collapses the log term when arg is an integral power of p.
    std::optional<Rational> exact(unsigned p) const;
    /// Sign of (*this - q), exact.
    int compare(const Rational& q, unsigned p) const;
    std::string decimal(unsigned p, int digits = 50) const;
};

enum class Method { Main, CarusoLiu, Caruso, Hattori, FontaineAbrashkin };
std::string method_name(Method m);

struct BoundResult {
    Method method = Method::Main;
    bool applicable = true;
    std::string reason;  // violated precondition when inapplicable
    std::optional<Rational> value;
    std::optional<RationalPlusLog> log_value;  // Caruso only
    std::optional<BoundComponents> components;
};

BoundResult main_bound(OddPrime p, unsigned e, unsigned i);
BoundResult caruso_liu_bound(OddPrime p, unsigned e, unsigned i);
BoundResult caruso_bound(OddPrime p, unsigned e, unsigned i, const Rational& c0, unsigned s0);
BoundResult hattori_bound(OddPrime p, unsigned e, unsigned i);
BoundResult fontaine_abrashkin_bound(OddPrime p, unsigned e, unsigned i);

// ---------------------------------------------------------------------------
// Herbrand functions

/// (lambda_j, order_j): |G_(t)| = order_j for t in (lambda_{j-1}, lambda_j], lambda_0 = 0; trivial after the last break.
struct RamBreaks {
    std::vector<std::pair<Rational, unsigned long>> breaks;

    /// Throws std::invalid_argument unless breaks increase, orders strictly decrease and divide each other.
    void validate() const;
    static RamBreaks from_json(const nlohmann::json& j);
};

/// Piecewise-linear increasing function through (0,0) given by its breakpoints;
/// the slope after the last breakpoint is `final_slope`.
struct HerbrandFn {
    std::vector<std::pair<Rational, Rational>> points;  // starts with (0, 0)
    Rational final_slope = 1;

    Rational operator()(const Rational& t) const;
    std::vector<Rational> slopes() const;  // per segment, final_slope last
    bool concave() const;
    bool convex() const;
};

HerbrandFn herbrand_phi(const RamBreaks& b);
HerbrandFn herbrand_psi(const HerbrandFn& phi);

/// lambda_{M/F}: the last break (0 for the trivial group).
Rational last_lower_break(const RamBreaks& b);
/// mu_{M/F} = phi(lambda).
Rational last_upper_break(const RamBreaks& b);

enum class Convention { ShiftedUpper, SerreUpper, FontaineUpper, ShiftedLower, SerreLower, FontaineLower };
Convention convention_from_name(const std::string& name);

/// Reindexes between conventions; Fontaine-lower needs e_tilde.
Rational convert_convention(const Rational& value, Convention from, Convention to,
                            std::optional<Rational> e_tilde = std::nullopt);

/// max(mu_MF, phi_MF(mu_NM)).
Rational transitivity_mu(const Rational& mu_MF, const HerbrandFn& phi_MF, const Rational& mu_NM);

/// Smallest c >= 0 with psi(1+t) >= 1 + e t - c for t >= 0; needs final slope e.
Rational c0_of(const HerbrandFn& psi, unsigned e);

/// Gal(Q_p(zeta_{p^n})/Q_p).
RamBreaks cyclotomic_breaks(OddPrime p, unsigned n);

/// v_K of the different of K(pi^(1/p^s))/K: 1 + es - 1/p^s, or 0 for s = 0.
Rational different_Ks(OddPrime p, unsigned e, unsigned s);

struct TraceStep {
    std::string name;
    Rational value;
};

struct Assembly {
    Rational value;
    std::vector<TraceStep> trace;
};

/// Re-derives the main bound along its proof chain; throws std::logic_error on mismatch.
Assembly assemble_final_bound(OddPrime p, unsigned e, unsigned i);

// ---------------------------------------------------------------------------

struct CarusoInputs {
    Rational c0;
    unsigned s0 = 1;
};

/// Constants of a named base field: "qp", "cyclotomic:p:n", "kummer:p:n".
struct NamedField {
    std::string name;
    unsigned p = 0;
    unsigned e = 0;
    CarusoInputs caruso;
};
NamedField named_field(const std::string& spec);

/// Rows in the order Main, CarusoLiu, Caruso, Hattori, FontaineAbrashkin.
std::vector<BoundResult> compare_table(OddPrime p, unsigned e, unsigned i, std::optional<CarusoInputs> caruso);

/// caruso_bound(c0, s0 of Q_p(zeta_{p^n})) - mu_bound_main, at e = (p-1)p^(n-1).
RationalPlusLog example_diff_cyclotomic(OddPrime p, unsigned n, unsigned i);

/// [(n-1)(p-1) - 1] p^(n-1) + 1.
Rational cyclotomic_c0_formula(OddPrime p, unsigned n);

nlohmann::json bound_row_json(const BoundResult& r, unsigned p);

}  // namespace crs
