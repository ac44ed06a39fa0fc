#pragma once

// Exact sparse multivariate polynomials over Z or Z/p^N.
//
// The variable set is fixed: u, w, z, x1..x9. u models [pi], w models the
// preimage of v under Frobenius (v := (1+w)^p - 1) and z is the shifted
// coordinate z = 1 + w of the same ring; x1..x9 are auxiliary symbols.
// Terms are kept sorted in descending lexicographic order with
// u > w > z > x1 > ... > x9, and no stored coefficient is zero.

#include "crs/arith.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace crs {

enum class Var : std::uint8_t { u = 0, w, z, x1, x2, x3, x4, x5, x6, x7, x8, x9 };

inline constexpr std::size_t kNumVars = 12;

std::string_view var_name(Var v);
std::optional<Var> var_from_name(std::string_view name);
inline Var aux_var(unsigned index) { return static_cast<Var>(static_cast<unsigned>(Var::x1) + index); }

class PolyError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class DomainMismatch : public PolyError {
    using PolyError::PolyError;
};
class NotDivisibleByP : public PolyError {
    using PolyError::PolyError;
};
class ParseError : public PolyError {
    using PolyError::PolyError;
};

/// Coefficient ring: Z, or Z/p^N with p an odd prime and N >= 1.
class CoeffDomain {
public:
    enum class Kind { ExactInteger, ResidueMod };

    static CoeffDomain exact() { return CoeffDomain(); }
    static CoeffDomain residue(OddPrime p, unsigned N);

    Kind kind() const { return kind_; }
    bool is_exact() const { return kind_ == Kind::ExactInteger; }
    unsigned p() const { return p_; }
    unsigned precision() const { return N_; }
    const Integer& modulus() const { return modulus_; }

    /// Canonical representative: identity over Z, [0, p^N) otherwise.
    Integer normalize(const Integer& c) const;
    std::string describe() const;

    friend bool operator==(const CoeffDomain& a, const CoeffDomain& b)
    {
        return a.kind_ == b.kind_ && a.p_ == b.p_ && a.N_ == b.N_;
    }

private:
    CoeffDomain() = default;

    Kind kind_ = Kind::ExactInteger;
    unsigned p_ = 0;
    unsigned N_ = 0;
    Integer modulus_ = 0;
};

class Monomial {
public:
    Monomial() { exp_.fill(0); }
    static Monomial of(Var v, std::uint32_t e = 1);

    std::uint32_t operator[](Var v) const { return exp_[static_cast<std::size_t>(v)]; }
    void set(Var v, std::uint32_t e) { exp_[static_cast<std::size_t>(v)] = e; }
    bool is_one() const;
    std::uint64_t total_degree() const;

    Monomial operator*(const Monomial& other) const;  // throws std::overflow_error
    bool divides(const Monomial& other) const;
    Monomial operator/(const Monomial& other) const;  // requires divides

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
    friend bool operator==(const Monomial&, const Monomial&) = default;

    std::size_t hash() const;

private:
    std::array<std::uint32_t, kNumVars> exp_;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
    Monomial mono;
    Integer coeff;
};

class MPoly {
public:
    MPoly() : domain_(CoeffDomain::exact()) {}
    explicit MPoly(CoeffDomain domain) : domain_(std::move(domain)) {}
    MPoly(long c, CoeffDomain domain = CoeffDomain::exact());  // NOLINT: constants read naturally in formulas
    MPoly(const Integer& c, CoeffDomain domain = CoeffDomain::exact());

    static MPoly var(Var v, CoeffDomain domain = CoeffDomain::exact());
    static MPoly monomial(const Integer& c, const Monomial& m, CoeffDomain domain = CoeffDomain::exact());
    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    static MPoly from_terms(std::vector<Term> terms, CoeffDomain domain);
    static MPoly parse(std::string_view text, CoeffDomain domain = CoeffDomain::exact());

    const CoeffDomain& domain() const { return domain_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    bool is_constant() const;
    Integer coeff(const Monomial& m) const;
    Integer constant_term() const { return coeff(Monomial()); }
    bool uses(Var v) const;
    std::uint64_t degree(Var v) const;
    const Term& leading_term() const;

    MPoly operator-() const;
    MPoly& operator+=(const MPoly& o);
    MPoly& operator-=(const MPoly& o);
    MPoly& operator*=(const MPoly& o);
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    MPoly scaled(const Integer& c) const;
    MPoly shifted(const Monomial& m) const;  // multiply by a monomial
    MPoly pow(unsigned long k) const;

    std::string to_string() const;

    friend bool operator==(const MPoly& a, const MPoly& b)
    {
        return a.domain_ == b.domain_ && a.terms_.size() == b.terms_.size() && equal_terms(a, b);
    }

private:
    static bool equal_terms(const MPoly& a, const MPoly& b);
    void check_same_domain(const MPoly& o) const;
    void add_scaled(const MPoly& o, int sign);

    CoeffDomain domain_;
    std::vector<Term> terms_;  // descending lex order
};

inline MPoly operator*(const MPoly& a, long c) { return a.scaled(Integer(c)); }
inline MPoly operator*(long c, const MPoly& a) { return a.scaled(Integer(c)); }

/// Variable map for substitution; unbound variables map to themselves.
using Bindings = std::map<Var, MPoly>;

/// The ring homomorphism fixing coefficients and sending each variable to its binding.
MPoly substitute(const MPoly& f, const Bindings& bindings);

struct NotDivisible {
    MPoly remainder;              // numerator of the remainder (zero when only the quotient is fractional)
    Integer remainder_denominator;
    bool fractional_quotient = false;
};

/// quotient, or NotDivisible; a returned quotient q satisfies b*q == a exactly.
using DivResult = std::variant<MPoly, NotDivisible>;

/// Exact division. Over Z the division runs over Q (lex leading-term
/// reduction) and the quotient is accepted only if it is integral; over Z/p^N
/// the leading coefficient of b must be a unit.
DivResult exact_divide(const MPoly& a, const MPoly& b);
inline bool divides(const MPoly& b, const MPoly& a) { return std::holds_alternative<MPoly>(exact_divide(a, b)); }
/// Returns the quotient or throws PolyError.
MPoly divide_or_throw(const MPoly& a, const MPoly& b, std::string_view what);

/// Divides every coefficient by p^k. Over Z/p^N the precision drops to N-k.
MPoly divide_by_p(const MPoly& a, unsigned p, unsigned k);

/// Minimum u-exponent over the terms; nullopt stands for +infinity (zero polynomial).
std::optional<std::uint64_t> u_valuation(const MPoly& a);

/// Z[...] -> Z/p^N[...], canonical representatives in [0, p^N).
MPoly reduce_mod_pn(const MPoly& a, OddPrime p, unsigned N);
/// Z/p^N[...] -> Z[...] using the canonical representatives.
MPoly lift_to_integers(const MPoly& a);

/// Change of coordinates: w -> z - 1 and z -> 1 + w (ring isomorphisms of Z[u,w] = Z[u,z]).
MPoly to_z_coords(const MPoly& f);
MPoly to_w_coords(const MPoly& f);

}  // namespace crs
