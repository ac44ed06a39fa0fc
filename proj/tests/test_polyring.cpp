#include "crs/polyring.hpp"
#include "crs/prism.hpp"

#include <doctest.h>

#include <random>

using namespace crs;

namespace {

MPoly P(const char* s) { return MPoly::parse(s); }

MPoly random_poly(std::mt19937_64& rng, CoeffDomain d)
{
    std::uniform_int_distribution<int> c(-20, 20), e(0, 3), n(1, 6);
    std::vector<Term> terms;
    int count = n(rng);
    for (int k = 0; k < count; ++k) {
        Monomial m;
        m.set(Var::u, e(rng));
        m.set(Var::w, e(rng));
        if (k % 3 == 0) m.set(Var::x1, e(rng));
        terms.push_back({m, Integer(c(rng))});
    }
    return MPoly::from_terms(terms, d);
}

}  // namespace

TEST_CASE("odd prime guard")
{
    CHECK_THROWS_WITH(OddPrime(2), doctest::Contains("p must be an odd prime"));
    CHECK_THROWS(OddPrime(9));
    CHECK_THROWS(CoeffDomain::residue(OddPrime(3), 0));
    CHECK(OddPrime(5).value() == 5);
}

TEST_CASE("text format round trip")
{
    CHECK(P("u^4 - 3*u + 9*w^2").to_string() == "u^4 - 3*u + 9*w^2");
    CHECK(P(" 9 * w ^ 2+u^4-3*u ").to_string() == "u^4 - 3*u + 9*w^2");
    CHECK(P("(1+w)^3").to_string() == "w^3 + 3*w^2 + 3*w + 1");
    CHECK(P("2*x3*z - x9").to_string() == "2*z*x3 - x9");
    CHECK(P("0").is_zero());
    CHECK(P("-u").to_string() == "-u");
    CHECK_THROWS_AS(P("2*u^2^1"), ParseError);
    CHECK_THROWS_AS(P("u^"), ParseError);
    CHECK_THROWS_AS(P("q+1"), ParseError);
    CHECK_THROWS_AS(P("(u+1"), ParseError);
}

TEST_CASE("arithmetic examples")
{
    CHECK((P("u+w") * P("u-w")) == P("u^2 - w^2"));
    CHECK(P("1+w").pow(3) == P("1+3*w+3*w^2+w^3"));
    auto d = CoeffDomain::residue(OddPrime(3), 1);
    CHECK(MPoly::parse("u^3-3", d) * MPoly::parse("u^9-3", d) == MPoly::parse("u^12", d));
    CHECK_THROWS_AS(P("u") + MPoly::parse("u", d), DomainMismatch);
}

TEST_CASE("substitute examples")
{
    CHECK(substitute(P("u^2"), {{Var::u, P("u^3")}}) == P("u^6"));
    CHECK(substitute(P("u+w"), {{Var::u, P("(1+w)^3*u")}}) == P("(1+w)^3*u + w"));
    CHECK_THROWS_AS(substitute(P("u"), {{Var::u, MPoly::parse("u", CoeffDomain::residue(OddPrime(3), 2))}}),
                    DomainMismatch);
}

TEST_CASE("exact_divide examples")
{
    MPoly v = P("(1+w)^3 - 1");
    auto q = exact_divide(v * P("u"), v);
    REQUIRE(std::holds_alternative<MPoly>(q));
    CHECK(std::get<MPoly>(q) == P("u"));

    auto g = exact_divide(P("(1+w)^9 - 1"), v);
    REQUIRE(std::holds_alternative<MPoly>(g));
    CHECK(std::get<MPoly>(g) == P("1 + (1+w)^3 + (1+w)^6"));

    auto nd = exact_divide(P("u+1"), P("u"));
    REQUIRE(std::holds_alternative<NotDivisible>(nd));
    CHECK(std::get<NotDivisible>(nd).remainder == P("1"));

    auto frac = exact_divide(P("u"), P("2*u"));
    REQUIRE(std::holds_alternative<NotDivisible>(frac));
    CHECK(std::get<NotDivisible>(frac).fractional_quotient);

    CHECK_THROWS_AS(exact_divide(P("u"), P("0")), PolyError);
}

TEST_CASE("divide_by_p examples")
{
    CHECK(divide_by_p(P("3*w+3*w^2"), 3, 1) == P("w+w^2"));
    CHECK(divide_by_p(P("5*u"), 5, 1) == P("u"));
    CHECK_THROWS_AS(divide_by_p(P("u+1"), 3, 1), NotDivisibleByP);

    auto d = CoeffDomain::residue(OddPrime(3), 3);
    MPoly r = divide_by_p(MPoly::parse("9*u + 3", d), 3, 1);
    CHECK(r.domain() == CoeffDomain::residue(OddPrime(3), 2));
    CHECK(r == MPoly::parse("3*u + 1", r.domain()));
    CHECK_THROWS(divide_by_p(MPoly::parse("9*u", d), 3, 3));
}

TEST_CASE("u_valuation and reduce_mod_pn examples")
{
    CHECK(u_valuation(P("u^4 + u^7*w")) == 4u);
    CHECK_FALSE(u_valuation(P("0")).has_value());
    OddPrime p(3);
    CHECK(u_valuation(reduce_mod_pn(P("(u^3-3)*u"), p, 1)) == 4u);
    CHECK(lift_to_integers(reduce_mod_pn(P("u^3-3"), p, 1)) == P("u^3"));
    CHECK(lift_to_integers(reduce_mod_pn(P("9*u+3"), p, 2)) == P("3"));
    CHECK(lift_to_integers(reduce_mod_pn(P("(u^6-3)*(u^18-3)*u"), p, 1)) == P("u^25"));
    CHECK(lift_to_integers(reduce_mod_pn(P("-1"), p, 2)) == P("8"));
}

TEST_CASE("coordinate change is a ring isomorphism")
{
    MPoly f = P("u^2*w^3 - 7*w + u");
    CHECK(to_w_coords(to_z_coords(f)) == f);
    CHECK(to_z_coords(P("w")) == P("z - 1"));
    CHECK(to_z_coords(P("(1+w)^5")) == P("z^5"));
}

TEST_CASE("ring axioms on random triples")
{
    std::mt19937_64 rng(11);
    for (auto d : {CoeffDomain::exact(), CoeffDomain::residue(OddPrime(3), 2), CoeffDomain::residue(OddPrime(7), 3)}) {
        for (int t = 0; t < 40; ++t) {
            MPoly a = random_poly(rng, d), b = random_poly(rng, d), c = random_poly(rng, d);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a * b == b * a);
            CHECK(a + b == b + a);
            CHECK((a - a).is_zero());
            CHECK(a.pow(3) == a * a * a);
        }
    }
}

TEST_CASE("division and p-division round trips")
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 60; ++t) {
        MPoly a = random_poly(rng, CoeffDomain::exact());
        MPoly b = random_poly(rng, CoeffDomain::exact());
        if (b.is_zero()) continue;
        auto q = exact_divide(a * b, b);
        REQUIRE(std::holds_alternative<MPoly>(q));
        CHECK(std::get<MPoly>(q) == a);
        CHECK(divide_by_p(a.scaled(5), 5, 1) == a);
        CHECK(divide_by_p(a.scaled(9), 3, 2) == a);
    }
}

TEST_CASE("substitution laws")
{
    std::mt19937_64 rng(13);
    Bindings s1{{Var::u, P("u^2 + w")}, {Var::w, P("3*w - 1")}};
    Bindings s2{{Var::u, P("w*u")}, {Var::w, P("u + 2")}};
    Bindings composed;
    for (auto& [v, img] : s1) composed[v] = substitute(img, s2);
    for (int t = 0; t < 30; ++t) {
        MPoly f = random_poly(rng, CoeffDomain::exact());
        MPoly g = random_poly(rng, CoeffDomain::exact());
        CHECK(substitute(f * g, s1) == substitute(f, s1) * substitute(g, s1));
        CHECK(substitute(f, {{Var::u, P("u")}, {Var::w, P("w")}}) == f);
        CHECK(substitute(substitute(f, s1), s2) == substitute(f, composed));
    }
}

TEST_CASE("reduction commutes with arithmetic")
{
    std::mt19937_64 rng(14);
    OddPrime p(3);
    for (int t = 0; t < 40; ++t) {
        MPoly a = random_poly(rng, CoeffDomain::exact());
        MPoly b = random_poly(rng, CoeffDomain::exact());
        CHECK(reduce_mod_pn(a * b, p, 2) == reduce_mod_pn(a, p, 2) * reduce_mod_pn(b, p, 2));
        CHECK(reduce_mod_pn(a - b, p, 3) == reduce_mod_pn(a, p, 3) - reduce_mod_pn(b, p, 3));
    }
}
