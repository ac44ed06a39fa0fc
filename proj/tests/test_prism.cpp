#include "crs/prism.hpp"

#include <doctest.h>

using namespace crs;

namespace {

MPoly P(const char* s) { return MPoly::parse(s); }
const OddPrime p3(3);
const OddPrime p5(5);

}  // namespace

TEST_CASE("Eisenstein validation")
{
    CHECK(PrismParams::parse(3, "u^2-3").e() == 2);
    CHECK(PrismParams::parse(5, "u^4 + 5*u^2 - 5").eis() == std::vector<Integer>{-5, 0, 5, 0, 1});
    CHECK_THROWS_WITH(PrismParams::parse(3, "2*u^2-3"), doctest::Contains("monic"));
    CHECK_THROWS_WITH(PrismParams::parse(3, "u^2-9"), doctest::Contains("exactly once"));
    CHECK_THROWS_WITH(PrismParams::parse(3, "u^2+u-3"), doctest::Contains("u^1"));
    CHECK_THROWS_WITH(PrismParams::parse(3, "u^2-3*w"), doctest::Contains("u alone"));
    CHECK_THROWS_WITH(PrismParams::parse(3, "u"), doctest::Contains("exactly once"));
    CHECK_THROWS(PrismParams::parse(2, "u-2"));
}

TEST_CASE("frobenius examples")
{
    CHECK(frobenius(P("u"), p3) == P("u^3"));
    CHECK(frobenius(P("w"), p3) == P("3*w+3*w^2+w^3"));
    CHECK(frobenius(P("(1+w)^3-1"), p3) == P("(1+w)^9-1"));
    CHECK(frobenius(P("u*w+7"), p3, 0) == P("u*w+7"));
    CHECK(frobenius(P("z^2*u"), p5, 2) == P("z^50*u^25"));
}

TEST_CASE("tau examples")
{
    CHECK(tau_power(P("u"), p3, 0) == P("(1+w)^3*u"));
    CHECK(tau_power(P("w"), p3, 2) == P("w"));
    CHECK(tau_power(P("u^2"), p3, 1) == P("(1+w)^18*u^2"));
    CHECK(tau_power(P("u^2"), p3, 1, Coords::Z) == P("z^18*u^2"));
}

TEST_CASE("delta examples")
{
    CHECK(delta(P("u"), p3).is_zero());
    CHECK(delta(P("w"), p3) == P("w+w^2"));
    // delta(v) = v + v^2 with v = (1+w)^3 - 1, by the sum law applied to (1+v) - 1
    MPoly v = P("(1+w)^3-1");
    CHECK(delta(v, p3) == v + v * v);
    auto d = CoeffDomain::residue(p3, 3);
    MPoly r = delta(MPoly::parse("w", d), p3);
    CHECK(r.domain() == CoeffDomain::residue(p3, 2));
    CHECK(r == MPoly::parse("w+w^2", r.domain()));
}

TEST_CASE("Frobenius lifts x -> x^p and composes")
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        MPoly f = random_poly_uw(rng, 4, 9, Coords::W);
        CHECK(reduce_mod_pn(frobenius(f, p3) - f.pow(3), p3, 1).is_zero());
        CHECK(frobenius(f, p3, 2) == frobenius(frobenius(f, p3, 1), p3, 1));
        MPoly g = random_poly_uw(rng, 6, 9, Coords::Z);
        CHECK(reduce_mod_pn(frobenius(g, p5) - g.pow(5), p5, 1).is_zero());
        CHECK(frobenius(g, p5, 3) == frobenius(frobenius(g, p5, 2), p5, 1));
        CHECK(to_z_coords(frobenius(f, p3)) == frobenius(to_z_coords(f), p3));
    }
}

TEST_CASE("tau powers compose by exponent arithmetic")
{
    // k applications of tau^(p^s) send u to (1+w)^(p^(s+1) k) u
    MPoly f = P("u^3 - 2*u*w + 5");
    MPoly twice = tau_power(tau_power(f, p3, 1), p3, 1);
    MPoly direct = substitute(f, {{Var::u, P("(1+w)^18*u")}});
    CHECK(twice == direct);
    MPoly thrice = tau_power(tau_power(tau_power(f, p3, 0), p3, 0), p3, 0);
    CHECK(thrice == tau_power(f, p3, 1));
}

TEST_CASE("delta-ring laws")
{
    auto rep = check_delta_laws(2, 2, p3, 4, 0);
    CHECK(rep.all_pass());
    for (const char* law : {"frobenius", "product", "sum"}) {
        CHECK(std::any_of(rep.checks.begin(), rep.checks.end(), [&](const LawCheck& c) { return c.law == law; }));
    }
    CHECK(std::any_of(rep.checks.begin(), rep.checks.end(), [](const LawCheck& c) { return c.instance == "x * 1"; }));
    CHECK(std::any_of(rep.checks.begin(), rep.checks.end(), [](const LawCheck& c) { return c.instance == "x + 0"; }));
    CHECK(check_delta_laws(2, 2, p5, 4, 1).all_pass());
    CHECK(check_delta_laws(1, 3, p3, 3, 2).all_pass());
    CHECK_THROWS(check_delta_laws(2, 0, p3, 1, 0));
}

TEST_CASE("delta-depth is capped explicitly")
{
    FreeDeltaRing R(2, 2, p3);
    CHECK(R.depth_of(R.sym(1, 2) * R.sym(0)) == 2);
    CHECK(R.delta(R.sym(0)) == R.sym(0, 1));
    CHECK_THROWS_AS(R.delta(R.sym(0, 2)), DepthExhausted);
    CHECK_THROWS_AS(FreeDeltaRing(3, 3, p3), std::invalid_argument);
}

TEST_CASE("fraction arithmetic")
{
    auto params = PrismParams::parse(3, "u-3");
    const MPoly& E = params.E();
    LocElem a(P("u"), 1, E), b(P("(1+w)^3-1"), 1, E);
    auto sum = loc_arith(a, b, LocOp::Add);
    CHECK(sum.num() == P("u + (1+w)^3 - 1"));
    CHECK(sum.k() == 1);
    auto sq = loc_arith(a, a, LocOp::Mul);
    CHECK(sq.num() == P("u^2"));
    CHECK(sq.k() == 2);
    CHECK(LocElem(E, 1, E).equals(LocElem(P("1"), 0, E)));
    CHECK_FALSE(LocElem(P("u"), 1, E).equals(LocElem(P("1"), 0, E)));
    CHECK(loc_arith(LocElem(P("u"), 2, E), LocElem(P("1"), 0, E), LocOp::Sub).num() == P("u") - E * E);
    CHECK_THROWS(loc_arith(a, LocElem(P("u"), 1, P("u")), LocOp::Add));
}

TEST_CASE("tau on fractions")
{
    auto params = PrismParams::parse(3, "u-3");
    const MPoly& E = params.E();
    auto y = tau_on_loc(LocElem(P("u^2+w"), 0, E), 1, params);
    CHECK(y.num() == tau_power(P("u^2+w"), p3, 1));
    CHECK(y.k() == 0);
    auto one = tau_on_loc(LocElem(E, 1, E), 0, params);
    CHECK(one.equals(LocElem(P("1"), 0, one.base())));
    auto x = tau_on_loc(LocElem(P("u"), 1, E), 0, params);
    CHECK(x.num() == P("(1+w)^3*u"));
    CHECK(x.base() == P("(1+w)^3*u - 3"));
    CHECK_THROWS(tau_on_loc(LocElem(P("u"), 1, P("u")), 0, params));
}

TEST_CASE("phi and tau commute")
{
    CHECK(frobenius(tau_power(P("u"), p3, 0), p3) == P("(1+w)^9*u^3"));
    CHECK(tau_power(frobenius(P("u"), p3), p3, 0) == P("(1+w)^9*u^3"));
    CHECK(frobenius(tau_power(P("w"), p3, 0), p3) == tau_power(frobenius(P("w"), p3), p3, 0));
    CHECK(phi_tau_commute_check(p3, 0, 5, 10, 0).pass);
    CHECK(phi_tau_commute_check(p3, 1, 5, 6, 1).pass);
    CHECK(phi_tau_commute_check(p5, 2, 5, 10, 2, Coords::Z).pass);
}
