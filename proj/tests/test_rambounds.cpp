#include "crs/rambounds.hpp"

#include <doctest.h>

#include <random>

using namespace crs;

namespace {

Rational Q(long n, long d = 1)
{
    Rational q(n, d);
    q.canonicalize();
    return q;
}

const OddPrime p3(3);
const OddPrime p5(5);

// phi in Serre's numbering, integrated directly from the filtration of Gal(Q_p(zeta_{p^n})/Q_p):
// G_u has order (p-1)p^(n-1) for u <= 0 and p^(n-k) for p^(k-1) - 1 < u <= p^k - 1.
Rational serre_phi_cyclotomic(unsigned p, unsigned n, const Rational& u)
{
    if (u <= 0) return u;
    const Rational g0 = Q(static_cast<long>((p - 1) * upow(p, n - 1)));
    Rational acc = 0, lo = 0;
    for (unsigned k = 1; k <= n + 1; ++k) {
        Rational hi = k <= n ? Rational(static_cast<long>(upow(p, k)) - 1) : u;
        Rational order = k <= n ? Q(static_cast<long>(upow(p, n - k))) : Q(1);
        Rational top = u < hi ? u : hi;
        if (top > lo) acc += (top - lo) * order / g0;
        if (u <= hi) break;
        lo = hi;
    }
    return acc;
}

}  // namespace

TEST_CASE("floor_log_p")
{
    CHECK(floor_log_p(Q(3, 2), 3) == 0);
    CHECK(floor_log_p(Q(9), 3) == 2);
    CHECK(floor_log_p(Q(15, 2), 3) == 1);
    CHECK(floor_log_p(Q(1, 3), 3) == -1);
    CHECK(floor_log_p(Q(1, 4), 3) == -2);
    CHECK(floor_log_p(Q(8, 9), 3) == -1);
    CHECK_THROWS(floor_log_p(Q(0), 3));
    CHECK_THROWS(floor_log_p(Q(-1), 3));
    for (long k = 0; k < 30; ++k) CHECK(floor_log_p(Q(static_cast<long>(upow(5, k % 20))), 5) == k % 20);
}

TEST_CASE("alpha and beta")
{
    auto c = alpha_beta(p3, 1, 1);
    CHECK(c.alpha == 1);
    CHECK(c.beta == Q(1, 6));
    CHECK(c.a == Q(3, 2));
    CHECK(c.b == Q(1, 2));
    auto d = alpha_beta(p3, 2, 5);
    CHECK(d.alpha == 2);
    CHECK(d.beta == Q(14, 9));
    auto f = alpha_beta(p5, 1, 2);
    CHECK(f.alpha == 1);
    CHECK(f.beta == Q(3, 10));
}

TEST_CASE("main and different bounds")
{
    CHECK(mu_bound_main(p3, 1, 1) == Q(5, 2));
    CHECK(mu_bound_main(p3, 2, 5) == Q(59, 9));
    for (unsigned p : {5u, 7u, 11u, 13u}) {
        for (unsigned i = 2; i < p - 1; ++i) {
            CHECK(mu_bound_main(OddPrime(p), 1, i) == 2 - Q(1, p) + Q(i, p - 1));
        }
    }
    CHECK(different_bound_main(p3, 1, 1) == Q(13, 6));
    CHECK(different_bound_main(p3, 2, 5) == Q(59, 9));
    CHECK(different_bound_main(p5, 1, 2) == 2 + Q(3, 10));
}

TEST_CASE("simplified bounds")
{
    auto a = simplified_bounds(p3, 2, 1);
    REQUIRE(a.size() == 2);
    CHECK(a[1].case_name == "i=1");
    CHECK(a[1].value == 4);
    auto b = simplified_bounds(p3, 2, 5);
    CHECK(b[0].case_name == "e<=p");
    CHECK(b[0].value == 7);
    auto c = simplified_bounds(p3, 7, 2);
    CHECK(c[0].case_name == "e>p");
    CHECK(c[0].value == 1 + 7 * 2 + 3);

    for (unsigned p : {3u, 5u, 7u}) {
        for (unsigned e = 1; e <= 30; ++e) {
            for (unsigned i = 1; i <= 30; ++i) {
                Rational main = mu_bound_main(OddPrime(p), e, i);
                for (const auto& s : simplified_bounds(OddPrime(p), e, i)) {
                    if (s.case_name != "e>p") CHECK(s.value >= main);
                }
            }
        }
    }
}

TEST_CASE("the e>p simplified bound undercuts the main bound in places")
{
    // the e>p form is stated for a modified theorem with ie in place of (i-1)e
    auto s = simplified_bounds(p3, 7, 2);
    CHECK(s[0].value == 18);
    CHECK(mu_bound_main(p3, 7, 2) == Q(37, 2));
    CHECK(s[0].value < mu_bound_main(p3, 7, 2));
}

TEST_CASE("Caruso-Liu row")
{
    CHECK(*caruso_liu_bound(p3, 1, 1).value == Q(5, 2));
    CHECK(*caruso_liu_bound(p3, 2, 5).value == Q(59, 9));
    auto cl = caruso_liu_bound(p3, 20, 7);
    CHECK(cl.components->alpha == 3);
    CHECK(alpha_beta(p3, 20, 7).alpha == 4);
    CHECK(*cl.value != mu_bound_main(p3, 20, 7));
    CHECK(*cl.value < mu_bound_main(p3, 20, 7));
}

TEST_CASE("Caruso row")
{
    auto c = caruso_bound(p3, 1, 1, Q(0), 1);
    CHECK(c.log_value->rational == Q(5, 2));
    CHECK(c.log_value->coeff == 1);
    CHECK(c.log_value->arg == 3);
    REQUIRE(c.value.has_value());
    CHECK(*c.value == Q(7, 2));
    // ip = p^k collapses the log
    CHECK(caruso_bound(p3, 2, 3, Q(1), 2).value.has_value());
    CHECK_FALSE(caruso_bound(p3, 2, 2, Q(1), 2).value.has_value());
    // tame K: 1 + e(log_p(ip) + 1) + e/(p-1)
    auto t = caruso_bound(p5, 3, 5, Q(0), 1);
    CHECK(*t.value == 1 + 3 * (2 + 1) + Q(3, 4));
    CHECK_THROWS(caruso_bound(p3, 1, 1, Q(-1), 1));
    CHECK_THROWS(caruso_bound(p3, 1, 1, Q(0), 0));
}

TEST_CASE("exact comparison with log terms")
{
    RationalPlusLog x{Q(0), Q(1), Q(2)};  // log_3 2 = 0.6309...
    CHECK(x.compare(Q(63, 100), 3) > 0);
    CHECK(x.compare(Q(64, 100), 3) < 0);
    RationalPlusLog y{Q(1), Q(-2), Q(6)};  // 1 - 2 log_3 6 = -2.2618...
    CHECK(y.compare(Q(-226, 100), 3) < 0);
    CHECK(y.compare(Q(-227, 100), 3) > 0);
    CHECK(x.decimal(3).substr(0, 12) == "0.6309297535");
    RationalPlusLog z{Q(1, 2), Q(3), Q(9)};
    CHECK(z.compare(Q(13, 2), 3) == 0);
}

TEST_CASE("Hattori and Fontaine-Abrashkin rows")
{
    CHECK(*hattori_bound(p5, 1, 1).value == Q(9, 4));
    CHECK(*hattori_bound(p5, 1, 3).value == Q(51, 20));
    CHECK_FALSE(hattori_bound(p3, 2, 1).applicable);
    CHECK(hattori_bound(p3, 2, 1).reason == "requires ie < p-1");
    CHECK(*fontaine_abrashkin_bound(p5, 1, 2).value == Q(3, 2));
    CHECK(*fontaine_abrashkin_bound(p3, 1, 1).value == Q(3, 2));
    CHECK_FALSE(fontaine_abrashkin_bound(p3, 1, 2).applicable);
    CHECK_FALSE(fontaine_abrashkin_bound(p5, 2, 1).applicable);
}

TEST_CASE("Herbrand phi")
{
    auto id = herbrand_phi(RamBreaks{});
    CHECK(id(Q(7, 2)) == Q(7, 2));
    auto phi = herbrand_phi(cyclotomic_breaks(p3, 2));
    CHECK(phi(Q(1)) == 1);
    CHECK(phi(Q(3)) == 2);
    CHECK(phi.final_slope == Q(1, 6));
    CHECK(phi.concave());
    for (unsigned n = 1; n <= 4; ++n) {
        auto f = herbrand_phi(cyclotomic_breaks(p5, n));
        for (long num = 4; num <= 800; num += 37) {
            Rational t = Q(num, 4);
            CHECK(f(t) == serre_phi_cyclotomic(5, n, t - 1) + 1);
        }
    }
    // synthetic two-segment data: order 4 on (0,2], order 2 on (2,5]
    RamBreaks b{{{Q(2), 4}, {Q(5), 2}}};
    auto g = herbrand_phi(b);
    CHECK(g(Q(2)) == 2);
    CHECK(g(Q(5)) == 2 + Q(3, 2));
    CHECK(g(Q(9)) == 2 + Q(3, 2) + 1);
    CHECK_THROWS(RamBreaks{{{Q(2), 4}, {Q(1), 2}}}.validate());
    CHECK_THROWS(RamBreaks{{{Q(1), 6}, {Q(3), 4}}}.validate());
    CHECK_THROWS(RamBreaks{{{Q(1), 2}, {Q(3), 2}}}.validate());
}

TEST_CASE("Herbrand psi")
{
    auto psi = herbrand_psi(herbrand_phi(cyclotomic_breaks(p3, 2)));
    CHECK(psi(Q(2)) == 3);
    CHECK(psi.convex());
    CHECK(herbrand_psi(herbrand_phi(RamBreaks{}))(Q(5)) == 5);
    std::mt19937_64 rng(0);
    std::uniform_int_distribution<long> num(0, 5000), den(1, 97);
    for (unsigned n = 1; n <= 4; ++n) {
        for (OddPrime p : {p3, p5}) {
            auto phi = herbrand_phi(cyclotomic_breaks(p, n));
            auto inv = herbrand_psi(phi);
            for (const auto& [x, y] : phi.points) CHECK(inv(y) == x);
            for (int k = 0; k < 100; ++k) {
                Rational t = Q(num(rng), den(rng));
                CHECK(inv(phi(t)) == t);
                CHECK(phi(inv(t)) == t);
            }
        }
    }
}

TEST_CASE("conventions")
{
    CHECK(convert_convention(Q(2), Convention::ShiftedUpper, Convention::SerreUpper) == 1);
    CHECK(convert_convention(Q(2), Convention::ShiftedUpper, Convention::FontaineUpper) == 2);
    CHECK(convert_convention(Q(3), Convention::ShiftedLower, Convention::FontaineLower, Q(6)) == Q(1, 2));
    CHECK(convert_convention(Q(3), Convention::ShiftedLower, Convention::SerreLower) == 2);
    CHECK_THROWS(convert_convention(Q(3), Convention::ShiftedLower, Convention::FontaineLower));
    CHECK_THROWS(convert_convention(Q(3), Convention::ShiftedLower, Convention::ShiftedUpper));
    for (auto from : {Convention::SerreLower, Convention::FontaineLower, Convention::ShiftedLower}) {
        for (auto to : {Convention::SerreLower, Convention::FontaineLower, Convention::ShiftedLower}) {
            Rational x = Q(17, 5);
            CHECK(convert_convention(convert_convention(x, from, to, Q(4)), to, from, Q(4)) == x);
        }
    }
    CHECK(convention_from_name("serre-upper") == Convention::SerreUpper);
    CHECK_THROWS(convention_from_name("herbrand"));
}

TEST_CASE("breaks, transitivity and c0")
{
    auto b1 = cyclotomic_breaks(p3, 1);
    REQUIRE(b1.breaks.size() == 1);
    CHECK(b1.breaks[0].second == 2);
    auto b2 = cyclotomic_breaks(p3, 2);
    CHECK(b2.breaks == std::vector<std::pair<Rational, unsigned long>>{{Q(1), 6}, {Q(3), 3}});
    CHECK(last_lower_break(b2) == 3);
    CHECK(last_upper_break(b2) == 2);

    auto id = herbrand_phi(RamBreaks{});
    CHECK(transitivity_mu(Q(0), id, Q(7, 3)) == Q(7, 3));
    CHECK(transitivity_mu(Q(10), herbrand_phi(b2), Q(4)) == 10);
    CHECK(transitivity_mu(Q(2), herbrand_phi(b2), Q(9)) == 3);

    CHECK(c0_of(herbrand_psi(id), 1) == 0);
    CHECK(c0_of(herbrand_psi(herbrand_phi(b2)), 6) == 4);
    CHECK(c0_of(herbrand_psi(herbrand_phi(cyclotomic_breaks(p3, 3))), 18) == 28);
    CHECK_THROWS(c0_of(herbrand_psi(herbrand_phi(b2)), 5));
    for (OddPrime p : {p3, p5, OddPrime(7)}) {
        for (unsigned n = 1; n <= 5; ++n) {
            unsigned e = static_cast<unsigned>((p - 1) * upow(p, n - 1));
            CHECK(c0_of(herbrand_psi(herbrand_phi(cyclotomic_breaks(p, n))), e) == cyclotomic_c0_formula(p, n));
        }
    }
}

TEST_CASE("different of K_s")
{
    CHECK(different_Ks(p3, 1, 0) == 0);
    // v_K(p pi_s^(p^s - 1)) from the derivative of x^(p^s) - pi
    for (unsigned e : {1u, 2u, 5u}) {
        for (unsigned s = 1; s <= 3; ++s) {
            Rational v_pi_s = Q(1, static_cast<long>(upow(3, s)));
            CHECK(different_Ks(p3, e, s) == Rational(e) * s + (static_cast<long>(upow(3, s)) - 1) * v_pi_s);
        }
    }
    CHECK(different_Ks(p3, 1, 1) == Q(5, 3));
    CHECK(different_Ks(p3, 2, 2) == Q(44, 9));
}

TEST_CASE("proof-chain assembly")
{
    auto a = assemble_final_bound(p3, 1, 1);
    CHECK(a.value == Q(5, 2));
    REQUIRE(a.trace.size() >= 4);
    CHECK(a.trace[0].value == 1);
    CHECK(a.trace[1].value == Q(1, 2));
    CHECK(a.trace[2].value == 1 + 1 + Q(1, 2));
    CHECK(a.trace[3].value == 1 + 1 + (Q(3, 2) - 1) / 3);
    CHECK(assemble_final_bound(p3, 2, 5).value == Q(59, 9));
    CHECK(assemble_final_bound(p5, 1, 2).value == mu_bound_main(p5, 1, 2));
}

TEST_CASE("named fields and tables")
{
    auto cyc = named_field("cyclotomic:3:2");
    CHECK(cyc.e == 6);
    CHECK(cyc.caruso.c0 == 4);
    CHECK(cyc.caruso.s0 == 2);
    auto k = named_field("kummer:3:3");
    CHECK(k.e == 27);
    CHECK(k.caruso.c0 == 81);
    CHECK(k.caruso.s0 == 1);
    CHECK(named_field("qp").e == 1);
    CHECK_THROWS(named_field("cyclotomic:4:2"));
    CHECK_THROWS(named_field("lubin-tate:3:2"));

    auto rows = compare_table(p5, 1, 1, std::nullopt);
    REQUIRE(rows.size() == 5);
    CHECK(method_name(rows[0].method) == "Main");
    CHECK(method_name(rows[4].method) == "FontaineAbrashkin");
    CHECK(*rows[0].value == Q(9, 4));
    CHECK(*rows[1].value == Q(9, 4));
    CHECK(*rows[3].value == Q(9, 4));
    CHECK(*rows[4].value == Q(5, 4));
    CHECK_FALSE(rows[2].applicable);

    auto r325 = compare_table(p3, 2, 5, std::nullopt);
    CHECK_FALSE(r325[3].applicable);
    CHECK_FALSE(r325[4].applicable);

    auto r362 = compare_table(p3, 6, 2, cyc.caruso);
    CHECK(r362[2].applicable);
    CHECK(r362[2].log_value->rational == 1 + 4 + 6 * 2 + 3);

    auto j = bound_row_json(rows[0], 5);
    CHECK(j["value_exact"] == "9/4");
    CHECK(j["value_float"] == 2.25);
    CHECK(j["components"]["alpha"] == 1);
}

TEST_CASE("cyclotomic example differences")
{
    CHECK(cyclotomic_c0_formula(p3, 2) == 4);
    CHECK(cyclotomic_c0_formula(p3, 3) == 28);
    auto d1 = example_diff_cyclotomic(p3, 2, 2);
    CHECK(d1.compare(Q(6), 3) > 0);
    CHECK(example_diff_cyclotomic(p3, 3, 2).compare(Q(36), 3) > 0);
    CHECK(example_diff_cyclotomic(p5, 2, 3).compare(Q(20), 5) > 0);
    CHECK_THROWS(example_diff_cyclotomic(p3, 1, 2));
    CHECK_THROWS(example_diff_cyclotomic(p3, 2, 1));
}
