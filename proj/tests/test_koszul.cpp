#include "crs/koszul.hpp"
#include "crs/prism.hpp"

#include <doctest.h>

#include "koszul_brute.hpp"

#include <random>

using namespace crs;
using crs::testing::Brute;

namespace {

MPoly P(const char* s) { return MPoly::parse(s); }

std::vector<unsigned> engine(const FiniteRingSpec& R, const std::vector<MPoly>& seq)
{
    auto h = koszul_homology(KoszulComplex(R, seq));
    return {h.log_orders.begin(), h.log_orders.end()};
}

}  // namespace

TEST_CASE("finite ring specs")
{
    auto R = FiniteRingSpec::parse("Z/9[u]/(u^3)");
    CHECK(R.p() == 3);
    CHECK(R.N() == 2);
    CHECK(R.rank() == 3);
    CHECK(R.describe() == "Z/9[u]/(u^3)");
    auto S = FiniteRingSpec::parse("Z/3[u,w]/(u^2, w^2, u*w)");
    CHECK(S.rank() == 3);
    CHECK(FiniteRingSpec::parse("Z/27").rank() == 1);
    CHECK_THROWS_WITH(FiniteRingSpec::parse("Z/9[u,w]/(u^2)"), doctest::Contains("finite basis"));
    CHECK_THROWS(FiniteRingSpec::parse("Z/12"));
    CHECK_THROWS(FiniteRingSpec::parse("Z/8"));
    CHECK(R.in_max_ideal(P("3+u")));
    CHECK_FALSE(R.in_max_ideal(P("2+u")));
}

TEST_CASE("complex shapes")
{
    KoszulComplex a(FiniteRingSpec::parse("Z/9"), {P("3")});
    CHECK(a.term_rank(0) == 1);
    CHECK(a.term_rank(1) == 1);
    CHECK(a.boundary(1).data == std::vector<std::int64_t>{3});
    KoszulComplex b(FiniteRingSpec::parse("Z/3[u]/(u^2)"), {P("u"), P("u")});
    CHECK(b.term_rank(0) == 2);
    CHECK(b.term_rank(1) == 4);
    CHECK(b.term_rank(2) == 2);
    KoszulComplex c(FiniteRingSpec::parse("Z/9[u,w]/(u^2,w^2)"), {P("u"), P("3+w"), P("u*w"), P("w")}, 2);
    CHECK(c.term_rank(2) == 6 * 2 * 4);
}

TEST_CASE("homology examples")
{
    auto Z9 = FiniteRingSpec::parse("Z/9");
    CHECK(engine(Z9, {P("3")}) == std::vector<unsigned>{1, 1});
    CHECK(engine(Z9, {P("1")}) == std::vector<unsigned>{0, 0});
    auto R = FiniteRingSpec::parse("Z/3[u]/(u^2)");
    CHECK(engine(R, {P("u"), P("u")}) == Brute(R).homology({P("u"), P("u")}));
}

TEST_CASE("engine agrees with brute force on small rings")
{
    std::vector<std::pair<const char*, std::vector<const char*>>> cases = {
        {"Z/9", {"3"}},
        {"Z/9", {"3", "3"}},
        {"Z/9", {"2"}},
        {"Z/27", {"9", "3"}},
        {"Z/3[u]/(u^2)", {"u", "u"}},
        {"Z/3[u]/(u^3)", {"u"}},
        {"Z/3[u]/(u^3)", {"u^2", "u"}},
        {"Z/9[u]/(u^2)", {"3", "u"}},
        {"Z/9[u]/(u^2)", {"3*u + 3"}},
        {"Z/3[u,w]/(u^2, w^2)", {"u", "w"}},
        {"Z/3[u,w]/(u^2, w^2)", {"u*w"}},
        {"Z/3[u,w]/(u^2, w^2, u*w)", {"u+w", "u"}},
        {"Z/81", {"9", "27"}},
        {"Z/5[u]/(u^2)", {"u", "1+u"}},
    };
    for (auto& [spec, seqtext] : cases) {
        auto R = FiniteRingSpec::parse(spec);
        std::vector<MPoly> seq;
        for (auto s : seqtext) seq.push_back(P(s));
        INFO(spec);
        CHECK(engine(R, seq) == Brute(R).homology(seq));
    }
}

TEST_CASE("Smith valuations")
{
    auto R = FiniteRingSpec::parse("Z/27");
    ModMatrix m{2, 3, {3, 9, 0, 6, 18, 9}};
    auto v = smith_valuations(m, R);
    std::sort(v.begin(), v.end());
    CHECK(v == std::vector<unsigned>{1, 2});
    CHECK(log_image_size(m, R) == 3);
    CHECK(log_image_size(ModMatrix{1, 1, {0}}, R) == 0);
}

TEST_CASE("permutation invariance")
{
    auto R = FiniteRingSpec::parse("Z/9[u]/(u^3)");
    auto a = engine(R, {P("3"), P("u")});
    auto b = engine(R, {P("u"), P("3")});
    CHECK(a == b);
    CHECK(check_perm_invariance(R, {P("u+3")}).invariant);
    auto rep = check_perm_invariance(R, {P("u^2"), P("3"), P("u+3")});
    CHECK(rep.invariant);
    CHECK(rep.permutations == 6);
}

TEST_CASE("regularity against H_1")
{
    auto Z9 = FiniteRingSpec::parse("Z/9");
    auto r = check_reg_iff_h1(Z9, {P("3")});
    CHECK_FALSE(r.weakly_regular);
    CHECK_FALSE(r.h1_zero);
    CHECK(r.agreement);
    CHECK(r.hypothesis);

    auto unit = check_reg_iff_h1(Z9, {P("2")});
    CHECK(unit.weakly_regular);
    CHECK(unit.h1_zero);
    CHECK_FALSE(unit.hypothesis);
    CHECK_FALSE(unit.quotient_nonzero);

    auto R = FiniteRingSpec::parse("Z/3[u]/(u^3)");
    auto ru = check_reg_iff_h1(R, {P("u")});
    CHECK_FALSE(ru.weakly_regular);
    CHECK_FALSE(ru.h1_zero);
    CHECK(ru.pass());

    // a unit in the second slot hides a non-regular first element from Koszul homology
    auto mixed = check_reg_iff_h1(Z9, {P("3"), P("2")});
    CHECK_FALSE(mixed.weakly_regular);
    CHECK(mixed.all_h_zero);
    CHECK_FALSE(mixed.hypothesis);
}

TEST_CASE("Euler characteristic")
{
    auto R = FiniteRingSpec::parse("Z/9[u,w]/(u^2, w^3)");
    KoszulComplex cx(R, {P("u"), P("3*w"), P("u+w^2")}, 2);
    CHECK(euler_characteristic_consistent(cx, koszul_homology(cx)));
}

TEST_CASE("report json")
{
    auto R = FiniteRingSpec::parse("Z/9");
    KoszulComplex cx(R, {P("3")});
    auto j = koszul_report_json(cx, koszul_homology(cx), check_reg_iff_h1(R, {P("3")}));
    CHECK(j["spec"] == "Z/9");
    CHECK(j["homology_orders"][1]["order"] == "3");
    CHECK(j["regular"] == false);
    CHECK(j["verdict"] == "pass");
}

TEST_CASE("disjointness in Z[u,w]")
{
    OddPrime p(3);
    MPoly a = P("3*u*(w+1)");
    CHECK(divides(P("u"), a));
    CHECK(divides(P("3*u"), a));
    CHECK_FALSE(divides(P("u"), P("9*(u+1)")));
    for (auto [x, label] : std::vector<std::pair<MPoly, std::string>>{
             {P("u"), "u"}, {P("w"), "w"}, {P("(1+w)^3-1"), "v"}, {P("u^2-3"), "E"}, {P("3+3*w+w^2"), "omega"}}) {
        auto rep = disjointness_property(x, label, p, 2, 1, 8, 0);
        INFO(label);
        CHECK(rep.pass);
        CHECK(disjointness_property(x, label, p, 1, 2, 4, 1).pass);
    }
}
