#include "crs/crs_verify.hpp"

#include <random>
#include <stdexcept>

namespace crs {

namespace {

MPoly u_power(std::uint64_t k) { return MPoly::monomial(1, Monomial::of(Var::u, static_cast<std::uint32_t>(k))); }

const char* coords_name(Coords c) { return c == Coords::Z ? "z" : "w"; }

}  // namespace

MPoly make_omega(OddPrime p, Coords c)
{
    const MPoly g = one_plus_w(c);
    MPoly omega;
    MPoly power(1);
    for (unsigned j = 0; j < p; ++j) {
        omega += power;
        power = power * g;
    }
    if (!(divide_or_throw(v_elem(p, c), w_elem(c), "omega") == omega)) {
        throw std::logic_error("omega: sum form and quotient form disagree");
    }
    return omega;
}

MPoly phi_s_v(OddPrime p, unsigned s, Coords c)
{
    return one_plus_w(c).pow(upow(p, s + 1)) - MPoly(1);
}

MPoly make_xi(OddPrime p, unsigned s, unsigned i, Coords c)
{
    if (i > s) throw std::out_of_range("xi_{s,i} needs 0 <= i <= s");
    const MPoly omega = make_omega(p, c);
    MPoly product = w_elem(c);
    for (unsigned j = i + 1; j <= s; ++j) product *= frobenius(omega, p, j);

    MPoly denom = omega;
    for (unsigned j = 1; j <= i; ++j) denom *= frobenius(omega, p, j);
    MPoly quotient = divide_or_throw(phi_s_v(p, s, c), denom, "xi quotient form");
    if (!(quotient == product)) throw std::logic_error("xi_{s,i}: quotient form and product form disagree");
    return product;
}

CrsIdeal make_Is(OddPrime p, unsigned s, Coords c)
{
    CrsIdeal ideal;
    ideal.s = s;
    ideal.p = p;
    ideal.coords = c;
    for (unsigned i = 0; i <= s; ++i) ideal.gens.push_back(make_xi(p, s, i, c) * u_power(upow(p, i)));
    return ideal;
}

bool MembershipCert::recheck(const CrsIdeal& ideal) const
{
    if (coefficients.size() != ideal.gens.size()) return false;
    MPoly sum;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        if (!coefficients[k].is_zero()) sum += coefficients[k] * ideal.gens[k];
    }
    return sum == target;
}

nlohmann::json LemmaReport::to_json() const
{
    nlohmann::json j;
    j["lemma"] = lemma;
    j["params"] = params;
    j["verdict"] = pass ? "pass" : "fail";
    nlohmann::json w = nlohmann::json::array();
    for (const auto& np : witness) w.push_back({{"name", np.name}, {"poly", np.poly.to_string()}});
    j["witness"] = w;
    j["details"] = details;
    j["notes"] = notes;
    j["seed"] = seed;
    j["elapsed_ms"] = elapsed_ms ? nlohmann::json(*elapsed_ms) : nlohmann::json(nullptr);
    return j;
}

// ---------------------------------------------------------------------------

MPoly geometric_quotient(unsigned i, unsigned s, OddPrime p, Coords c)
{
    if (i < 1) throw std::invalid_argument("geometric_quotient needs i >= 1");
    const MPoly step = one_plus_w(c).pow(upow(p, s + 1));
    MPoly sum;
    MPoly power(1);
    for (unsigned j = 0; j < i; ++j) {
        sum += power;
        if (j + 1 < i) power *= step;
    }
    return sum;
}

MPoly lemma_coeff_witness(const MPoly& f, unsigned s, OddPrime p, Coords c)
{
    for (const auto& t : f.terms()) {
        for (unsigned k = 0; k < kNumVars; ++k) {
            if (static_cast<Var>(k) != Var::u && t.mono[static_cast<Var>(k)] != 0) {
                throw std::invalid_argument("lemma-coeff expects f in Z[u]");
            }
        }
    }
    if (!f.domain().is_exact()) throw std::invalid_argument("lemma-coeff expects integer coefficients");

    // (1+w)^(p^(s+1) j) for j = 0..deg-1, shared by all terms
    std::vector<MPoly> partial;  // partial[i-1] = geometric_quotient(i)
    const MPoly step = one_plus_w(c).pow(upow(p, s + 1));
    MPoly power(1);
    MPoly sum;
    const auto deg = f.degree(Var::u);
    for (std::uint64_t i = 1; i <= deg; ++i) {
        sum += power;
        partial.push_back(sum);
        if (i < deg) power *= step;
    }
    MPoly Q;
    for (const auto& t : f.terms()) {
        auto i = t.mono[Var::u];
        if (i == 0) continue;
        Q += partial[i - 1].scaled(t.coeff) * u_power(i - 1);
    }
    return Q;
}

LemmaReport verify_lemma_coeff(const MPoly& f, unsigned s, OddPrime p, Coords c)
{
    LemmaReport r;
    r.lemma = "lemma-coeff";
    r.params = {{"p", p.value()}, {"s", s}, {"f", f.to_string()}, {"coords", coords_name(c)}};
    MPoly Q = lemma_coeff_witness(f, s, p, c);
    MPoly lhs = tau_power(f, p, s, c) - f;
    MPoly rhs = phi_s_v(p, s, c) * MPoly::var(Var::u) * Q;
    r.pass = lhs == rhs;
    r.witness.push_back({"Q", Q});
    if (!r.pass) r.details["residual"] = (lhs - rhs).to_string();
    return r;
}

LemmaReport lemma_coeff_trials(OddPrime p, unsigned s, unsigned trials, unsigned deg, long bound,
                               std::uint64_t seed, Coords c)
{
    LemmaReport r;
    r.lemma = "lemma-coeff";
    r.params = {{"p", p.value()}, {"s", s}, {"trials", trials}, {"deg", deg}, {"bound", bound},
                {"coords", coords_name(c)}};
    r.seed = seed;
    r.pass = true;
    std::mt19937_64 rng(seed);
    const MPoly scale = phi_s_v(p, s, c) * MPoly::var(Var::u);
    nlohmann::json failures = nlohmann::json::array();
    for (unsigned t = 0; t < trials; ++t) {
        MPoly f = random_poly_u(rng, deg, bound);
        MPoly Q = lemma_coeff_witness(f, s, p, c);
        bool ok = tau_power(f, p, s, c) - f == scale * Q;
        if (!ok) {
            r.pass = false;
            failures.push_back({{"trial", t}, {"f", f.to_string()}});
        }
        r.witness.push_back({"Q[" + std::to_string(t) + "]", Q});
    }
    r.details["failures"] = failures;
    return r;
}

// ---------------------------------------------------------------------------

LemmaReport verify_delta_ideal(OddPrime p, unsigned s, Coords c)
{
    LemmaReport r;
    r.lemma = "delta-ideal";
    r.params = {{"p", p.value()}, {"s", s}, {"coords", coords_name(c)}};
    r.pass = true;
    const CrsIdeal ideal = make_Is(p, s, c);
    nlohmann::json cells = nlohmann::json::array();
    for (unsigned i = 0; i <= s; ++i) {
        unsigned target = std::min(i + 1, s);
        MPoly d = delta(ideal.gens[i], p);
        auto q = exact_divide(d, ideal.gens[target]);
        nlohmann::json cell = {{"i", i}, {"divisor_index", target}};
        if (auto* cof = std::get_if<MPoly>(&q)) {
            MembershipCert cert{d, std::vector<MPoly>(ideal.gens.size())};
            cert.coefficients[target] = *cof;
            cell["certificate_rechecked"] = cert.recheck(ideal);
            if (!cert.recheck(ideal)) r.pass = false;
            r.witness.push_back({"cofactor[" + std::to_string(i) + "]", *cof});
        }
        else {
            r.pass = false;
            cell["certificate_rechecked"] = false;
            cell["remainder"] = std::get<NotDivisible>(q).remainder.to_string();
        }
        cells.push_back(cell);
    }
    r.details["cells"] = cells;
    return r;
}

LemmaReport verify_tau_stability(OddPrime p, unsigned s, Coords c)
{
    LemmaReport r;
    r.lemma = "tau-stability";
    r.params = {{"p", p.value()}, {"s", s}, {"coords", coords_name(c)}};
    r.pass = true;
    const CrsIdeal ideal = make_Is(p, s, c);
    const MPoly g = one_plus_w(c);
    nlohmann::json cells = nlohmann::json::array();

    auto check = [&](const std::string& name, const MPoly& image, const MPoly& expected_cofactor,
                     std::size_t gen_index) {
        MembershipCert cert{image, std::vector<MPoly>(ideal.gens.size())};
        cert.coefficients[gen_index] = expected_cofactor;
        bool ok = cert.recheck(ideal);
        if (!ok) r.pass = false;
        cells.push_back({{"element", name}, {"generator", gen_index}, {"certificate_rechecked", ok}});
        r.witness.push_back({name, expected_cofactor});
    };

    for (unsigned i = 0; i <= s; ++i) {
        const std::string idx = std::to_string(i);
        check("tau(gen[" + idx + "])", tau_power(ideal.gens[i], p, 0, c), g.pow(upow(p, i + 1)), i);
        check("tau^(p^s)(gen[" + idx + "])", tau_power(ideal.gens[i], p, s, c), g.pow(upow(p, s + i + 1)), i);
    }

    // phi^s(v) u A is stable: tau scales it by (1+w)^p
    const MPoly base = phi_s_v(p, s, c) * MPoly::var(Var::u);
    const MPoly tb = tau_power(base, p, 0, c);
    bool ok = tb == g.pow(p) * base;
    if (!ok) r.pass = false;
    cells.push_back({{"element", "tau(phi^s(v) u)"}, {"cofactor", g.pow(p).to_string()}, {"identity_holds", ok}});

    // tau(u) - u = omega * (w u) lies in I_0
    if (s == 0) {
        MPoly u = MPoly::var(Var::u);
        check("tau(u) - u", tau_power(u, p, 0, c) - u, make_omega(p, c), 0);
    }
    r.details["cells"] = cells;
    return r;
}

// ---------------------------------------------------------------------------

MPoly theta(const PrismParams& params, unsigned s, unsigned i)
{
    if (i > s) throw std::out_of_range("theta_{s,i} needs 0 <= i <= s");
    MPoly t = u_power(upow(params.p(), i));
    for (unsigned j = i + 1; j <= s; ++j) t *= frobenius(params.E(), params.p(), j);
    return t;
}

LemmaReport verify_is_mod_pn(const PrismParams& params, unsigned n, unsigned s)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const OddPrime p = params.p();
    LemmaReport r;
    r.lemma = "is-mod-pn";
    r.params = {{"p", p.value()}, {"e", params.e()}, {"eisenstein", params.E().to_string()}, {"n", n}, {"s", s}};
    unsigned t = s + 1 > n ? s + 1 - n : 0;
    const std::uint64_t bound = upow(p, t);
    r.pass = true;
    nlohmann::json vals = nlohmann::json::array();
    nlohmann::json slack = nlohmann::json::array();
    for (unsigned i = 0; i <= s; ++i) {
        MPoly reduced = reduce_mod_pn(theta(params, s, i), p, n);
        auto val = u_valuation(reduced);
        if (val) {
            vals.push_back(*val);
            slack.push_back(static_cast<std::int64_t>(*val) - static_cast<std::int64_t>(bound));
            if (*val < bound) r.pass = false;
        }
        else {
            vals.push_back("inf");
            slack.push_back("inf");
        }
    }
    r.details = {{"t", t}, {"bound", bound}, {"valuations", vals}, {"slack", slack}};
    r.notes.push_back("cited step: xi_{s,i} / xi'_{s,i} is a unit of A_inf, so I_s mod p^n is controlled by theta_{s,i}");
    return r;
}

// ---------------------------------------------------------------------------

LemmaReport verify_blowup_generator(const MPoly& y, const PrismParams& params, unsigned s, Coords c)
{
    const OddPrime p = params.p();
    const MPoly& E = params.E();
    LemmaReport r;
    r.lemma = "blowup-generator";
    r.params = {{"p", p.value()}, {"e", params.e()}, {"eisenstein", E.to_string()}, {"s", s}, {"y", y.to_string()},
                {"coords", coords_name(c)}};
    const MPoly scale = phi_s_v(p, s, c) * MPoly::var(Var::u);
    const MPoly Qy = lemma_coeff_witness(y, s, p, c);
    const MPoly QE = lemma_coeff_witness(E, s, p, c);
    const MPoly ty = tau_power(y, p, s, c);
    const MPoly tE = tau_power(E, p, s, c);
    bool witnesses_ok = (ty - y == scale * Qy) && (tE - E == scale * QE);
    MPoly num = ty * E - y * tE;
    bool identity = num == scale * (Qy * E - y * QE);
    r.pass = witnesses_ok && identity;
    r.witness.push_back({"Q_y", Qy});
    r.witness.push_back({"Q_E", QE});
    r.details = {{"lemma_coeff_witnesses", witnesses_ok}, {"numerator_identity", identity}};
    r.notes.push_back("cited step: omega = unit * E(u) in A_inf turns phi^s(v) u / E(u) into an element of I_s");
    return r;
}

LemmaReport blowup_trials(const PrismParams& params, unsigned s, unsigned trials, unsigned deg, std::uint64_t seed,
                          Coords c)
{
    const OddPrime p = params.p();
    LemmaReport r;
    r.lemma = "blowup-generator";
    r.params = {{"p", p.value()}, {"e", params.e()}, {"eisenstein", params.E().to_string()}, {"s", s},
                {"trials", trials}, {"deg", deg}, {"coords", coords_name(c)}};
    r.seed = seed;
    r.pass = true;
    std::mt19937_64 rng(seed);
    nlohmann::json failures = nlohmann::json::array();
    for (unsigned t = 0; t < trials; ++t) {
        MPoly y = random_poly_u(rng, deg, 50);
        LemmaReport one = verify_blowup_generator(y, params, s, c);
        if (!one.pass) {
            r.pass = false;
            failures.push_back({{"trial", t}, {"y", y.to_string()}});
        }
        if (t == 0) r.witness = one.witness;
    }
    r.details["failures"] = failures;
    r.notes.push_back("cited step: omega = unit * E(u) in A_inf turns phi^s(v) u / E(u) into an element of I_s");
    return r;
}

}  // namespace crs
