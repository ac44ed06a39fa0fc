#include "crs/rambounds.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace crs {

using Decimal = boost::multiprecision::cpp_dec_float_50;

namespace {

Rational rat(long n, long d = 1)
{
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational p_power(unsigned p, long k)
{
    if (k >= 0) return Rational(ipow(Integer(p), static_cast<unsigned long>(k)));
    Rational q(Integer(1), ipow(Integer(p), static_cast<unsigned long>(-k)));
    return q;
}

Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

Decimal to_decimal(const Rational& q)
{
    return Decimal(q.get_num().get_str()) / Decimal(q.get_den().get_str());
}

std::string format_decimal(const Decimal& d, int digits)
{
    std::ostringstream os;
    os.precision(digits);
    os << d;
    return os.str();
}

}  // namespace

long floor_log_p(const Rational& q, unsigned p)
{
    if (sgn(q) <= 0) throw std::invalid_argument("floor_log_p needs q > 0");
    const Integer& n = q.get_num();
    const Integer& d = q.get_den();
    long t = 0;
    if (n >= d) {
        Integer pt = p;  // p^(t+1)
        while (pt * d <= n) {
            pt *= p;
            ++t;
        }
        return t;
    }
    Integer scaled = n;
    while (scaled < d) {
        scaled *= p;
        --t;
    }
    return t;
}

BoundComponents alpha_beta(OddPrime p, unsigned e, unsigned i)
{
    if (e < 1 || i < 1) throw std::invalid_argument("alpha_beta needs e >= 1 and i >= 1");
    const long pm1 = static_cast<long>(p) - 1;
    BoundComponents c;
    c.a = rat(static_cast<long>(i) * e * p, pm1);
    c.b = rat(static_cast<long>(i) * e, pm1);
    Rational first = rat(static_cast<long>(i) * p, pm1);
    Rational arg = first;
    c.max_arg = "ip/(p-1)";
    if (i > 1) {
        Rational second = rat(static_cast<long>(i - 1) * e, pm1);
        if (second > first) {
            arg = second;
            c.max_arg = "(i-1)e/(p-1)";
        }
        else if (second == first) {
            c.max_arg = "ip/(p-1) = (i-1)e/(p-1)";
        }
    }
    c.alpha = floor_log_p(arg, p) + 1;
    c.beta = (c.a - 1) / p_power(p, c.alpha);
    return c;
}

Rational mu_bound_main(OddPrime p, unsigned e, unsigned i)
{
    auto c = alpha_beta(p, e, i);
    return 1 + Rational(e) * c.alpha + rmax(c.beta, rat(e, static_cast<long>(p) - 1));
}

Rational different_bound_main(OddPrime p, unsigned e, unsigned i)
{
    auto c = alpha_beta(p, e, i);
    return 1 + Rational(e) * c.alpha + c.beta;
}

std::vector<SimplifiedBound> simplified_bounds(OddPrime p, unsigned e, unsigned i)
{
    std::vector<SimplifiedBound> out;
    const long pm1 = static_cast<long>(p) - 1;
    if (e <= p) {
        long f = floor_log_p(rat(static_cast<long>(i) * p, pm1), p);
        out.push_back({"e<=p", 1 + Rational(e) * (f + 1) + e});
    }
    else {
        long f = floor_log_p(rat(static_cast<long>(i) * e, pm1), p);
        out.push_back({"e>p", 1 + Rational(e) * (f + 1) + p.value()});
    }
    if (i == 1) out.push_back({"i=1", 1 + Rational(e) * (1 + rat(1, pm1))});
    return out;
}

// ---------------------------------------------------------------------------

namespace {

/// k with q = p^k, if any.
std::optional<long> exact_log(const Rational& q, unsigned p)
{
    if (sgn(q) <= 0) return std::nullopt;
    long t = floor_log_p(q, p);
    if (p_power(p, t) == q) return t;
    return std::nullopt;
}

/// sign(log_p(x) - t), x > 0.
int log_vs(const Rational& x, const Rational& t, unsigned p)
{
    // log_p(x) > r1/r2  <=>  x^r2 > p^r1
    const Integer& r1 = t.get_num();
    const Integer& r2 = t.get_den();
    if (!r2.fits_ulong_p() || !r1.fits_slong_p()) throw std::overflow_error("log comparison exponent too large");
    unsigned long e2 = r2.get_ui();
    Rational lhs(ipow(x.get_num(), e2), ipow(x.get_den(), e2));
    Rational rhs = p_power(p, r1.get_si());
    return cmp(lhs, rhs) > 0 ? 1 : (cmp(lhs, rhs) < 0 ? -1 : 0);
}

}  // namespace

std::optional<Rational> RationalPlusLog::exact(unsigned p) const
{
    if (sgn(coeff) == 0) return rational;
    auto k = exact_log(arg, p);
    if (!k) return std::nullopt;
    return rational + coeff * *k;
}

int RationalPlusLog::compare(const Rational& q, unsigned p) const
{
    Rational c = rational - q;
    if (auto e = exact(p)) return cmp(*e, q) > 0 ? 1 : (cmp(*e, q) < 0 ? -1 : 0);
    // c + k log_p(arg) = k (log_p(arg) - t) with t = -c / k
    Rational t = -c / coeff;
    int s = log_vs(arg, t, p);
    return sgn(coeff) > 0 ? s : -s;
}

std::string RationalPlusLog::decimal(unsigned p, int digits) const
{
    Decimal v = to_decimal(rational);
    if (sgn(coeff) != 0) v += to_decimal(coeff) * log(to_decimal(arg)) / log(Decimal(p));
    return format_decimal(v, digits);
}

std::string method_name(Method m)
{
    switch (m) {
    case Method::Main: return "Main";
    case Method::CarusoLiu: return "CarusoLiu";
    case Method::Caruso: return "Caruso";
    case Method::Hattori: return "Hattori";
    case Method::FontaineAbrashkin: return "FontaineAbrashkin";
    }
    return "?";
}

BoundResult main_bound(OddPrime p, unsigned e, unsigned i)
{
    BoundResult r;
    r.method = Method::Main;
    r.components = alpha_beta(p, e, i);
    r.value = mu_bound_main(p, e, i);
    return r;
}

BoundResult caruso_liu_bound(OddPrime p, unsigned e, unsigned i)
{
    BoundResult r;
    r.method = Method::CarusoLiu;
    BoundComponents c = alpha_beta(p, e, i);
    c.alpha = floor_log_p(rat(static_cast<long>(i) * p, static_cast<long>(p) - 1), p) + 1;
    c.beta = (c.a - 1) / p_power(p, c.alpha);
    c.max_arg = "ip/(p-1)";
    r.value = 1 + Rational(e) * c.alpha + rmax(c.beta, rat(e, static_cast<long>(p) - 1));
    r.components = c;
    return r;
}

BoundResult caruso_bound(OddPrime p, unsigned e, unsigned i, const Rational& c0, unsigned s0)
{
    if (sgn(c0) < 0) throw std::invalid_argument("c0 must be >= 0");
    if (s0 < 1) throw std::invalid_argument("s0 must be >= 1");
    BoundResult r;
    r.method = Method::Caruso;
    RationalPlusLog v;
    v.rational = 1 + c0 + Rational(e) * s0 + rat(e, static_cast<long>(p) - 1);
    v.coeff = e;
    v.arg = Rational(static_cast<long>(i) * p);
    r.log_value = v;
    r.value = v.exact(p);
    return r;
}

BoundResult hattori_bound(OddPrime p, unsigned e, unsigned i)
{
    BoundResult r;
    r.method = Method::Hattori;
    const long pm1 = static_cast<long>(p) - 1;
    if (static_cast<long>(i) * e >= pm1) {
        r.applicable = false;
        r.reason = "requires ie < p-1";
        return r;
    }
    if (i == 1) r.value = 1 + Rational(e) + rat(e, pm1);
    else r.value = 1 + Rational(e) + rat(static_cast<long>(e) * i, pm1) - rat(1, p);
    return r;
}

BoundResult fontaine_abrashkin_bound(OddPrime p, unsigned e, unsigned i)
{
    BoundResult r;
    r.method = Method::FontaineAbrashkin;
    if (e != 1 || i >= p - 1) {
        r.applicable = false;
        r.reason = "requires e = 1 and i < p-1";
        return r;
    }
    r.value = 1 + rat(i, static_cast<long>(p) - 1);
    return r;
}

// ---------------------------------------------------------------------------

void RamBreaks::validate() const
{
    Rational prev = 0;
    unsigned long prev_order = 0;
    for (std::size_t k = 0; k < breaks.size(); ++k) {
        const auto& [lambda, order] = breaks[k];
        if (lambda <= prev) throw std::invalid_argument("breaks must be positive and strictly increasing");
        if (order < 1) throw std::invalid_argument("orders must be positive");
        if (prev_order != 0 && (order >= prev_order || prev_order % order != 0)) {
            throw std::invalid_argument("orders must strictly decrease, each dividing the previous one");
        }
        if (order == 1 && k + 1 != breaks.size()) {
            throw std::invalid_argument("order 1 may only appear on the last segment");
        }
        prev = lambda;
        prev_order = order;
    }
}

RamBreaks RamBreaks::from_json(const nlohmann::json& j)
{
    if (!j.is_array()) throw std::invalid_argument("breaks must be a JSON array of [lambda, order] pairs");
    RamBreaks b;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2) throw std::invalid_argument("each break must be [lambda, order]");
        Rational lambda;
        if (item[0].is_string()) lambda = parse_rational(item[0].get<std::string>());
        else if (item[0].is_number_integer()) lambda = Rational(item[0].get<long>());
        else throw std::invalid_argument("break lambda must be an integer or a rational string");
        if (!item[1].is_number_integer() || item[1].get<long>() < 1) {
            throw std::invalid_argument("break order must be a positive integer");
        }
        b.breaks.emplace_back(lambda, item[1].get<unsigned long>());
    }
    b.validate();
    return b;
}

Rational HerbrandFn::operator()(const Rational& t) const
{
    if (sgn(t) < 0) throw std::invalid_argument("Herbrand functions are evaluated at t >= 0");
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (t <= points[k].first) {
            const auto& [x0, y0] = points[k - 1];
            const auto& [x1, y1] = points[k];
            return y0 + (y1 - y0) / (x1 - x0) * (t - x0);
        }
    }
    const auto& [xl, yl] = points.back();
    return yl + final_slope * (t - xl);
}

std::vector<Rational> HerbrandFn::slopes() const
{
    std::vector<Rational> s;
    for (std::size_t k = 1; k < points.size(); ++k) {
        s.push_back((points[k].second - points[k - 1].second) / (points[k].first - points[k - 1].first));
    }
    s.push_back(final_slope);
    return s;
}

bool HerbrandFn::concave() const
{
    auto s = slopes();
    return std::is_sorted(s.begin(), s.end(), std::greater<>());
}

bool HerbrandFn::convex() const
{
    auto s = slopes();
    return std::is_sorted(s.begin(), s.end());
}

namespace {

unsigned long order_at_one(const RamBreaks& b)
{
    for (const auto& [lambda, order] : b.breaks) {
        if (lambda >= 1) return order;
    }
    return 1;
}

}  // namespace

HerbrandFn herbrand_phi(const RamBreaks& b)
{
    b.validate();
    HerbrandFn f;
    f.points.emplace_back(Rational(0), Rational(0));
    const Rational g1(static_cast<long>(order_at_one(b)));
    auto slope = [&](unsigned long order) {
        Rational q = Rational(static_cast<long>(order)) / g1;
        return q < 1 ? q : Rational(1);
    };
    Rational x = 0, y = 0;
    for (const auto& [lambda, order] : b.breaks) {
        y += slope(order) * (lambda - x);
        x = lambda;
        f.points.emplace_back(x, y);
    }
    f.final_slope = slope(1);
    return f;
}

HerbrandFn herbrand_psi(const HerbrandFn& phi)
{
    HerbrandFn g;
    Rational prev = -1;
    for (const auto& [x, y] : phi.points) {
        if (y <= prev) throw std::invalid_argument("Herbrand function is not strictly increasing");
        prev = y;
        g.points.emplace_back(y, x);
    }
    if (sgn(phi.final_slope) <= 0) throw std::invalid_argument("Herbrand function is not strictly increasing");
    g.final_slope = 1 / phi.final_slope;
    return g;
}

Rational last_lower_break(const RamBreaks& b) { return b.breaks.empty() ? Rational(0) : b.breaks.back().first; }

Rational last_upper_break(const RamBreaks& b) { return herbrand_phi(b)(last_lower_break(b)); }

Convention convention_from_name(const std::string& name)
{
    static const std::pair<const char*, Convention> table[] = {
        {"shifted-upper", Convention::ShiftedUpper},       {"serre-upper", Convention::SerreUpper},
        {"fontaine-upper", Convention::FontaineUpper}, {"shifted-lower", Convention::ShiftedLower},
        {"serre-lower", Convention::SerreLower},       {"fontaine-lower", Convention::FontaineLower},
    };
    for (const auto& [n, c] : table) {
        if (name == n) return c;
    }
    throw std::invalid_argument("unknown numbering convention '" + name + "'");
}

Rational convert_convention(const Rational& value, Convention from, Convention to, std::optional<Rational> e_tilde)
{
    auto is_upper = [](Convention c) {
        return c == Convention::ShiftedUpper || c == Convention::SerreUpper || c == Convention::FontaineUpper;
    };
    if (is_upper(from) != is_upper(to)) throw std::invalid_argument("cannot convert between upper and lower numbering");
    auto need_e = [&]() -> const Rational& {
        if (!e_tilde || sgn(*e_tilde) <= 0) throw std::invalid_argument("fontaine-lower conversion needs e_tilde > 0");
        return *e_tilde;
    };
    Rational shifted;
    switch (from) {
    case Convention::ShiftedUpper:
    case Convention::FontaineUpper:
    case Convention::ShiftedLower: shifted = value; break;
    case Convention::SerreUpper:
    case Convention::SerreLower: shifted = value + 1; break;
    case Convention::FontaineLower: shifted = value * need_e(); break;
    }
    switch (to) {
    case Convention::ShiftedUpper:
    case Convention::FontaineUpper:
    case Convention::ShiftedLower: return shifted;
    case Convention::SerreUpper:
    case Convention::SerreLower: return shifted - 1;
    case Convention::FontaineLower: return shifted / need_e();
    }
    return shifted;
}

Rational transitivity_mu(const Rational& mu_MF, const HerbrandFn& phi_MF, const Rational& mu_NM)
{
    return rmax(mu_MF, phi_MF(mu_NM));
}

Rational c0_of(const HerbrandFn& psi, unsigned e)
{
    if (psi.final_slope != Rational(e)) {
        throw std::invalid_argument("c0 needs the final slope of psi (" + to_string(psi.final_slope) +
                                    ") to equal e = " + std::to_string(e));
    }
    Rational best = 0;
    auto consider = [&](const Rational& t) { best = rmax(best, 1 + Rational(e) * t - psi(1 + t)); };
    consider(0);
    for (const auto& pt : psi.points) {
        if (pt.first > 1) consider(pt.first - 1);
    }
    return best;
}

RamBreaks cyclotomic_breaks(OddPrime p, unsigned n)
{
    if (n < 1) throw std::invalid_argument("cyclotomic_breaks needs n >= 1");
    RamBreaks b;
    b.breaks.emplace_back(Rational(1), static_cast<unsigned long>((p - 1) * upow(p, n - 1)));
    for (unsigned k = 1; k < n; ++k) {
        b.breaks.emplace_back(Rational(static_cast<long>(upow(p, k))), static_cast<unsigned long>(upow(p, n - k)));
    }
    return b;
}

Rational different_Ks(OddPrime p, unsigned e, unsigned s)
{
    if (s == 0) return 0;
    return 1 + Rational(e) * s - p_power(p, -static_cast<long>(s));
}

Assembly assemble_final_bound(OddPrime p, unsigned e, unsigned i)
{
    const auto c = alpha_beta(p, e, i);
    const long s = c.alpha;
    const Rational ps = p_power(p, s);
    const Rational m = c.a / ps;
    const Rational e_over = rat(e, static_cast<long>(p) - 1);
    const Rational mu_N = 1 + Rational(e) * s + e_over;

    // phi_{N/K}(t) <= mu_N + (t - lambda_N) / e_N with lambda_N >= e_N (e/(p-1) + 1/p^s); e_N cancels
    auto phi_estimate = [&](const Rational& e_N) -> Rational {
        Rational mu_MN = e_N * m;
        Rational lambda_N = e_N * (e_over + 1 / ps);
        return mu_N + (mu_MN - lambda_N) / e_N;
    };
    const Rational e_N1 = Rational(static_cast<long>(e)) * ps;
    const Rational e_N2 = e_N1 * (static_cast<long>(p) - 1);
    const Rational est = phi_estimate(e_N1);
    if (est != phi_estimate(e_N2)) throw std::logic_error("assemble_final_bound: estimate depends on e_N");
    Assembly a;
    a.value = rmax(mu_N, est);
    a.trace = {{"s", Rational(s)},
               {"m", m},
               {"mu_N", mu_N},
               {"phi_estimate", est},
               {"different_K_s", different_Ks(p, e, static_cast<unsigned>(s))},
               {"mu_bound", a.value}};
    if (a.value != mu_bound_main(p, e, i)) throw std::logic_error("assemble_final_bound: mismatch with closed form");
    return a;
}

// ---------------------------------------------------------------------------

Rational cyclotomic_c0_formula(OddPrime p, unsigned n)
{
    long inner = static_cast<long>(n - 1) * (static_cast<long>(p) - 1) - 1;
    return Rational(inner) * p_power(p, static_cast<long>(n) - 1) + 1;
}

NamedField named_field(const std::string& spec)
{
    NamedField f;
    f.name = spec;
    if (spec == "qp") {
        f.e = 1;
        f.caruso = {Rational(0), 1};
        return f;
    }
    auto first = spec.find(':');
    auto second = spec.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw std::invalid_argument("unknown field '" + spec + "' (use qp, cyclotomic:p:n or kummer:p:n)");
    }
    std::string kind = spec.substr(0, first);
    long long pv = 0, nv = 0;
    try {
        pv = std::stoll(spec.substr(first + 1, second - first - 1));
        nv = std::stoll(spec.substr(second + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed field '" + spec + "'");
    }
    OddPrime p(pv);
    if (nv < 1 || nv > 12) throw std::invalid_argument("field parameter n must be in 1..12");
    unsigned n = static_cast<unsigned>(nv);
    f.p = p;
    if (kind == "cyclotomic") {
        f.e = static_cast<unsigned>((p - 1) * upow(p, n - 1));
        f.caruso.s0 = n;
        f.caruso.c0 = c0_of(herbrand_psi(herbrand_phi(cyclotomic_breaks(p, n))), f.e);
    }
    else if (kind == "kummer") {
        f.e = static_cast<unsigned>(upow(p, n));
        f.caruso.s0 = 1;
        f.caruso.c0 = Rational(static_cast<long>(n)) * f.e;
    }
    else {
        throw std::invalid_argument("unknown field kind '" + kind + "'");
    }
    return f;
}

std::vector<BoundResult> compare_table(OddPrime p, unsigned e, unsigned i, std::optional<CarusoInputs> caruso)
{
    std::vector<BoundResult> rows;
    rows.push_back(main_bound(p, e, i));
    rows.push_back(caruso_liu_bound(p, e, i));
    if (caruso) {
        rows.push_back(caruso_bound(p, e, i, caruso->c0, caruso->s0));
    }
    else {
        BoundResult r;
        r.method = Method::Caruso;
        r.applicable = false;
        r.reason = "requires c0 and s0 (pass --c0/--s0 or --field)";
        rows.push_back(r);
    }
    rows.push_back(hattori_bound(p, e, i));
    rows.push_back(fontaine_abrashkin_bound(p, e, i));
    return rows;
}

RationalPlusLog example_diff_cyclotomic(OddPrime p, unsigned n, unsigned i)
{
    if (n < 2) throw std::invalid_argument("example_diff_cyclotomic needs n >= 2");
    if (i < 2) throw std::invalid_argument("example_diff_cyclotomic needs i > 1");
    const unsigned e = static_cast<unsigned>((p - 1) * upow(p, n - 1));
    BoundResult c = caruso_bound(p, e, i, cyclotomic_c0_formula(p, n), n);
    RationalPlusLog d = *c.log_value;
    d.rational -= mu_bound_main(p, e, i);
    if (d.compare(Rational(static_cast<long>(n - 1) * e), p) <= 0) {
        throw std::logic_error("example_diff_cyclotomic: difference does not exceed (n-1)e");
    }
    return d;
}

nlohmann::json bound_row_json(const BoundResult& r, unsigned p)
{
    nlohmann::json j;
    j["method"] = method_name(r.method);
    j["applicable"] = r.applicable;
    j["reason"] = r.applicable ? nlohmann::json(nullptr) : nlohmann::json(r.reason);
    j["value_exact"] = nullptr;
    j["value_float"] = nullptr;
    j["value_decimal"] = nullptr;
    j["log_term"] = nullptr;
    if (r.applicable) {
        Decimal d;
        if (r.log_value) {
            const auto& v = *r.log_value;
            j["log_term"] = {{"coeff", to_string(v.coeff)}, {"arg", to_string(v.arg)}};
            j["value_exact"] = r.value ? to_string(*r.value)
                                       : to_string(v.rational) + " + " + to_string(v.coeff) + "*log_" +
                                             std::to_string(p) + "(" + to_string(v.arg) + ")";
            j["value_decimal"] = v.decimal(p);
            d = Decimal(v.decimal(p, 60));
        }
        else if (r.value) {
            j["value_exact"] = to_string(*r.value);
            d = to_decimal(*r.value);
            j["value_decimal"] = format_decimal(d, 50);
        }
        j["value_float"] = d.convert_to<double>();
    }
    if (r.components) {
        const auto& c = *r.components;
        j["components"] = {{"alpha", c.alpha},
                           {"beta", to_string(c.beta)},
                           {"a", to_string(c.a)},
                           {"b", to_string(c.b)},
                           {"max_arg", c.max_arg}};
    }
    else {
        j["components"] = nullptr;
    }
    return j;
}

}  // namespace crs
