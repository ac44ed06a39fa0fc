#include "crs/prism.hpp"

#include <algorithm>
#include <limits>

namespace crs {

MPoly one_plus_w(Coords c, const CoeffDomain& d)
{
    if (c == Coords::Z) return MPoly::var(Var::z, d);
    return MPoly::var(Var::w, d) + MPoly(1, d);
}

MPoly w_elem(Coords c, const CoeffDomain& d)
{
    if (c == Coords::Z) return MPoly::var(Var::z, d) - MPoly(1, d);
    return MPoly::var(Var::w, d);
}

MPoly v_elem(OddPrime p, Coords c, const CoeffDomain& d) { return one_plus_w(c, d).pow(p) - MPoly(1, d); }

// ---------------------------------------------------------------------------

PrismParams::PrismParams(OddPrime p, const MPoly& eisenstein) : p_(p), E_(eisenstein)
{
    if (!eisenstein.domain().is_exact()) throw std::invalid_argument("E(u) must have integer coefficients");
    for (unsigned i = 0; i < kNumVars; ++i) {
        auto v = static_cast<Var>(i);
        if (v != Var::u && eisenstein.uses(v)) {
            throw std::invalid_argument("E(u) must be a polynomial in u alone");
        }
    }
    auto e = eisenstein.degree(Var::u);
    if (eisenstein.is_zero() || e == 0) throw std::invalid_argument("E(u) must have degree e >= 1");
    eis_.assign(e + 1, Integer(0));
    for (const auto& t : eisenstein.terms()) eis_[t.mono[Var::u]] = t.coeff;
    if (eis_[e] != 1) throw std::invalid_argument("E(u) is not monic");
    for (std::size_t k = 0; k < e; ++k) {
        if (!mpz_divisible_ui_p(eis_[k].get_mpz_t(), p.value())) {
            throw std::invalid_argument("E(u) is not Eisenstein: coefficient of u^" + std::to_string(k) +
                                        " is not divisible by p");
        }
    }
    if (eis_[0] == 0 || p_valuation(eis_[0], p) != 1) {
        throw std::invalid_argument("E(u) is not Eisenstein: constant term is not divisible by p exactly once");
    }
}

PrismParams PrismParams::parse(long long p, const std::string& eisenstein)
{
    return PrismParams(OddPrime(p), MPoly::parse(eisenstein));
}

// ---------------------------------------------------------------------------

namespace {

std::uint32_t checked_pow(unsigned p, unsigned s)
{
    auto r = upow(p, s);
    if (r > std::numeric_limits<std::uint32_t>::max()) throw std::overflow_error("p^s exceeds exponent range");
    return static_cast<std::uint32_t>(r);
}

}  // namespace

MPoly frobenius(const MPoly& f, OddPrime p, unsigned s)
{
    if (s == 0) return f;
    const auto& d = f.domain();
    auto ps = checked_pow(p, s);
    Bindings b;
    if (f.uses(Var::u)) b.emplace(Var::u, MPoly::monomial(1, Monomial::of(Var::u, ps), d));
    if (f.uses(Var::w)) b.emplace(Var::w, one_plus_w(Coords::W, d).pow(ps) - MPoly(1, d));
    if (f.uses(Var::z)) b.emplace(Var::z, MPoly::monomial(1, Monomial::of(Var::z, ps), d));
    if (b.empty()) return f;
    return substitute(f, b);
}

MPoly tau_power(const MPoly& f, OddPrime p, unsigned s, Coords c)
{
    if (!f.uses(Var::u)) return f;
    const auto& d = f.domain();
    auto exponent = checked_pow(p, s + 1);
    MPoly image = one_plus_w(c, d).pow(exponent) * MPoly::var(Var::u, d);
    return substitute(f, {{Var::u, image}});
}

MPoly delta(const MPoly& f, OddPrime p) { return divide_by_p(frobenius(f, p, 1) - f.pow(p), p, 1); }

// ---------------------------------------------------------------------------

FreeDeltaRing::FreeDeltaRing(unsigned symbols, unsigned depth, OddPrime p) : m_(symbols), D_(depth), p_(p)
{
    if (symbols == 0) throw std::invalid_argument("free delta-ring needs at least one symbol");
    if (depth < 1) throw std::invalid_argument("delta-depth D must be >= 1");
    if (symbols * (depth + 1) > 9) {
        throw std::invalid_argument("symbols * (depth + 1) must be <= 9 (auxiliary variables x1..x9)");
    }
}

MPoly FreeDeltaRing::sym(unsigned j, unsigned k) const
{
    if (j >= m_ || k > D_) throw std::out_of_range("delta symbol index out of range");
    return MPoly::var(var_for(j, k));
}

unsigned FreeDeltaRing::depth_of(const MPoly& f) const
{
    unsigned depth = 0;
    for (unsigned j = 0; j < m_; ++j) {
        for (unsigned k = 0; k <= D_; ++k) {
            if (f.uses(var_for(j, k))) depth = std::max(depth, k);
        }
    }
    return depth;
}

MPoly FreeDeltaRing::phi(const MPoly& f) const
{
    Bindings b;
    const auto& d = f.domain();
    for (unsigned j = 0; j < m_; ++j) {
        for (unsigned k = 0; k <= D_; ++k) {
            Var v = var_for(j, k);
            if (!f.uses(v)) continue;
            if (k == D_) {
                throw DepthExhausted("delta-depth exhausted: Frobenius of delta^" + std::to_string(k) +
                                     " needs depth " + std::to_string(k + 1) + " > D = " + std::to_string(D_));
            }
            MPoly x = MPoly::var(v, d);
            b.emplace(v, x.pow(p_) + MPoly::var(var_for(j, k + 1), d).scaled(p_.value()));
        }
    }
    if (b.empty()) return f;
    return substitute(f, b);
}

MPoly FreeDeltaRing::delta(const MPoly& f) const { return divide_by_p(phi(f) - f.pow(p_), p_, 1); }

MPoly FreeDeltaRing::random_element(std::mt19937_64& rng, unsigned max_depth, unsigned terms) const
{
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<unsigned> sym_pick(0, m_ - 1);
    std::uniform_int_distribution<unsigned> depth_pick(0, std::min(max_depth, D_));
    std::uniform_int_distribution<unsigned> exp_pick(0, 2);
    MPoly r;
    for (unsigned t = 0; t < terms; ++t) {
        Monomial m;
        for (int factors = 0; factors < 2; ++factors) {
            Var v = var_for(sym_pick(rng), depth_pick(rng));
            m.set(v, m[v] + exp_pick(rng));
        }
        r += MPoly::monomial(coeff(rng), m);
    }
    return r;
}

// ---------------------------------------------------------------------------

bool DeltaLawReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const LawCheck& c) { return c.pass; });
}

namespace {

Integer binomial(unsigned n, unsigned k)
{
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

LawCheck compare(std::string law, std::string instance, const MPoly& lhs, const MPoly& rhs)
{
    MPoly diff = lhs - rhs;
    LawCheck c{std::move(law), std::move(instance), diff.is_zero(), {}};
    if (!c.pass) c.residual = diff.to_string();
    return c;
}

void check_pair(const FreeDeltaRing& R, const MPoly& x, const MPoly& y, const std::string& label,
                std::vector<LawCheck>& out)
{
    const unsigned p = R.p();
    const MPoly dx = R.delta(x);
    const MPoly dy = R.delta(y);

    out.push_back(compare("frobenius", label + " (x)", R.phi(x), x.pow(p) + dx.scaled(p)));
    out.push_back(compare("product", label,
                          R.delta(x * y), x.pow(p) * dy + y.pow(p) * dx + (dx * dy).scaled(p)));

    MPoly correction;
    for (unsigned j = 1; j < p; ++j) {
        Integer c = binomial(p, j) / p;
        correction += (x.pow(j) * y.pow(p - j)).scaled(c);
    }
    out.push_back(compare("sum", label, R.delta(x + y), dx + dy - correction));
}

}  // namespace

DeltaLawReport check_delta_laws(unsigned symbols, unsigned depth, OddPrime p, unsigned trials,
                                std::uint64_t seed)
{
    FreeDeltaRing R(symbols, depth, p);
    DeltaLawReport report;
    report.symbols = symbols;
    report.depth = depth;
    report.p = p;
    report.seed = seed;

    // delta of a generator is the next symbol
    for (unsigned j = 0; j < symbols; ++j) {
        for (unsigned k = 0; k < depth; ++k) {
            report.checks.push_back(compare("frobenius", "delta^" + std::to_string(k) + " x" + std::to_string(j + 1),
                                            R.phi(R.sym(j, k)),
                                            R.sym(j, k).pow(p) + R.sym(j, k + 1).scaled(p.value())));
        }
    }

    const MPoly x = R.sym(0);
    const MPoly y = symbols > 1 ? R.sym(1) : R.sym(0).pow(2);
    check_pair(R, x, y, "x, y", report.checks);
    report.checks.push_back(compare("product", "x * 1", R.delta(x * MPoly(1)), R.delta(x)));
    report.checks.push_back(compare("sum", "x + 0", R.delta(x + MPoly(0)), R.delta(x)));

    std::mt19937_64 rng(seed);
    for (unsigned t = 0; t < trials; ++t) {
        MPoly a = R.random_element(rng, depth - 1, 3);
        MPoly b = R.random_element(rng, depth - 1, 3);
        check_pair(R, a, b, "random pair " + std::to_string(t), report.checks);
    }
    return report;
}

// ---------------------------------------------------------------------------

LocElem::LocElem(MPoly num, unsigned k, MPoly base) : num_(std::move(num)), k_(k), base_(std::move(base))
{
    if (base_.is_zero()) throw std::invalid_argument("fraction base must be nonzero");
}

bool LocElem::equals(const LocElem& other) const
{
    if (!(base_ == other.base_)) throw std::invalid_argument("denominator base mismatch");
    return num_ * base_.pow(other.k_) == other.num_ * base_.pow(k_);
}

LocElem loc_arith(const LocElem& a, const LocElem& b, LocOp op)
{
    if (!(a.base() == b.base())) throw std::invalid_argument("denominator base mismatch");
    const MPoly& base = a.base();
    if (op == LocOp::Mul) return LocElem(a.num() * b.num(), a.k() + b.k(), base);
    unsigned k = std::max(a.k(), b.k());
    MPoly na = a.num() * base.pow(k - a.k());
    MPoly nb = b.num() * base.pow(k - b.k());
    return LocElem(op == LocOp::Add ? na + nb : na - nb, k, base);
}

LocElem tau_on_loc(const LocElem& a, unsigned s, const PrismParams& params, Coords c)
{
    if (!(a.base() == params.E())) throw std::invalid_argument("tau_on_loc expects the denominator base E(u)");
    return LocElem(tau_power(a.num(), params.p(), s, c), a.k(), tau_power(params.E(), params.p(), s, c));
}

// ---------------------------------------------------------------------------

MPoly random_poly_uw(std::mt19937_64& rng, unsigned degree, long bound, Coords c)
{
    std::uniform_int_distribution<long> coeff(-bound, bound);
    Var second = c == Coords::Z ? Var::z : Var::w;
    std::vector<Term> terms;
    for (unsigned a = 0; a <= degree; ++a) {
        for (unsigned b = 0; a + b <= degree; ++b) {
            Monomial m;
            m.set(Var::u, a);
            m.set(second, b);
            terms.push_back({m, Integer(coeff(rng))});
        }
    }
    return MPoly::from_terms(std::move(terms), CoeffDomain::exact());
}

MPoly random_poly_u(std::mt19937_64& rng, unsigned degree, long bound)
{
    std::uniform_int_distribution<long> coeff(-bound, bound);
    std::vector<Term> terms;
    for (unsigned a = 0; a <= degree; ++a) terms.push_back({Monomial::of(Var::u, a), Integer(coeff(rng))});
    return MPoly::from_terms(std::move(terms), CoeffDomain::exact());
}

CommuteReport phi_tau_commute_check(OddPrime p, unsigned s, unsigned trials, unsigned degree, std::uint64_t seed,
                                    Coords c)
{
    CommuteReport rep;
    rep.trials = trials;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    for (unsigned t = 0; t < trials; ++t) {
        MPoly f = random_poly_uw(rng, degree, 9, c);
        if (!(frobenius(tau_power(f, p, s, c), p, 1) == tau_power(frobenius(f, p, 1), p, s, c))) {
            rep.pass = false;
            rep.counterexample = f.to_string();
            break;
        }
    }
    return rep;
}

}  // namespace crs
