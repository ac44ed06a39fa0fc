#include "crs/polyring.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace crs {

namespace {

constexpr std::array<std::string_view, kNumVars> kVarNames = {"u",  "w",  "z",  "x1", "x2", "x3",
                                                              "x4", "x5", "x6", "x7", "x8", "x9"};

bool term_desc(const Term& a, const Term& b) { return a.mono > b.mono; }

}  // namespace

std::string_view var_name(Var v) { return kVarNames[static_cast<std::size_t>(v)]; }

std::optional<Var> var_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < kNumVars; ++i) {
        if (kVarNames[i] == name) return static_cast<Var>(i);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// CoeffDomain

CoeffDomain CoeffDomain::residue(OddPrime p, unsigned N)
{
    if (N < 1) throw std::invalid_argument("residue precision N must be >= 1");
    CoeffDomain d;
    d.kind_ = Kind::ResidueMod;
    d.p_ = p.value();
    d.N_ = N;
    d.modulus_ = p.pow(N);
    return d;
}

Integer CoeffDomain::normalize(const Integer& c) const
{
    if (is_exact()) return c;
    Integer r;
    mpz_mod(r.get_mpz_t(), c.get_mpz_t(), modulus_.get_mpz_t());
    return r;
}

std::string CoeffDomain::describe() const
{
    if (is_exact()) return "Z";
    return "Z/" + std::to_string(p_) + "^" + std::to_string(N_);
}

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::of(Var v, std::uint32_t e)
{
    Monomial m;
    m.set(v, e);
    return m;
}

bool Monomial::is_one() const
{
    return std::all_of(exp_.begin(), exp_.end(), [](std::uint32_t e) { return e == 0; });
}

std::uint64_t Monomial::total_degree() const
{
    std::uint64_t d = 0;
    for (auto e : exp_) d += e;
    return d;
}

Monomial Monomial::operator*(const Monomial& other) const
{
    Monomial r;
    for (std::size_t i = 0; i < kNumVars; ++i) {
        std::uint64_t s = std::uint64_t(exp_[i]) + other.exp_[i];
        if (s > std::numeric_limits<std::uint32_t>::max()) throw std::overflow_error("exponent overflow");
        r.exp_[i] = static_cast<std::uint32_t>(s);
    }
    return r;
}

bool Monomial::divides(const Monomial& other) const
{
    for (std::size_t i = 0; i < kNumVars; ++i) {
        if (exp_[i] > other.exp_[i]) return false;
    }
    return true;
}

Monomial Monomial::operator/(const Monomial& other) const
{
    Monomial r;
    for (std::size_t i = 0; i < kNumVars; ++i) r.exp_[i] = exp_[i] - other.exp_[i];
    return r;
}

std::size_t Monomial::hash() const
{
    std::size_t h = 1469598103934665603ull;
    for (auto e : exp_) {
        h ^= e;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// MPoly basics

MPoly::MPoly(long c, CoeffDomain domain) : MPoly(Integer(c), std::move(domain)) {}

MPoly::MPoly(const Integer& c, CoeffDomain domain) : domain_(std::move(domain))
{
    Integer n = domain_.normalize(c);
    if (n != 0) terms_.push_back({Monomial(), n});
}

MPoly MPoly::var(Var v, CoeffDomain domain) { return monomial(1, Monomial::of(v), std::move(domain)); }

MPoly MPoly::monomial(const Integer& c, const Monomial& m, CoeffDomain domain)
{
    MPoly r(std::move(domain));
    Integer n = r.domain_.normalize(c);
    if (n != 0) r.terms_.push_back({m, n});
    return r;
}

MPoly MPoly::from_terms(std::vector<Term> terms, CoeffDomain domain)
{
    MPoly r(std::move(domain));
    std::sort(terms.begin(), terms.end(), term_desc);
    for (auto& t : terms) {
        if (!r.terms_.empty() && r.terms_.back().mono == t.mono) {
            r.terms_.back().coeff += t.coeff;
        } else {
            r.terms_.push_back(std::move(t));
        }
    }
    std::vector<Term> kept;
    kept.reserve(r.terms_.size());
    for (auto& t : r.terms_) {
        t.coeff = r.domain_.normalize(t.coeff);
        if (t.coeff != 0) kept.push_back(std::move(t));
    }
    r.terms_ = std::move(kept);
    return r;
}

bool MPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

Integer MPoly::coeff(const Monomial& m) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.mono > key; });
    if (it != terms_.end() && it->mono == m) return it->coeff;
    return 0;
}

bool MPoly::uses(Var v) const
{
    return std::any_of(terms_.begin(), terms_.end(), [v](const Term& t) { return t.mono[v] != 0; });
}

std::uint64_t MPoly::degree(Var v) const
{
    std::uint64_t d = 0;
    for (const auto& t : terms_) d = std::max<std::uint64_t>(d, t.mono[v]);
    return d;
}

const Term& MPoly::leading_term() const
{
    if (terms_.empty()) throw PolyError("leading term of the zero polynomial");
    return terms_.front();
}

bool MPoly::equal_terms(const MPoly& a, const MPoly& b)
{
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    }
    return true;
}

void MPoly::check_same_domain(const MPoly& o) const
{
    if (!(domain_ == o.domain_)) {
        throw DomainMismatch("coefficient domain mismatch: " + domain_.describe() + " vs " + o.domain_.describe());
    }
}

// ---------------------------------------------------------------------------
// Arithmetic

MPoly MPoly::operator-() const
{
    MPoly r(domain_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono, domain_.normalize(-t.coeff)});
    return r;
}

void MPoly::add_scaled(const MPoly& o, int sign)
{
    check_same_domain(o);
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && terms_[i].mono > o.terms_[j].mono)) {
            out.push_back(std::move(terms_[i++]));
        } else if (i == terms_.size() || o.terms_[j].mono > terms_[i].mono) {
            const Term& t = o.terms_[j++];
            out.push_back({t.mono, domain_.normalize(sign > 0 ? t.coeff : Integer(-t.coeff))});
        } else {
            Integer c = sign > 0 ? Integer(terms_[i].coeff + o.terms_[j].coeff)
                                 : Integer(terms_[i].coeff - o.terms_[j].coeff);
            c = domain_.normalize(c);
            if (c != 0) out.push_back({terms_[i].mono, std::move(c)});
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
}

MPoly& MPoly::operator+=(const MPoly& o)
{
    add_scaled(o, +1);
    return *this;
}

MPoly& MPoly::operator-=(const MPoly& o)
{
    add_scaled(o, -1);
    return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b)
{
    a.check_same_domain(b);
    if (a.is_zero() || b.is_zero()) return MPoly(a.domain_);
    if (a.terms_.size() == 1 || b.terms_.size() == 1) {
        const MPoly& mono = a.terms_.size() == 1 ? a : b;
        const MPoly& other = a.terms_.size() == 1 ? b : a;
        const Term& t = mono.terms_[0];
        MPoly r(a.domain_);
        r.terms_.reserve(other.terms_.size());
        for (const auto& s : other.terms_) {
            Integer c = a.domain_.normalize(s.coeff * t.coeff);
            if (c != 0) r.terms_.push_back({s.mono * t.mono, std::move(c)});
        }
        return r;  // multiplying by a monomial preserves the order
    }
    std::unordered_map<Monomial, Integer, MonomialHash> acc;
    acc.reserve(a.terms_.size() * b.terms_.size() / 2 + 16);
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) {
            Integer& slot = acc[s.mono * t.mono];
            mpz_addmul(slot.get_mpz_t(), s.coeff.get_mpz_t(), t.coeff.get_mpz_t());
        }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc) terms.push_back({m, std::move(c)});
    return MPoly::from_terms(std::move(terms), a.domain_);
}

MPoly& MPoly::operator*=(const MPoly& o)
{
    *this = *this * o;
    return *this;
}

MPoly MPoly::scaled(const Integer& c) const
{
    MPoly r(domain_);
    for (const auto& t : terms_) {
        Integer n = domain_.normalize(t.coeff * c);
        if (n != 0) r.terms_.push_back({t.mono, std::move(n)});
    }
    return r;
}

MPoly MPoly::shifted(const Monomial& m) const
{
    MPoly r(domain_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff});
    return r;
}

MPoly MPoly::pow(unsigned long k) const
{
    MPoly result(1, domain_);
    if (k == 0) return result;
    if (terms_.size() == 1) {
        Monomial m;
        for (std::size_t i = 0; i < kNumVars; ++i) {
            auto v = static_cast<Var>(i);
            std::uint64_t e = std::uint64_t(terms_[0].mono[v]) * k;
            if (e > std::numeric_limits<std::uint32_t>::max()) throw std::overflow_error("exponent overflow");
            m.set(v, static_cast<std::uint32_t>(e));
        }
        return monomial(ipow(terms_[0].coeff, k), m, domain_);
    }
    MPoly base = *this;
    while (true) {
        if (k & 1u) result *= base;
        k >>= 1u;
        if (k == 0) break;
        base *= base;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Text format

std::string MPoly::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        bool neg = t.coeff < 0;
        Integer mag = abs(t.coeff);
        if (first) {
            if (neg) os << '-';
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < kNumVars; ++i) {
            auto e = t.mono[static_cast<Var>(i)];
            if (e == 0) continue;
            if (!mono.empty()) mono += '*';
            mono += kVarNames[i];
            if (e > 1) mono += "^" + std::to_string(e);
        }
        if (mono.empty()) {
            os << mag.get_str();
        } else if (mag == 1) {
            os << mono;
        } else {
            os << mag.get_str() << '*' << mono;
        }
    }
    return os.str();
}

namespace {

class Parser {
public:
    Parser(std::string_view text, CoeffDomain domain) : text_(text), domain_(std::move(domain)) {}

    MPoly parse()
    {
        MPoly r = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError(msg + " at position " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    MPoly expr()
    {
        skip_ws();
        MPoly r(domain_);
        bool neg = accept('-');
        if (!neg) accept('+');
        r = term();
        if (neg) r = -r;
        while (true) {
            if (accept('+')) {
                r += term();
            } else if (accept('-')) {
                r -= term();
            } else {
                break;
            }
        }
        return r;
    }

    MPoly term()
    {
        MPoly r = factor();
        while (accept('*')) r *= factor();
        return r;
    }

    MPoly factor()
    {
        MPoly b = base();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("expected a nonnegative integer exponent");
            b = b.pow(std::stoul(std::string(text_.substr(start, pos_ - start))));
        }
        return b;
    }

    MPoly base()
    {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            MPoly r = expr();
            if (!accept(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return MPoly(Integer(std::string(text_.substr(start, pos_ - start))), domain_);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            auto name = text_.substr(start, pos_ - start);
            auto v = var_from_name(name);
            if (!v) {
                pos_ = start;
                fail("unknown variable '" + std::string(name) + "'");
            }
            return MPoly::var(*v, domain_);
        }
        fail("unexpected character");
    }

    std::string_view text_;
    CoeffDomain domain_;
    std::size_t pos_ = 0;
};

}  // namespace

MPoly MPoly::parse(std::string_view text, CoeffDomain domain) { return Parser(text, std::move(domain)).parse(); }

// ---------------------------------------------------------------------------
// Substitution

MPoly substitute(const MPoly& f, const Bindings& bindings)
{
    for (const auto& [v, g] : bindings) {
        if (!(g.domain() == f.domain())) {
            throw DomainMismatch("binding for " + std::string(var_name(v)) + " is over " + g.domain().describe() +
                                 ", polynomial is over " + f.domain().describe());
        }
    }
    const CoeffDomain& dom = f.domain();
    // power tables for every bound variable, keyed by the exponents that occur
    std::map<Var, std::map<std::uint32_t, MPoly>> powers;
    for (const auto& [v, g] : bindings) {
        std::map<std::uint32_t, MPoly> table;
        for (const auto& t : f.terms()) {
            if (t.mono[v] != 0) table.emplace(t.mono[v], MPoly(dom));
        }
        std::uint32_t prev = 0;
        MPoly cur(1, dom);
        for (auto& [e, slot] : table) {
            cur *= g.pow(e - prev);
            prev = e;
            slot = cur;
        }
        powers.emplace(v, std::move(table));
    }

    std::unordered_map<Monomial, Integer, MonomialHash> acc;
    for (const auto& t : f.terms()) {
        Monomial rest = t.mono;
        MPoly prod(t.coeff, dom);
        for (auto& [v, table] : powers) {
            auto e = t.mono[v];
            if (e == 0) continue;
            rest.set(v, 0);
            prod *= table.at(e);
        }
        for (const auto& s : prod.terms()) {
            Integer& slot = acc[s.mono * rest];
            slot += s.coeff;
        }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc) terms.push_back({m, std::move(c)});
    return MPoly::from_terms(std::move(terms), dom);
}

// ---------------------------------------------------------------------------
// Division

namespace {

template <typename Coeff, typename Reduce>
void reduce_loop(std::map<Monomial, Coeff, std::greater<>>& rem, const MPoly& b, const Coeff& inv_lc,
                 Reduce&& normalize, std::vector<std::pair<Monomial, Coeff>>& quotient,
                 std::vector<std::pair<Monomial, Coeff>>& remainder)
{
    const Monomial& lm = b.leading_term().mono;
    while (!rem.empty()) {
        auto it = rem.begin();
        if (!lm.divides(it->first)) {
            remainder.emplace_back(it->first, it->second);
            rem.erase(it);
            continue;
        }
        Monomial qm = it->first / lm;
        Coeff qc = normalize(Coeff(it->second * inv_lc));
        rem.erase(it);
        for (std::size_t k = 1; k < b.terms().size(); ++k) {
            const Term& t = b.terms()[k];
            Monomial m = qm * t.mono;
            auto [slot, inserted] = rem.try_emplace(m, Coeff(0));
            slot->second = normalize(Coeff(slot->second - qc * Coeff(t.coeff)));
            if (slot->second == 0) rem.erase(slot);
        }
        quotient.emplace_back(qm, std::move(qc));
    }
}

}  // namespace

DivResult exact_divide(const MPoly& a, const MPoly& b)
{
    if (b.is_zero()) throw PolyError("exact_divide: division by the zero polynomial");
    if (!(a.domain() == b.domain())) {
        throw DomainMismatch("exact_divide: domain mismatch " + a.domain().describe() + " vs " +
                             b.domain().describe());
    }
    const CoeffDomain& dom = a.domain();
    const Integer& lc = b.leading_term().coeff;

    auto finish_integral = [&](std::vector<std::pair<Monomial, Integer>>& q,
                               std::vector<std::pair<Monomial, Integer>>& r) -> DivResult {
        if (!r.empty()) {
            std::vector<Term> rt;
            for (auto& [m, c] : r) rt.push_back({m, c});
            return NotDivisible{MPoly::from_terms(std::move(rt), dom), 1, false};
        }
        std::vector<Term> qt;
        for (auto& [m, c] : q) qt.push_back({m, c});
        MPoly quotient = MPoly::from_terms(std::move(qt), dom);
        if (!(quotient * b == a)) throw std::logic_error("exact_divide: re-multiplication check failed");
        return quotient;
    };

    if (!dom.is_exact()) {
        Integer inv;
        if (mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), dom.modulus().get_mpz_t()) == 0) {
            throw PolyError("exact_divide: leading coefficient of the divisor is not a unit mod " +
                            dom.modulus().get_str());
        }
        std::map<Monomial, Integer, std::greater<>> rem;
        for (const auto& t : a.terms()) rem.emplace(t.mono, t.coeff);
        std::vector<std::pair<Monomial, Integer>> q, r;
        reduce_loop<Integer>(rem, b, inv, [&](const Integer& c) { return dom.normalize(c); }, q, r);
        return finish_integral(q, r);
    }

    if (lc == 1 || lc == -1) {
        std::map<Monomial, Integer, std::greater<>> rem;
        for (const auto& t : a.terms()) rem.emplace(t.mono, t.coeff);
        std::vector<std::pair<Monomial, Integer>> q, r;
        reduce_loop<Integer>(rem, b, lc, [](const Integer& c) { return c; }, q, r);
        return finish_integral(q, r);
    }

    std::map<Monomial, Rational, std::greater<>> rem;
    for (const auto& t : a.terms()) rem.emplace(t.mono, Rational(t.coeff));
    std::vector<std::pair<Monomial, Rational>> q, r;
    Rational inv(Integer(1), lc);
    inv.canonicalize();
    reduce_loop<Rational>(rem, b, inv, [](Rational c) { c.canonicalize(); return c; }, q, r);

    auto common_denominator = [](const std::vector<std::pair<Monomial, Rational>>& v) {
        Integer d = 1;
        for (const auto& [m, c] : v) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.get_den_mpz_t());
        return d;
    };
    if (!r.empty()) {
        Integer d = common_denominator(r);
        std::vector<Term> rt;
        for (auto& [m, c] : r) rt.push_back({m, Integer(c.get_num() * (d / c.get_den()))});
        bool frac = false;
        for (const auto& [m, c] : q) frac = frac || c.get_den() != 1;
        return NotDivisible{MPoly::from_terms(std::move(rt), dom), d, frac};
    }
    for (const auto& [m, c] : q) {
        if (c.get_den() != 1) return NotDivisible{MPoly(dom), 1, true};
    }
    std::vector<Term> qt;
    for (auto& [m, c] : q) qt.push_back({m, c.get_num()});
    MPoly quotient = MPoly::from_terms(std::move(qt), dom);
    if (!(quotient * b == a)) throw std::logic_error("exact_divide: re-multiplication check failed");
    return quotient;
}

MPoly divide_or_throw(const MPoly& a, const MPoly& b, std::string_view what)
{
    auto res = exact_divide(a, b);
    if (auto* q = std::get_if<MPoly>(&res)) return std::move(*q);
    throw PolyError(std::string(what) + ": not divisible");
}

MPoly divide_by_p(const MPoly& a, unsigned p, unsigned k)
{
    const CoeffDomain& dom = a.domain();
    Integer pk = ipow(Integer(p), k);
    if (dom.is_exact()) {
        std::vector<Term> out;
        for (const auto& t : a.terms()) {
            if (!mpz_divisible_p(t.coeff.get_mpz_t(), pk.get_mpz_t())) {
                throw NotDivisibleByP("coefficient " + t.coeff.get_str() + " is not divisible by " + pk.get_str());
            }
            Integer q;
            mpz_divexact(q.get_mpz_t(), t.coeff.get_mpz_t(), pk.get_mpz_t());
            out.push_back({t.mono, std::move(q)});
        }
        return MPoly::from_terms(std::move(out), dom);
    }
    if (p != dom.p()) throw DomainMismatch("divide_by_p: p differs from the residue domain prime");
    if (k >= dom.precision()) {
        throw NotDivisibleByP("divide_by_p: k = " + std::to_string(k) + " must be < N = " +
                              std::to_string(dom.precision()));
    }
    auto target = CoeffDomain::residue(OddPrime(p), dom.precision() - k);
    std::vector<Term> out;
    for (const auto& t : a.terms()) {
        if (!mpz_divisible_p(t.coeff.get_mpz_t(), pk.get_mpz_t())) {
            throw NotDivisibleByP("coefficient " + t.coeff.get_str() + " is not divisible by " + pk.get_str());
        }
        Integer q;
        mpz_divexact(q.get_mpz_t(), t.coeff.get_mpz_t(), pk.get_mpz_t());
        out.push_back({t.mono, std::move(q)});
    }
    return MPoly::from_terms(std::move(out), target);
}

std::optional<std::uint64_t> u_valuation(const MPoly& a)
{
    if (a.is_zero()) return std::nullopt;
    std::uint64_t v = std::numeric_limits<std::uint64_t>::max();
    for (const auto& t : a.terms()) v = std::min<std::uint64_t>(v, t.mono[Var::u]);
    return v;
}

MPoly reduce_mod_pn(const MPoly& a, OddPrime p, unsigned N)
{
    if (!a.domain().is_exact()) throw DomainMismatch("reduce_mod_pn expects a polynomial over Z");
    std::vector<Term> terms(a.terms().begin(), a.terms().end());
    return MPoly::from_terms(std::move(terms), CoeffDomain::residue(p, N));
}

MPoly lift_to_integers(const MPoly& a)
{
    std::vector<Term> terms(a.terms().begin(), a.terms().end());
    return MPoly::from_terms(std::move(terms), CoeffDomain::exact());
}

MPoly to_z_coords(const MPoly& f)
{
    if (!f.uses(Var::w)) return f;
    const auto& d = f.domain();
    return substitute(f, {{Var::w, MPoly::var(Var::z, d) - MPoly(1, d)}});
}

MPoly to_w_coords(const MPoly& f)
{
    if (!f.uses(Var::z)) return f;
    const auto& d = f.domain();
    return substitute(f, {{Var::z, MPoly::var(Var::w, d) + MPoly(1, d)}});
}

}  // namespace crs
