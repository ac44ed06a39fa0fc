#include "crs/koszul.hpp"

#include "crs/prism.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <cmath>
#include <regex>
#include <sstream>
#include <unordered_set>

namespace crs {

namespace {

std::int64_t inverse_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t g = m, x = 0, x1 = 1, a1 = a;
    while (a1 != 0) {
        std::int64_t q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) throw std::logic_error("inverse_mod: not a unit");
    return ((x % m) + m) % m;
}

unsigned valuation(std::int64_t a, unsigned p)
{
    unsigned v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

std::vector<std::vector<unsigned>> subsets(unsigned n, unsigned m)
{
    std::vector<std::vector<unsigned>> out;
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + m, true);
    do {
        std::vector<unsigned> s;
        for (unsigned i = 0; i < n; ++i) {
            if (mask[i]) s.push_back(i);
        }
        out.push_back(s);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

std::uint64_t binom(unsigned n, unsigned k)
{
    std::uint64_t r = 1;
    for (unsigned j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------

FiniteRingSpec::FiniteRingSpec(OddPrime p, unsigned N, std::vector<Var> vars, std::vector<Monomial> relations)
    : p_(p), N_(N), vars_(std::move(vars)), relations_(std::move(relations))
{
    if (N < 1) throw std::invalid_argument("precision N must be >= 1");
    auto m = upow(p, N);
    if (m > (std::uint64_t{1} << 31)) throw std::invalid_argument("p^N too large for the finite-ring engine");
    mod_ = static_cast<std::int64_t>(m);

    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    std::vector<std::uint32_t> bound;
    for (Var v : vars_) {
        if (v != Var::u && v != Var::w) throw std::invalid_argument("finite rings use the variables u and w");
        std::uint32_t best = 0;
        for (const auto& r : relations_) {
            bool pure = true;
            for (unsigned k = 0; k < kNumVars; ++k) {
                if (static_cast<Var>(k) != v && r[static_cast<Var>(k)] != 0) pure = false;
            }
            if (pure && r[v] > 0 && (best == 0 || r[v] < best)) best = r[v];
        }
        if (best == 0) {
            throw std::invalid_argument("relation set does not yield a finite basis: no pure power of " +
                                        std::string(var_name(v)));
        }
        bound.push_back(best);
    }
    for (const auto& r : relations_) {
        for (unsigned k = 0; k < kNumVars; ++k) {
            Var v = static_cast<Var>(k);
            if (r[v] != 0 && std::find(vars_.begin(), vars_.end(), v) == vars_.end()) {
                throw std::invalid_argument("relation uses a variable outside the ring");
            }
        }
    }

    std::vector<std::uint32_t> e(vars_.size(), 0);
    while (true) {
        Monomial mono;
        for (std::size_t k = 0; k < vars_.size(); ++k) mono.set(vars_[k], e[k]);
        bool killed = std::any_of(relations_.begin(), relations_.end(),
                                  [&](const Monomial& r) { return r.divides(mono); });
        if (!killed) basis_.push_back(mono);
        std::size_t k = 0;
        while (k < e.size() && ++e[k] == bound[k]) e[k++] = 0;
        if (k == e.size()) break;
    }
    std::sort(basis_.begin(), basis_.end());
}

FiniteRingSpec FiniteRingSpec::parse(const std::string& text)
{
    static const std::regex re(R"(\s*Z/(\d+)\s*(?:\[([a-z,\s]*)\]\s*(?:/\s*\((.*)\))?)?\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw std::invalid_argument("malformed ring spec: '" + text + "'");
    std::uint64_t q = std::stoull(m[1].str());
    unsigned p = 0;
    for (std::uint64_t d = 3; d <= q; d += 2) {
        if (q % d == 0) {
            p = static_cast<unsigned>(d);
            break;
        }
    }
    if (p == 0) throw std::invalid_argument("ring modulus must be p^N for an odd prime p");
    unsigned N = 0;
    while (q % p == 0) {
        q /= p;
        ++N;
    }
    if (q != 1) throw std::invalid_argument("ring modulus must be p^N for an odd prime p");

    std::vector<Var> vars;
    if (m[2].matched) {
        std::string list = m[2].str();
        std::stringstream ss(list);
        std::string name;
        while (std::getline(ss, name, ',')) {
            name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
            auto v = var_from_name(name);
            if (!v) throw std::invalid_argument("unknown variable '" + name + "' in ring spec");
            vars.push_back(*v);
        }
    }
    std::vector<Monomial> rels;
    if (m[3].matched) {
        std::stringstream ss(m[3].str());
        std::string item;
        while (std::getline(ss, item, ',')) {
            MPoly r = MPoly::parse(item);
            if (r.size() != 1 || r.terms()[0].coeff != 1) {
                throw std::invalid_argument("relations must be monomials: '" + item + "'");
            }
            rels.push_back(r.terms()[0].mono);
        }
    }
    return FiniteRingSpec(OddPrime(p), N, std::move(vars), std::move(rels));
}

std::string FiniteRingSpec::describe() const
{
    std::string s = "Z/" + std::to_string(mod_);
    if (vars_.empty()) return s;
    s += "[";
    for (std::size_t k = 0; k < vars_.size(); ++k) s += (k ? "," : "") + std::string(var_name(vars_[k]));
    s += "]";
    if (!relations_.empty()) {
        s += "/(";
        for (std::size_t k = 0; k < relations_.size(); ++k) {
            s += (k ? ", " : "") + MPoly::monomial(1, relations_[k]).to_string();
        }
        s += ")";
    }
    return s;
}

std::ptrdiff_t FiniteRingSpec::index_of(const Monomial& m) const
{
    auto it = std::lower_bound(basis_.begin(), basis_.end(), m);
    if (it == basis_.end() || !(*it == m)) return -1;
    return it - basis_.begin();
}

std::vector<std::int64_t> FiniteRingSpec::coords_of(const MPoly& f) const
{
    std::vector<std::int64_t> out(basis_.size(), 0);
    for (const auto& t : f.terms()) {
        for (unsigned k = 0; k < kNumVars; ++k) {
            Var v = static_cast<Var>(k);
            if (t.mono[v] != 0 && std::find(vars_.begin(), vars_.end(), v) == vars_.end()) {
                throw std::invalid_argument("element uses variable " + std::string(var_name(v)) +
                                            " outside the ring " + describe());
            }
        }
        auto idx = index_of(t.mono);
        if (idx < 0) continue;  // in the relation ideal
        Integer c = t.coeff % Integer(mod_);
        out[idx] = add(out[idx], norm(c.get_si()));
    }
    return out;
}

std::vector<std::int64_t> FiniteRingSpec::mult_matrix(const MPoly& f) const
{
    const std::size_t B = basis_.size();
    std::vector<std::int64_t> mat(B * B, 0);
    for (std::size_t col = 0; col < B; ++col) {
        auto image = coords_of(f.shifted(basis_[col]));
        for (std::size_t row = 0; row < B; ++row) mat[row * B + col] = image[row];
    }
    return mat;
}

bool FiniteRingSpec::in_max_ideal(const MPoly& f) const
{
    auto c = coords_of(f);
    auto idx = index_of(Monomial());
    return idx < 0 || c[idx] % p_ == 0;
}

// ---------------------------------------------------------------------------

std::vector<unsigned> smith_valuations(ModMatrix a, const FiniteRingSpec& ring)
{
    const unsigned p = ring.p();
    const std::int64_t mod = ring.modulus();
    std::vector<unsigned> vals;
    std::size_t k = 0;
    const std::size_t limit = std::min(a.rows, a.cols);
    while (k < limit) {
        std::size_t pr = 0, pc = 0;
        unsigned best = ring.N();
        for (std::size_t r = k; r < a.rows && best > 0; ++r) {
            for (std::size_t c = k; c < a.cols; ++c) {
                if (a.at(r, c) == 0) continue;
                unsigned v = valuation(a.at(r, c), p);
                if (v < best) {
                    best = v;
                    pr = r;
                    pc = c;
                    if (v == 0) break;
                }
            }
        }
        if (best == ring.N()) break;
        if (pr != k) {
            for (std::size_t c = 0; c < a.cols; ++c) std::swap(a.at(pr, c), a.at(k, c));
        }
        if (pc != k) {
            for (std::size_t r = 0; r < a.rows; ++r) std::swap(a.at(r, pc), a.at(r, k));
        }
        std::int64_t pv = static_cast<std::int64_t>(upow(p, best));
        std::int64_t unit = a.at(k, k) / pv;
        std::int64_t inv = inverse_mod(unit % mod, mod);
        for (std::size_t c = k; c < a.cols; ++c) a.at(k, c) = ring.mul(a.at(k, c), inv);
        for (std::size_t r = k + 1; r < a.rows; ++r) {
            std::int64_t factor = a.at(r, k) / pv;
            if (factor == 0) continue;
            for (std::size_t c = k; c < a.cols; ++c) {
                a.at(r, c) = ring.norm(a.at(r, c) - ring.mul(factor, a.at(k, c)));
            }
        }
        // column k is now zero below the pivot, so column operations only clear row k
        vals.push_back(best);
        ++k;
    }
    return vals;
}

std::uint64_t log_image_size(const ModMatrix& m, const FiniteRingSpec& ring)
{
    std::uint64_t total = 0;
    for (unsigned v : smith_valuations(m, ring)) total += ring.N() - v;
    return total;
}

// ---------------------------------------------------------------------------

KoszulComplex::KoszulComplex(FiniteRingSpec ring, std::vector<MPoly> seq, unsigned module_rank)
    : ring_(std::move(ring)), seq_(std::move(seq)), r_(module_rank)
{
    if (module_rank < 1) throw std::invalid_argument("module rank must be >= 1");
    const unsigned n = static_cast<unsigned>(seq_.size());
    const std::size_t B = ring_.rank();
    std::vector<std::vector<std::int64_t>> mult;
    for (const auto& f : seq_) mult.push_back(ring_.mult_matrix(f));

    for (unsigned m = 1; m <= n; ++m) {
        auto src = subsets(n, m);
        auto dst = subsets(n, m - 1);
        ModMatrix d;
        d.rows = dst.size() * r_ * B;
        d.cols = src.size() * r_ * B;
        d.data.assign(d.rows * d.cols, 0);
        for (std::size_t si = 0; si < src.size(); ++si) {
            const auto& S = src[si];
            for (unsigned k = 0; k < m; ++k) {
                std::vector<unsigned> T = S;
                T.erase(T.begin() + k);
                std::size_t ti = std::find(dst.begin(), dst.end(), T) - dst.begin();
                const auto& F = mult[S[k]];
                for (unsigned t = 0; t < r_; ++t) {
                    for (std::size_t b = 0; b < B; ++b) {
                        std::size_t col = (si * r_ + t) * B + b;
                        for (std::size_t row_b = 0; row_b < B; ++row_b) {
                            std::int64_t c = F[row_b * B + b];
                            if (c == 0) continue;
                            std::size_t row = (ti * r_ + t) * B + row_b;
                            std::int64_t signed_c = (k % 2 == 0) ? c : ring_.norm(-c);
                            d.at(row, col) = ring_.add(d.at(row, col), signed_c);
                        }
                    }
                }
            }
        }
        d_.push_back(std::move(d));
    }

    for (std::size_t m = 1; m < d_.size(); ++m) {
        const ModMatrix& lo = d_[m - 1];
        const ModMatrix& hi = d_[m];
        for (std::size_t i = 0; i < lo.rows; ++i) {
            for (std::size_t j = 0; j < hi.cols; ++j) {
                std::int64_t acc = 0;
                for (std::size_t k = 0; k < lo.cols; ++k) acc = ring_.add(acc, ring_.mul(lo.at(i, k), hi.at(k, j)));
                if (acc != 0) throw std::logic_error("Koszul complex: d o d != 0");
            }
        }
    }
}

std::size_t KoszulComplex::term_rank(std::size_t m) const
{
    if (m > seq_.size()) return 0;
    return binom(static_cast<unsigned>(seq_.size()), static_cast<unsigned>(m)) * r_ * ring_.rank();
}

bool HomologyReport::all_positive_vanish() const
{
    return std::all_of(log_orders.begin() + (log_orders.empty() ? 0 : 1), log_orders.end(),
                       [](std::uint64_t x) { return x == 0; });
}

HomologyReport koszul_homology(const KoszulComplex& cx)
{
    const std::size_t n = cx.length();
    const unsigned N = cx.ring().N();
    std::vector<std::uint64_t> im(n + 2, 0);  // im[m] = log|image of d_m|
    for (std::size_t m = 1; m <= n; ++m) im[m] = log_image_size(cx.boundary(m), cx.ring());
    HomologyReport h;
    for (std::size_t m = 0; m <= n; ++m) {
        std::uint64_t ker = cx.term_rank(m) * N - im[m];
        h.log_orders.push_back(ker - im[m + 1]);
    }
    return h;
}

bool euler_characteristic_consistent(const KoszulComplex& cx, const HomologyReport& h)
{
    std::int64_t lhs = 0, rhs = 0;
    for (std::size_t m = 0; m < h.log_orders.size(); ++m) {
        std::int64_t sign = m % 2 == 0 ? 1 : -1;
        lhs += sign * static_cast<std::int64_t>(h.log_orders[m]);
        rhs += sign * static_cast<std::int64_t>(cx.term_rank(m) * cx.ring().N());
    }
    return lhs == rhs;
}

PermReport check_perm_invariance(const FiniteRingSpec& ring, const std::vector<MPoly>& seq, unsigned module_rank)
{
    if (seq.size() > 4) throw std::invalid_argument("permutation check limited to n <= 4");
    PermReport rep;
    rep.reference = koszul_homology(KoszulComplex(ring, seq, module_rank));
    std::vector<std::size_t> idx(seq.size());
    std::iota(idx.begin(), idx.end(), 0);
    do {
        std::vector<MPoly> permuted;
        for (auto i : idx) permuted.push_back(seq[i]);
        ++rep.permutations;
        if (!(koszul_homology(KoszulComplex(ring, permuted, module_rank)) == rep.reference)) rep.invariant = false;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

/// Elements of M = (Z/p^N)^D encoded as base-p^N integers.
struct FiniteModule {
    const FiniteRingSpec& ring;
    std::size_t D;
    std::uint64_t size;

    std::uint64_t encode(const std::vector<std::int64_t>& x) const
    {
        std::uint64_t code = 0;
        for (std::size_t k = D; k-- > 0;) code = code * ring.modulus() + static_cast<std::uint64_t>(x[k]);
        return code;
    }
    std::vector<std::int64_t> decode(std::uint64_t code) const
    {
        std::vector<std::int64_t> x(D);
        for (std::size_t k = 0; k < D; ++k) {
            x[k] = static_cast<std::int64_t>(code % ring.modulus());
            code /= ring.modulus();
        }
        return x;
    }
    std::vector<std::int64_t> plus(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) const
    {
        std::vector<std::int64_t> r(D);
        for (std::size_t k = 0; k < D; ++k) r[k] = ring.add(a[k], b[k]);
        return r;
    }
};

/// Block-diagonal action of the ring multiplication matrix on R^r.
std::vector<std::int64_t> apply(const FiniteRingSpec& ring, const std::vector<std::int64_t>& F, unsigned r,
                                const std::vector<std::int64_t>& x)
{
    const std::size_t B = ring.rank();
    std::vector<std::int64_t> y(x.size(), 0);
    for (unsigned t = 0; t < r; ++t) {
        for (std::size_t i = 0; i < B; ++i) {
            std::int64_t acc = 0;
            for (std::size_t j = 0; j < B; ++j) acc = ring.add(acc, ring.mul(F[i * B + j], x[t * B + j]));
            y[t * B + i] = acc;
        }
    }
    return y;
}

}  // namespace

RegularityReport check_reg_iff_h1(const FiniteRingSpec& ring, const std::vector<MPoly>& seq, unsigned module_rank)
{
    const std::size_t D = ring.rank() * module_rank;
    double bits = static_cast<double>(D) * ring.N() * std::log2(static_cast<double>(ring.p()));
    if (bits > 20.0) throw std::invalid_argument("module too large for exhaustive regularity check");
    FiniteModule M{ring, D, 1};
    for (std::size_t k = 0; k < D; ++k) M.size *= static_cast<std::uint64_t>(ring.modulus());

    RegularityReport rep;
    rep.hypothesis = std::all_of(seq.begin(), seq.end(), [&](const MPoly& f) { return ring.in_max_ideal(f); });

    std::unordered_set<std::uint64_t> J{0};  // (f_1..f_k) M
    rep.weakly_regular = true;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        auto F = ring.mult_matrix(seq[k]);
        if (rep.weakly_regular) {
            for (std::uint64_t code = 0; code < M.size; ++code) {
                if (J.count(code)) continue;
                if (J.count(M.encode(apply(ring, F, module_rank, M.decode(code))))) {
                    rep.weakly_regular = false;
                    break;
                }
            }
        }
        // J += f_k M, spanned additively by f_k times the standard basis vectors
        for (std::size_t b = 0; b < D; ++b) {
            std::vector<std::int64_t> e(D, 0);
            e[b] = 1;
            auto g = apply(ring, F, module_rank, e);
            std::vector<std::uint64_t> old(J.begin(), J.end());
            for (auto x : old) {
                auto y = M.plus(M.decode(x), g);
                while (J.insert(M.encode(y)).second) y = M.plus(y, g);
            }
        }
    }
    rep.quotient_nonzero = J.size() < M.size;

    HomologyReport h = koszul_homology(KoszulComplex(ring, seq, module_rank));
    rep.h1_zero = h.log_orders.size() < 2 || h.log_orders[1] == 0;
    rep.all_h_zero = h.all_positive_vanish();
    rep.agreement = rep.weakly_regular == rep.h1_zero && rep.h1_zero == rep.all_h_zero;
    return rep;
}

std::vector<KoszulInstance> koszul_fixed_instances()
{
    return {
        {"Z/9", {"3"}, 1},
        {"Z/9", {"3", "3"}, 1},
        {"Z/9", {"2"}, 1},
        {"Z/27", {"9", "3"}, 1},
        {"Z/81", {"9", "27"}, 1},
        {"Z/3[u]/(u^2)", {"u", "u"}, 1},
        {"Z/3[u]/(u^3)", {"u"}, 1},
        {"Z/3[u]/(u^3)", {"u^2", "u"}, 1},
        {"Z/9[u]/(u^2)", {"3", "u"}, 1},
        {"Z/9[u]/(u^2)", {"3*u + 3"}, 1},
        {"Z/5[u]/(u^2)", {"u", "1+u"}, 1},
        {"Z/3[u,w]/(u^2, w^2)", {"u", "w"}, 1},
        {"Z/3[u,w]/(u^2, w^2)", {"u*w"}, 1},
        {"Z/3[u,w]/(u^2, w^2, u*w)", {"u+w", "u"}, 1},
        {"Z/3[u,w]/(u^2, w^2)", {"u", "w", "u+w"}, 1},
        {"Z/9[u]/(u^2)", {"u", "3"}, 2},
        {"Z/3[u]/(u^3)", {"1+u", "u^2"}, 2},
    };
}

KoszulInstance random_koszul_instance(std::mt19937_64& rng)
{
    static const char* rings[] = {"Z/9",          "Z/27",         "Z/3[u]/(u^3)", "Z/9[u]/(u^2)",
                                  "Z/5[u]/(u^2)", "Z/3[u,w]/(u^2, w^2)", "Z/3[u,w]/(u^2, w^2, u*w)"};
    KoszulInstance inst;
    inst.ring = rings[std::uniform_int_distribution<std::size_t>(0, std::size(rings) - 1)(rng)];
    auto R = FiniteRingSpec::parse(inst.ring);
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::uniform_int_distribution<std::int64_t> coeff(0, R.modulus() - 1);
    std::bernoulli_distribution sparse(0.5);
    for (std::size_t k = 0; k < n; ++k) {
        MPoly f;
        for (const auto& m : R.basis()) {
            if (sparse(rng)) continue;
            f += MPoly::monomial(Integer(static_cast<long>(coeff(rng))), m);
        }
        inst.seq.push_back(f.to_string());
    }
    return inst;
}

nlohmann::json koszul_report_json(const KoszulComplex& cx, const HomologyReport& h, const RegularityReport& reg)
{
    nlohmann::json seq = nlohmann::json::array();
    for (const auto& f : cx.sequence()) seq.push_back(f.to_string());
    nlohmann::json orders = nlohmann::json::array();
    for (std::size_t m = 0; m < h.log_orders.size(); ++m) {
        orders.push_back({{"m", m},
                          {"log_p", h.log_orders[m]},
                          {"order", ipow(Integer(cx.ring().p()), h.log_orders[m]).get_str()}});
    }
    return {{"spec", cx.ring().describe()},
            {"sequence", seq},
            {"module_rank", cx.module_rank()},
            {"homology_orders", orders},
            {"regular", reg.weakly_regular},
            {"quotient_nonzero", reg.quotient_nonzero},
            {"in_max_ideal", reg.hypothesis},
            {"h1_zero", reg.h1_zero},
            {"all_h_zero", reg.all_h_zero},
            {"euler_consistent", euler_characteristic_consistent(cx, h)},
            {"verdict", reg.pass() && euler_characteristic_consistent(cx, h) ? "pass" : "fail"}};
}

// ---------------------------------------------------------------------------

DisjointnessReport disjointness_property(const MPoly& x, const std::string& label, OddPrime p, unsigned k, unsigned l,
                                         unsigned trials, std::uint64_t seed)
{
    DisjointnessReport rep;
    rep.x = label;
    rep.k = k;
    rep.l = l;
    rep.trials = trials;
    rep.seed = seed;
    if (x.is_constant()) throw std::invalid_argument("x must be a non-unit, non-constant element");
    const Integer pk = p.pow(k);
    const MPoly xl = x.pow(l);
    const MPoly pkxl = xl.scaled(pk);
    std::mt19937_64 rng(seed);

    auto p_divides = [&](const MPoly& a) {
        return std::all_of(a.terms().begin(), a.terms().end(),
                           [&](const Term& t) { return mpz_divisible_p(t.coeff.get_mpz_t(), pk.get_mpz_t()) != 0; });
    };
    auto fail = [&](std::string what) {
        rep.pass = false;
        rep.failures.push_back(std::move(what));
    };

    for (unsigned t = 0; t < trials; ++t) {
        MPoly r = random_poly_uw(rng, 3, 5, Coords::W);
        if (r.is_zero()) r = MPoly(1);
        MPoly a = pkxl * r;
        if (!p_divides(a) || !divides(xl, a) || !divides(pkxl, a)) fail("positive trial " + std::to_string(t));

        MPoly s = random_poly_uw(rng, 3, 5, Coords::W);
        for (int attempt = 0; attempt < 16 && (s.is_zero() || divides(x, s)); ++attempt) {
            s = random_poly_uw(rng, 3, 5, Coords::W);
        }
        if (s.is_zero() || divides(x, s)) continue;
        if (l >= 1 && divides(xl, s.scaled(pk))) fail("negative trial " + std::to_string(t));
    }
    return rep;
}

}  // namespace crs
