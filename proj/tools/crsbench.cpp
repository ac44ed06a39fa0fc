// crsbench: verification grids and ramification bound tables.
//
// Exit status: 0 when every cell passes, 1 on a failed cell, 2 on bad usage.

#include "crs/crs_verify.hpp"
#include "crs/koszul.hpp"
#include "crs/rambounds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

using namespace crs;
using nlohmann::json;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 0;
    unsigned jobs = 0;
    bool timing = false;
};

// "3,5", "0..3", "1..4,7"
std::vector<long> parse_list(const std::string& text, const std::string& flag)
{
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    auto num = [&](const std::string& s) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw UsageError("--" + flag + ": bad number '" + s + "'");
        return v;
    };
    while (std::getline(ss, item, ',')) {
        auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(num(item));
            continue;
        }
        long lo = num(item.substr(0, dots)), hi = num(item.substr(dots + 2));
        if (hi < lo) throw UsageError("--" + flag + ": empty range '" + item + "'");
        if (hi - lo > 10000) throw UsageError("--" + flag + ": range too long");
        for (long v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (out.empty()) throw UsageError("--" + flag + ": no values");
    return out;
}

std::vector<unsigned> parse_unsigned_list(const std::string& text, const std::string& flag, long lo, long hi)
{
    std::vector<unsigned> out;
    for (long v : parse_list(text, flag)) {
        if (v < lo || v > hi) {
            throw UsageError("--" + flag + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi) +
                             " (got " + std::to_string(v) + ")");
        }
        out.push_back(static_cast<unsigned>(v));
    }
    return out;
}

std::vector<OddPrime> parse_primes(const std::string& text)
{
    std::vector<OddPrime> out;
    for (long v : parse_list(text, "p")) out.emplace_back(v);
    return out;
}

Coords parse_coords(const std::string& c)
{
    if (c == "w") return Coords::W;
    if (c == "z") return Coords::Z;
    throw UsageError("--coords must be w or z");
}

std::string shell_quote(const std::string& s)
{
    if (s.find_first_of(" *^()'\"[],") == std::string::npos) return s;
    std::string q = "'";
    for (char ch : s) q += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
    return q + "'";
}

// ---------------------------------------------------------------------------
// grid execution

struct Task {
    std::function<LemmaReport()> run;
    std::string replay;
};

unsigned default_jobs()
{
    if (const char* env = std::getenv("CRSBENCH_JOBS")) {
        try {
            long v = std::stol(env);
            if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw UsageError("CRSBENCH_JOBS must be an integer in 1..256");
    }
    return 1;
}

LemmaReport run_one(const Task& t, bool timing)
{
    auto start = std::chrono::steady_clock::now();
    LemmaReport r;
    try {
        r = t.run();
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        r.lemma = "internal";
        r.pass = false;
        r.notes.push_back(std::string("internal assertion failed: ") + e.what());
    }
    if (timing) {
        r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    else {
        r.elapsed_ms.reset();
    }
    return r;
}

// Workers take task indices from a shared counter; results land in task order.
std::vector<LemmaReport> run_grid(const std::vector<Task>& tasks, unsigned jobs, bool timing)
{
    std::vector<LemmaReport> out(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) {
            try {
                out[k] = run_one(tasks[k], timing);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// emitters

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

std::string md_cell(std::string s)
{
    std::string out;
    for (char ch : s) out += ch == '|' ? std::string("\\|") : std::string(1, ch);
    return out;
}

std::string md_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], md_cell(r[c]).size());
    }
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
        os << '|';
        for (std::size_t c = 0; c < header.size(); ++c) {
            std::string cell = md_cell(r[c]);
            os << ' ' << cell << std::string(width[c] - cell.size(), ' ') << " |";
        }
        os << '\n';
    };
    line(header);
    os << '|';
    for (auto w : width) os << std::string(w + 2, '-') << '|';
    os << '\n';
    for (const auto& r : rows) line(r);
    return os.str();
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows)
{
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << csv_field(r[c]);
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
}

void emit(const RunConfig& cfg, const std::string& text)
{
    if (cfg.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw UsageError("cannot open --out file '" + cfg.out + "'");
    f << text;
}

int emit_verify(const RunConfig& cfg, const std::string& command, const std::vector<Task>& tasks)
{
    auto reports = run_grid(tasks, cfg.jobs, cfg.timing);
    json cells = json::array(), failures = json::array();
    std::size_t passed = 0;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        cells.push_back(reports[k].to_json());
        if (reports[k].pass) {
            ++passed;
            continue;
        }
        failures.push_back({{"cell", k},
                            {"lemma", reports[k].lemma},
                            {"params", reports[k].params},
                            {"seed", reports[k].seed},
                            {"replay", tasks[k].replay}});
    }
    bool ok = passed == reports.size();
    for (const auto& f : failures) {
        std::cerr << "FAIL cell " << f["cell"].get<std::size_t>() << ": " << f["params"].dump()
                  << "  replay: " << f["replay"].get<std::string>() << '\n';
    }

    if (cfg.format == "json") {
        json j = {{"command", "verify " + command},
                  {"seed", cfg.seed},
                  {"cells", cells},
                  {"summary", {{"cells", reports.size()}, {"passed", passed}, {"failed", reports.size() - passed}}},
                  {"failures", failures},
                  {"verdict", ok ? "pass" : "fail"}};
        emit(cfg, j.dump(2) + "\n");
    }
    else {
        std::vector<std::string> header = {"cell", "lemma", "params", "verdict", "seed"};
        if (cfg.timing) header.push_back("elapsed_ms");
        std::vector<std::vector<std::string>> rows;
        for (std::size_t k = 0; k < reports.size(); ++k) {
            std::vector<std::string> r = {std::to_string(k), reports[k].lemma, reports[k].params.dump(),
                                          reports[k].pass ? "pass" : "fail", std::to_string(reports[k].seed)};
            if (cfg.timing) {
                std::ostringstream ms;
                ms.precision(3);
                ms << std::fixed << reports[k].elapsed_ms.value_or(0);
                r.push_back(ms.str());
            }
            rows.push_back(r);
        }
        emit(cfg, cfg.format == "csv" ? csv_table(header, rows) : md_table(header, rows));
    }
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify suites

struct VerifyOpts {
    std::string p = "3";
    std::string s = "0..1";
    std::string e = "2";
    std::string n = "1";
    std::string eisenstein;
    std::string shape = "all";
    std::string coords = "w";
    unsigned trials = 5;
    unsigned deg = 4;
    long bound = 100;
    unsigned symbols = 2;
    unsigned depth = 3;
    std::string ring;
    std::string seq;
    unsigned module_rank = 1;
    unsigned random = 20;
    std::string x = "u,w,v,E,omega";
    std::string k = "1..2";
    std::string l = "1..2";
};

std::string replay_prefix(const std::string& sub) { return "crsbench verify " + sub; }

// Eisenstein polynomials for the grid: the given one, or u^e - p and u^e + p u^(e/2) - p.
std::vector<PrismParams> eisenstein_grid(const VerifyOpts& o, const std::vector<OddPrime>& primes)
{
    std::vector<PrismParams> out;
    if (!o.eisenstein.empty()) {
        for (OddPrime p : primes) out.emplace_back(p, MPoly::parse(o.eisenstein));
        return out;
    }
    if (o.shape != "all" && o.shape != "pure" && o.shape != "mixed") throw UsageError("--shape must be pure, mixed or all");
    auto es = parse_unsigned_list(o.e, "e", 1, 64);
    for (OddPrime p : primes) {
        for (unsigned e : es) {
            std::string ps = std::to_string(p.value());
            if (o.shape != "mixed") out.emplace_back(p, MPoly::parse("u^" + std::to_string(e) + "-" + ps));
            // for e = 1 the mixed shape collapses to u
            if (o.shape != "pure" && e > 1) {
                out.emplace_back(p, MPoly::parse("u^" + std::to_string(e) + "+" + ps + "*u^" + std::to_string(e / 2) +
                                                 "-" + ps));
            }
        }
    }
    return out;
}

LemmaReport koszul_cell(const KoszulInstance& inst)
{
    auto R = FiniteRingSpec::parse(inst.ring);
    std::vector<MPoly> seq;
    for (const auto& f : inst.seq) seq.push_back(MPoly::parse(f));
    KoszulComplex cx(R, seq, inst.module_rank);
    auto h = koszul_homology(cx);
    auto reg = check_reg_iff_h1(R, seq, inst.module_rank);
    LemmaReport rep;
    rep.lemma = "koszul";
    rep.params = {{"ring", inst.ring}, {"sequence", inst.seq}, {"module_rank", inst.module_rank}};
    rep.details = koszul_report_json(cx, h, reg);
    bool perm_ok = true;
    if (seq.size() <= 4) {
        auto perm = check_perm_invariance(R, seq, inst.module_rank);
        perm_ok = perm.invariant;
        rep.details["permutations"] = {{"checked", perm.permutations}, {"invariant", perm.invariant}};
    }
    bool euler = euler_characteristic_consistent(cx, h);
    rep.pass = reg.pass() && perm_ok && euler;
    if (!reg.hypothesis) rep.notes.push_back("some f_k is a unit mod the maximal ideal; equivalence not asserted");
    return rep;
}

std::vector<Task> build_verify_tasks(const std::string& sub, const VerifyOpts& o, const RunConfig& cfg)
{
    std::vector<Task> tasks;
    const std::string seed_arg = " --seed " + std::to_string(cfg.seed);
    const std::string coords_arg = " --coords " + o.coords;
    const Coords c = parse_coords(o.coords);
    const std::uint64_t seed = cfg.seed;

    if (sub == "lemma-coeff" || sub == "delta-ideal" || sub == "tau-stability") {
        auto primes = parse_primes(o.p);
        auto ss = parse_unsigned_list(o.s, "s", 0, 8);
        if (sub == "lemma-coeff" && o.bound < 1) throw UsageError("--bound must be positive");
        for (OddPrime p : primes) {
            for (unsigned s : ss) {
                std::string cell = " --p " + std::to_string(p.value()) + " --s " + std::to_string(s) + coords_arg;
                if (sub == "lemma-coeff") {
                    unsigned trials = o.trials, deg = o.deg;
                    long bound = o.bound;
                    tasks.push_back({[=] { return lemma_coeff_trials(p, s, trials, deg, bound, seed, c); },
                                     replay_prefix(sub) + cell + " --trials " + std::to_string(trials) + " --deg " +
                                         std::to_string(deg) + " --bound " + std::to_string(bound) + seed_arg});
                }
                else if (sub == "delta-ideal") {
                    tasks.push_back({[=] { return verify_delta_ideal(p, s, c); }, replay_prefix(sub) + cell});
                }
                else {
                    tasks.push_back({[=] { return verify_tau_stability(p, s, c); }, replay_prefix(sub) + cell});
                }
            }
        }
    }
    else if (sub == "is-mod-pn" || sub == "blowup-generator") {
        auto primes = parse_primes(o.p);
        auto grid = eisenstein_grid(o, primes);
        auto ss = parse_unsigned_list(o.s, "s", 0, 8);
        auto ns = sub == "is-mod-pn" ? parse_unsigned_list(o.n, "n", 1, 16) : std::vector<unsigned>{0};
        for (const auto& params : grid) {
            std::string cell = " --p " + std::to_string(params.p().value()) + " --eisenstein " +
                               shell_quote(params.E().to_string());
            for (unsigned n : ns) {
                for (unsigned s : ss) {
                    if (sub == "is-mod-pn") {
                        tasks.push_back({[=] { return verify_is_mod_pn(params, n, s); },
                                         replay_prefix(sub) + cell + " --n " + std::to_string(n) + " --s " +
                                             std::to_string(s)});
                    }
                    else {
                        unsigned trials = o.trials, deg = o.deg;
                        tasks.push_back({[=] { return blowup_trials(params, s, trials, deg, seed, c); },
                                         replay_prefix(sub) + cell + " --s " + std::to_string(s) + " --trials " +
                                             std::to_string(trials) + " --deg " + std::to_string(deg) + coords_arg +
                                             seed_arg});
                    }
                }
            }
        }
    }
    else if (sub == "delta-laws") {
        if (o.symbols < 1 || o.symbols > 4) throw UsageError("--symbols must lie in 1..4");
        if (o.depth < 1 || o.depth > 3) throw UsageError("--depth must lie in 1..3");
        for (OddPrime p : parse_primes(o.p)) {
            unsigned symbols = o.symbols, depth = o.depth, trials = o.trials;
            tasks.push_back({[=] {
                                 auto r = check_delta_laws(symbols, depth, p, trials, seed);
                                 LemmaReport rep;
                                 rep.lemma = "delta-laws";
                                 rep.params = {{"p", p.value()}, {"symbols", symbols}, {"depth", depth},
                                               {"trials", trials}};
                                 rep.pass = r.all_pass();
                                 rep.seed = seed;
                                 json checks = json::array();
                                 for (const auto& ch : r.checks) {
                                     checks.push_back({{"law", ch.law},
                                                       {"instance", ch.instance},
                                                       {"pass", ch.pass},
                                                       {"residual", ch.residual}});
                                 }
                                 rep.details["checks"] = checks;
                                 return rep;
                             },
                             replay_prefix(sub) + " --p " + std::to_string(p.value()) + " --symbols " +
                                 std::to_string(symbols) + " --depth " + std::to_string(depth) + " --trials " +
                                 std::to_string(trials) + seed_arg});
        }
    }
    else if (sub == "koszul") {
        std::vector<KoszulInstance> insts;
        if (!o.ring.empty()) {
            if (o.seq.empty()) throw UsageError("--ring needs --seq");
            KoszulInstance inst{o.ring, {}, o.module_rank};
            std::stringstream ss(o.seq);
            for (std::string f; std::getline(ss, f, ',');) inst.seq.push_back(f);
            // validate up front so bad input is a usage error
            auto R = FiniteRingSpec::parse(inst.ring);
            for (const auto& f : inst.seq) R.coords_of(MPoly::parse(f));
            insts.push_back(inst);
        }
        else {
            insts = koszul_fixed_instances();
            std::mt19937_64 rng(seed);
            for (unsigned k = 0; k < o.random; ++k) insts.push_back(random_koszul_instance(rng));
        }
        for (const auto& inst : insts) {
            std::string seqtext;
            for (const auto& f : inst.seq) seqtext += (seqtext.empty() ? "" : ",") + f;
            tasks.push_back({[=] {
                                 auto r = koszul_cell(inst);
                                 r.seed = seed;
                                 return r;
                             },
                             replay_prefix(sub) + " --ring " + shell_quote(inst.ring) + " --seq " +
                                 shell_quote(seqtext) + " --module-rank " + std::to_string(inst.module_rank)});
        }
    }
    else if (sub == "disjointness") {
        auto primes = parse_primes(o.p);
        auto ks = parse_unsigned_list(o.k, "k", 0, 12);
        auto ls = parse_unsigned_list(o.l, "l", 0, 12);
        std::vector<std::string> labels;
        std::stringstream ss(o.x);
        for (std::string x; std::getline(ss, x, ',');) {
            if (x != "u" && x != "w" && x != "v" && x != "E" && x != "omega") {
                throw UsageError("--x entries must be u, w, v, E or omega");
            }
            labels.push_back(x);
        }
        unsigned e = parse_unsigned_list(o.e, "e", 1, 64).front();
        for (OddPrime p : primes) {
            for (const auto& label : labels) {
                MPoly x = label == "u"   ? MPoly::parse("u")
                          : label == "w" ? MPoly::parse("w")
                          : label == "v" ? v_elem(p, Coords::W)
                          : label == "E" ? MPoly::parse("u^" + std::to_string(e) + "-" + std::to_string(p.value()))
                                         : make_omega(p);
                for (unsigned k : ks) {
                    for (unsigned l : ls) {
                        unsigned trials = o.trials;
                        tasks.push_back(
                            {[=] {
                                 auto d = disjointness_property(x, label, p, k, l, trials, seed);
                                 LemmaReport rep;
                                 rep.lemma = "disjointness";
                                 rep.params = {{"p", p.value()}, {"x", label},   {"x_poly", x.to_string()},
                                               {"k", k},         {"l", l},       {"trials", trials}};
                                 rep.pass = d.pass;
                                 rep.seed = seed;
                                 rep.details["failures"] = d.failures;
                                 return rep;
                             },
                             replay_prefix(sub) + " --p " + std::to_string(p.value()) + " --x " + label + " --e " +
                                 std::to_string(e) + " --k " + std::to_string(k) + " --l " + std::to_string(l) +
                                 " --trials " + std::to_string(trials) + seed_arg});
                    }
                }
            }
        }
    }
    if (tasks.empty()) throw UsageError("empty parameter grid");
    return tasks;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsOpts {
    std::string p, e, i;
    std::string c0;
    unsigned s0 = 0;
    std::string field;
    bool check = false;
};

struct CheckItem {
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<CheckItem> bound_checks(OddPrime p, unsigned e, unsigned i)
{
    std::vector<CheckItem> out;
    const Rational main = mu_bound_main(p, e, i);
    const long pv = p.value();
    auto add = [&](std::string name, bool ok, std::string detail) { out.push_back({std::move(name), ok, std::move(detail)}); };

    if (static_cast<long>(i) * e < pv - 1) {
        auto h = hattori_bound(p, e, i);
        add("hattori-equal", *h.value == main, to_string(*h.value) + " vs " + to_string(main));
    }
    if (static_cast<long>(i - 1) * e <= static_cast<long>(i) * pv) {
        auto cl = caruso_liu_bound(p, e, i);
        add("caruso-liu-equal", *cl.value == main, to_string(*cl.value) + " vs " + to_string(main));
    }
    if (e == 1 && i < static_cast<unsigned>(pv - 1)) {
        Rational fa = *fontaine_abrashkin_bound(p, e, i).value;
        Rational want = i == 1 ? Rational(1) : Rational(pv - 1, pv);
        add("fontaine-abrashkin-gap", main - fa == want, to_string(main - fa) + " vs " + to_string(want));
    }
    const auto c = alpha_beta(p, e, i);
    if (i == 1) {
        add("beta-below-e/(p-1)", c.beta <= Rational(e, pv - 1), to_string(c.beta));
    }
    else {
        Rational lim = std::min<long>(e, 2 * pv);
        add("beta-below-min(e,2p)", c.beta < lim, to_string(c.beta) + " vs " + to_string(lim));
    }
    add("proof-chain", assemble_final_bound(p, e, i).value == main, to_string(main));
    for (const auto& s : simplified_bounds(p, e, i)) {
        add("simplified " + s.case_name + " dominates", s.value >= main, to_string(s.value) + " vs " + to_string(main));
    }
    return out;
}

int cmd_bounds(const RunConfig& cfg, const BoundsOpts& o)
{
    if (o.p.empty() || o.e.empty() || o.i.empty()) throw UsageError("bounds needs --p, --e and --i");
    auto primes = parse_primes(o.p);
    auto es = parse_unsigned_list(o.e, "e", 1, 100000);
    auto is = parse_unsigned_list(o.i, "i", 1, 100000);

    std::optional<CarusoInputs> caruso;
    std::string source;
    if (!o.field.empty()) {
        if (!o.c0.empty() || o.s0) throw UsageError("--field cannot be combined with --c0/--s0");
        NamedField f = named_field(o.field);
        caruso = f.caruso;
        source = f.name;
        for (OddPrime p : primes) {
            if (f.p && f.p != p.value()) throw UsageError("field " + f.name + " lives over a different prime than --p");
        }
        for (unsigned e : es) {
            if (e % f.e) throw UsageError("--e must be a multiple of e(" + f.name + ") = " + std::to_string(f.e));
        }
    }
    else if (!o.c0.empty() || o.s0) {
        if (o.c0.empty() || !o.s0) throw UsageError("--c0 and --s0 go together");
        caruso = CarusoInputs{parse_rational(o.c0), o.s0};
        if (caruso->c0 < 0) throw UsageError("--c0 must be >= 0");
        source = "explicit";
    }

    struct Cell {
        OddPrime p;
        unsigned e, i;
    };
    std::vector<Cell> cells;
    for (OddPrime p : primes) {
        for (unsigned e : es) {
            for (unsigned i : is) cells.push_back({p, e, i});
        }
    }

    json tables = json::array();
    std::vector<std::vector<std::string>> rows;
    bool ok = true;
    for (const auto& cell : cells) {
        auto table = compare_table(cell.p, cell.e, cell.i, caruso);
        json t = {{"p", cell.p.value()}, {"e", cell.e}, {"i", cell.i}, {"seed", cfg.seed}};
        json jr = json::array();
        for (const auto& r : table) {
            jr.push_back(bound_row_json(r, cell.p));
            std::string v = !r.applicable ? "n/a"
                            : r.value     ? to_string(*r.value)
                                          : to_string(r.log_value->rational) + " + " + to_string(r.log_value->coeff) +
                                                "*log_" + std::to_string(cell.p.value()) + "(" +
                                                to_string(r.log_value->arg) + ")";
            std::string dec = !r.applicable ? "" : bound_row_json(r, cell.p)["value_decimal"].get<std::string>();
            rows.push_back({std::to_string(cell.p.value()), std::to_string(cell.e), std::to_string(cell.i),
                            method_name(r.method), v, dec.substr(0, std::min<std::size_t>(dec.size(), 12)),
                            r.applicable ? "" : r.reason});
        }
        t["rows"] = jr;
        if (caruso) {
            t["caruso_inputs"] = {{"c0", to_string(caruso->c0)}, {"s0", caruso->s0}, {"source", source}};
        }
        if (o.check) {
            json checks = json::array();
            for (const auto& c : bound_checks(cell.p, cell.e, cell.i)) {
                checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
                if (!c.pass) {
                    ok = false;
                    std::cerr << "FAIL (p,e,i)=(" << cell.p.value() << "," << cell.e << "," << cell.i
                              << ") " << c.name << ": " << c.detail << '\n';
                }
            }
            t["checks"] = checks;
        }
        tables.push_back(t);
    }

    if (cfg.format == "json") {
        json j = tables.size() == 1 ? tables[0] : json{{"seed", cfg.seed}, {"tables", tables}};
        emit(cfg, j.dump(2) + "\n");
    }
    else {
        std::vector<std::string> header = {"p", "e", "i", "method", "value", "approx", "note"};
        emit(cfg, cfg.format == "csv" ? csv_table(header, rows) : md_table(header, rows));
    }
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// herbrand

struct HerbrandOpts {
    std::string builtin;
    std::string breaks;
    std::string breaks_file;
    long e = 0;
};

json fn_json(const HerbrandFn& f)
{
    json pts = json::array(), sl = json::array();
    for (const auto& [x, y] : f.points) pts.push_back({to_string(x), to_string(y)});
    for (const auto& s : f.slopes()) sl.push_back(to_string(s));
    return {{"points", pts}, {"slopes", sl}, {"final_slope", to_string(f.final_slope)}};
}

int cmd_herbrand(const RunConfig& cfg, const HerbrandOpts& o)
{
    int given = !o.builtin.empty() + !o.breaks.empty() + !o.breaks_file.empty();
    if (given != 1) throw UsageError("give exactly one of --builtin, --breaks, --breaks-file");
    RamBreaks b;
    std::optional<unsigned> e;
    std::string source;
    if (!o.builtin.empty()) {
        NamedField f = named_field(o.builtin);
        if (o.builtin.rfind("cyclotomic:", 0) != 0) throw UsageError("--builtin supports cyclotomic:p:n only");
        auto n = f.caruso.s0;
        b = cyclotomic_breaks(OddPrime(f.p), n);
        e = f.e;
        source = f.name;
    }
    else {
        json data;
        try {
            if (!o.breaks.empty()) {
                data = json::parse(o.breaks);
                source = "inline";
            }
            else {
                std::ifstream in(o.breaks_file);
                if (!in) throw UsageError("cannot read '" + o.breaks_file + "'");
                data = json::parse(in);
                source = o.breaks_file;
            }
        } catch (const json::exception& ex) {
            throw UsageError(std::string("malformed break data: ") + ex.what());
        }
        b = RamBreaks::from_json(data);
    }
    if (o.e < 0) throw UsageError("--e must be positive");
    if (o.e > 0) e = static_cast<unsigned>(o.e);

    auto phi = herbrand_phi(b);
    auto psi = herbrand_psi(phi);
    json breaks = json::array();
    for (const auto& [lambda, order] : b.breaks) breaks.push_back({to_string(lambda), order});
    json j = {{"source", source},
              {"breaks", breaks},
              {"phi", fn_json(phi)},
              {"psi", fn_json(psi)},
              {"lambda", to_string(last_lower_break(b))},
              {"mu", to_string(last_upper_break(b))},
              {"seed", cfg.seed}};
    j["e"] = e ? json(*e) : json(nullptr);
    if (e && psi.final_slope == Rational(*e)) {
        j["c0"] = to_string(c0_of(psi, *e));
    }
    else {
        j["c0"] = nullptr;
        j["c0_note"] = e ? "final slope of psi is " + to_string(psi.final_slope) + ", not e" : "pass --e to compute c0";
    }

    if (cfg.format == "json") {
        emit(cfg, j.dump(2) + "\n");
        return 0;
    }
    std::vector<std::vector<std::string>> rows;
    auto dump_fn = [&](const std::string& name, const HerbrandFn& f) {
        auto sl = f.slopes();
        for (std::size_t k = 0; k < f.points.size(); ++k) {
            rows.push_back({name, to_string(f.points[k].first), to_string(f.points[k].second), to_string(sl[k])});
        }
    };
    dump_fn("phi", phi);
    dump_fn("psi", psi);
    rows.push_back({"lambda", j["lambda"], "", ""});
    rows.push_back({"mu", j["mu"], "", ""});
    rows.push_back({"c0", j["c0"].is_null() ? "" : j["c0"].get<std::string>(), "", ""});
    std::vector<std::string> header = {"item", "x", "y", "slope_after"};
    emit(cfg, cfg.format == "csv" ? csv_table(header, rows) : md_table(header, rows));
    return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--format", cfg.format, "json, csv or md")->check(CLI::IsMember({"json", "csv", "md"}));
    sub->add_option("--out", cfg.out, "write to this file instead of stdout");
    sub->add_option("--seed", cfg.seed, "seed for randomized suites (default 0)");
    sub->add_option("--jobs", cfg.jobs, "worker threads (default $CRSBENCH_JOBS or 1)")->check(CLI::Range(1, 256));
    sub->add_flag("--timing", cfg.timing, "record elapsed_ms per cell");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"crsbench: exact checks for CRS ideals, Koszul complexes and ramification bounds"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* verify = app.add_subcommand("verify", "run a verification suite over a parameter grid");
    verify->require_subcommand(1);
    VerifyOpts vo;
    std::string verify_sub;
    const std::vector<std::pair<std::string, std::string>> suites = {
        {"lemma-coeff", "tau^(p^s)(f) - f = phi^s(v) u Q for random f"},
        {"delta-ideal", "delta(I_s) in I_s with certificates"},
        {"tau-stability", "tau(I_s) in I_s with certificates"},
        {"is-mod-pn", "u-valuation of theta_{s,i} mod p^n"},
        {"blowup-generator", "tau(y)E - y tau(E) in phi^s(v) u E-multiples"},
        {"delta-laws", "delta-ring laws in the free delta-ring"},
        {"koszul", "Koszul homology, regularity and permutation invariance"},
        {"disjointness", "p^k A cap x^l A = p^k x^l A"},
    };
    for (const auto& [name, help] : suites) {
        auto* s = verify->add_subcommand(name, help);
        add_common(s, cfg);
        s->add_option("--p", vo.p, "primes, e.g. 3,5");
        s->callback([&verify_sub, n = name] { verify_sub = n; });
        if (name == "lemma-coeff" || name == "delta-ideal" || name == "tau-stability" || name == "is-mod-pn" ||
            name == "blowup-generator") {
            s->add_option("--s", vo.s, "values of s, e.g. 0..3");
        }
        if (name == "lemma-coeff" || name == "delta-ideal" || name == "tau-stability" || name == "blowup-generator") {
            s->add_option("--coords", vo.coords, "w or z = 1 + w");
        }
        if (name == "is-mod-pn" || name == "blowup-generator") {
            s->add_option("--e", vo.e, "ramification indices");
            s->add_option("--eisenstein", vo.eisenstein, "E(u); overrides --e");
            s->add_option("--shape", vo.shape, "pure (u^e - p), mixed (u^e + p u^(e/2) - p) or all");
        }
        if (name == "is-mod-pn") s->add_option("--n", vo.n, "values of n");
        if (name == "lemma-coeff" || name == "blowup-generator" || name == "delta-laws" || name == "disjointness") {
            s->add_option("--trials", vo.trials, "random trials per cell");
        }
        if (name == "lemma-coeff" || name == "blowup-generator") s->add_option("--deg", vo.deg, "total degree bound");
        if (name == "lemma-coeff") s->add_option("--bound", vo.bound, "coefficient bound");
        if (name == "delta-laws") {
            s->add_option("--symbols", vo.symbols, "free generators");
            s->add_option("--depth", vo.depth, "Frobenius depth");
        }
        if (name == "koszul") {
            s->add_option("--ring", vo.ring, "e.g. 'Z/9[u,w]/(u^2, w^2)'; default runs the built-in set");
            s->add_option("--seq", vo.seq, "comma-separated sequence");
            s->add_option("--module-rank", vo.module_rank, "rank of the free module")->check(CLI::Range(1, 8));
            s->add_option("--random", vo.random, "random instances added to the built-in set");
        }
        if (name == "disjointness") {
            s->add_option("--x", vo.x, "subset of u,w,v,E,omega");
            s->add_option("--e", vo.e, "degree of E = u^e - p");
            s->add_option("--k", vo.k, "powers of p");
            s->add_option("--l", vo.l, "powers of x");
        }
    }

    auto* bounds = app.add_subcommand("bounds", "compare ramification bounds for (p, e, i)");
    add_common(bounds, cfg);
    BoundsOpts bo;
    bounds->add_option("--p", bo.p, "prime(s)");
    bounds->add_option("--e", bo.e, "absolute ramification index(es)");
    bounds->add_option("--i", bo.i, "cohomological degree(s)");
    bounds->add_option("--c0", bo.c0, "Caruso's c0(K)");
    bounds->add_option("--s0", bo.s0, "Caruso's s0(K)");
    bounds->add_option("--field", bo.field, "qp, cyclotomic:p:n or kummer:p:n");
    bounds->add_flag("--check", bo.check, "also check the equalities and inequalities between rows");

    auto* herbrand = app.add_subcommand("herbrand", "Herbrand functions from ramification breaks");
    add_common(herbrand, cfg);
    HerbrandOpts ho;
    herbrand->add_option("--builtin", ho.builtin, "cyclotomic:p:n");
    herbrand->add_option("--breaks", ho.breaks, "JSON [[lambda, |G|], ...] with lambda an integer or \"a/b\"");
    herbrand->add_option("--breaks-file", ho.breaks_file, "file holding the same JSON");
    herbrand->add_option("--e", ho.e, "e of the top field, to compute c0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cfg.jobs == 0) cfg.jobs = default_jobs();
        if (bounds->parsed()) return cmd_bounds(cfg, bo);
        if (herbrand->parsed()) return cmd_herbrand(cfg, ho);
        auto tasks = build_verify_tasks(verify_sub, vo, cfg);
        return emit_verify(cfg, verify_sub, tasks);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    } catch (const PolyError& e) {
        std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
