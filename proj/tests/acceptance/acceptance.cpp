#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cgo/catalog.hpp"
#include "cgo/engine.hpp"
#include "cgo/harness.hpp"
#include "cgo/memory.hpp"
#include "cgo/quality.hpp"
#include "cgo/script.hpp"
#include "cgo/toolbox.hpp"
#include "../support/oracles.hpp"
#include "../support/script_fixtures.hpp"

using namespace cgo;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, std::string line) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "ok   " : "MISS ") + line);
    }
    void info(std::string line) { notes.push_back("info " + line); }
};

int failures = 0;
std::chrono::steady_clock::time_point started;

void report(int id, const char* title, const Outcome& o) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::printf("%s criterion %d: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, seconds);
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

struct Setting {
    std::string case_id;
    double eps_h = 1e-4;
    std::size_t runs = 50;
    std::optional<std::int64_t> agents;
    std::optional<std::int64_t> cycles;
};

Setting standard(const std::string& case_id) {
    Setting st;
    st.case_id = case_id;
    return st;
}

harness::InstanceReport run_one(const script::Script& s, const Setting& st, const std::string& instance) {
    harness::ExperimentPlan plan;
    plan.script = s;
    plan.case_id = st.case_id;
    plan.problems = {instance};
    plan.runs = st.runs;
    plan.base_seed = 1;
    plan.eps_h = st.eps_h;
    plan.agents = st.agents;
    plan.cycles = st.cycles;
    return harness::run_experiment(plan).front();
}

std::string describe(const std::string& what, const harness::AggregateStats& s) {
    char buf[256];
    if (!s.mean) {
        std::snprintf(buf, sizeof buf, "%s: no feasible run out of %zu", what.c_str(), s.runs);
    } else {
        std::snprintf(buf, sizeof buf, "%s: mean %.10g sd %.3g feasible %zu/%zu", what.c_str(), *s.mean, *s.stdev,
                      s.feasible, s.runs);
    }
    return buf;
}

/// Checks that every run is feasible and |mean - target| <= tol.
void check_mean(Outcome& o, const std::string& what, const harness::AggregateStats& s, double target, double tol) {
    const bool ok = s.mean && s.feasible == s.runs && std::abs(*s.mean - target) <= tol;
    o.require(ok, describe(what, s) + fmt(" | target %.10g tol %.3g", target, tol) +
                      (s.mean ? fmt(" diff %.3g", *s.mean - target) : std::string()));
}

// ---------------------------------------------------------------------------

void criterion_pure(const script::Script& s) {
    Outcome o;
    const std::pair<const char*, double> de2[] = {
        {"G03", -1.00050},   {"G04", -30665.5387}, {"G05", 5126.49671}, {"G06", -6961.81388},
        {"G07", 24.30621},   {"G08", -0.095825},   {"G09", 680.63006},  {"G10", 7049.24802},
        {"G11", 0.74990},    {"G12", -1.00000},    {"G13", 0.053942},
    };
    for (const auto& [id, target] : de2) {
        const auto r = run_one(s, standard("#DE2"), id);
        check_mean(o, std::string("#DE2 ") + id, r.stats, target, 1e-4 * std::max(1.0, std::abs(target)));
    }
    const auto g01 = run_one(s, standard("#DE1"), "G01");
    check_mean(o, "#DE1 G01", g01.stats, -15.0, 1e-5);
    const auto g02 = run_one(s, standard("#SC"), "G02");
    o.require(g02.stats.mean && *g02.stats.mean <= -0.78, describe("#SC G02", g02.stats) + " | required mean <= -0.78");
    report(1, "pure cases, N=60 T=2000 eps_h=1e-4, 50 runs", o);
}

void criterion_hybrid(const script::Script& s) {
    Outcome o;
    // printed mean, tabulated standard deviation, printed decimals
    struct Row {
        const char* id;
        double mean;
        double sd;
        int decimals;
    };
    const Row rows[] = {
        {"G03", -1.00050, 1.489e-10, 5},   {"G04", -30665.5387, 2.942e-10, 4}, {"G05", 5126.49671, 9.346e-12, 5},
        {"G06", -6961.81388, 3.277e-11, 5}, {"G07", 24.30621, 3.305e-07, 5},   {"G08", -0.095825, 5.835e-16, 6},
        {"G09", 680.63006, 2.855e-12, 5},  {"G11", 0.74990, 6.001e-15, 5},     {"G12", -1.00000, 0.0, 5},
        {"G13", 0.053942, 2.114e-16, 6},
    };
    for (const char* c : {"#DESC", "#DESC-I"}) {
        for (const auto& r : rows) {
            const double tol = 10.0 * r.sd + 0.5 * std::pow(10.0, -r.decimals);
            const auto rep = run_one(s, standard(c), r.id);
            check_mean(o, std::string(c) + " " + r.id, rep.stats, r.mean, tol);
        }
    }
    const auto g10 = run_one(s, standard("#DESC-I"), "G10");
    check_mean(o, "#DESC-I G10", g10.stats, 7049.24813, 1e-2);
    report(2, "hybrid cases, N=60 T=2000 eps_h=1e-4, 50 runs", o);
}

void criterion_tight(const script::Script& s) {
    Outcome o;
    const Setting l{"#DESC-I", 1e-8, 25, 70, 3000};
    const std::pair<const char*, double> rows[] = {{"G03", -1.00000}, {"G11", 0.75000}, {"G13", 0.053950}};
    harness::InstanceReport g13_i;
    for (const auto& [id, target] : rows) {
        auto rep = run_one(s, l, id);
        check_mean(o, std::string("#DESC-I ") + id, rep.stats, target, 1e-4);
        if (std::string(id) == "G13") g13_i = std::move(rep);
    }
    const auto g05 = run_one(s, l, "G05");
    check_mean(o, "#DESC-I G05", g05.stats, 5126.49812, 1e-2);

    Setting nc = l;
    nc.case_id = "#DESC";
    const auto g13_n = run_one(s, nc, "G13");
    o.info(describe("#DESC G13", g13_n.stats));
    const auto a = harness::feasible_objectives(g13_n.records);
    const auto b = harness::feasible_objectives(g13_i.records);
    if (a.size() >= 2 && b.size() >= 2 && g13_n.stats.feasible == g13_n.stats.runs) {
        const auto w = harness::welch_t(a, b);
        const double gap = *g13_n.stats.mean - *g13_i.stats.mean;
        // a difference must exceed floating-point noise at the optimum scale
        const bool worse = gap > 1e-9 * std::abs(*g13_i.stats.mean);
        o.require(worse && w.significant,
                  fmt("G13 #DESC minus #DESC-I mean %.3g, Welch t %.4g df %.4g p %.4g", gap, w.t, w.df, w.p_value) +
                      " | required: #DESC worse and p < 0.05");
    } else {
        // infeasible #DESC runs are worse than any feasible #DESC-I run
        const bool worse = g13_n.stats.feasible < g13_n.stats.runs && g13_i.stats.feasible == g13_i.stats.runs;
        o.require(worse, "G13 #DESC has infeasible runs while #DESC-I has none");
    }
    const auto g05_n = run_one(s, nc, "G05");
    o.info(describe("#DESC G05", g05_n.stats));
    const auto c = harness::feasible_objectives(g05_n.records);
    const auto d = harness::feasible_objectives(g05.records);
    if (c.size() >= 2 && d.size() >= 2) {
        const auto w = harness::welch_t(c, d);
        o.info(fmt("G05 #DESC minus #DESC-I mean %.3g, Welch t %.4g p %.4g (not gated)",
                   *g05_n.stats.mean - *g05.stats.mean, w.t, w.p_value));
    }
    report(3, "eps_h=1e-8, N=70 T=3000, 25 runs", o);
}

void criterion_landscape(const script::Script& base) {
    Outcome o;
    const Setting l{"#DESC-I", 1e-8, 25, 70, 3000};
    const double fstar = *problem::catalog_get("G13", 1e-8).known_optimum;
    for (double rtu : {0.0, 0.5, 1.0}) {
        auto s = base;
        s.facilitator.config.c_rtu = rtu;
        const auto rep = run_one(s, l, "G13");
        const auto what = fmt("G13 C_RTU=%.2f", rtu);
        if (rtu == 0.5) {
            const bool ok = rep.stats.mean && rep.stats.feasible == rep.stats.runs &&
                            std::abs(*rep.stats.mean - fstar) < harness::solved_threshold("G13");
            o.require(ok, describe(what, rep.stats) + " | required: solved");
        } else if (rtu == 1.0) {
            const bool none = rep.stats.feasible == 0;
            const bool gross = rep.stats.mean && *rep.stats.mean - fstar > 1e-2;
            o.require(none || gross, describe(what, rep.stats) + " | required: all infeasible or mean > f* + 1e-2");
        } else {
            o.info(describe(what, rep.stats));
        }
    }
    report(4, "C_RTU sweep on G13 with #DESC-I:L settings", o);
}

// ---------------------------------------------------------------------------

void criterion_properties(const script::Script& s) {
    Outcome o;
    std::mt19937_64 gen(20240917);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    {
        std::size_t bad = 0;
        for (int i = 0; i < 10000; ++i) {
            const std::size_t j = 1 + gen() % 6;
            std::vector<problem::ConstraintBounds> b(j);
            std::vector<double> lo(j), hi(j), g(j);
            for (std::size_t k = 0; k < j; ++k) {
                double a = -5 + 10 * u01(gen), c = -5 + 10 * u01(gen);
                if (a > c) std::swap(a, c);
                if (gen() % 3 == 0) a = -std::numeric_limits<double>::infinity();
                if (gen() % 5 == 0) c = a = std::isinf(a) ? c : a;
                b[k] = {a, c};
                lo[k] = a;
                hi[k] = c;
                g[k] = -6 + 12 * u01(gen);
            }
            const double v = quality::violation(b, g);
            const double w = oracle::violation(lo, hi, g);
            if (std::abs(v - w) > 1e-12 * (1.0 + std::abs(w))) ++bad;
        }
        o.require(bad == 0, fmt("violation vs clamp-sum oracle: %.0f mismatches in 10000", double(bad)));
    }
    {
        std::size_t bad = 0;
        for (int i = 0; i < 10000; ++i) {
            const double c_er = std::pow(10.0, -8 + 10 * u01(gen));
            const double c_ere = std::pow(10.0, -8 + 10 * u01(gen));
            const auto k = static_cast<std::int64_t>(1 + gen() % 2000);
            const double r = quality::ratio_reaching_step(c_er, c_ere, k);
            const double lo = std::min(c_er, c_ere) * (1 - 1e-12);
            const double hi = std::max(c_er, c_ere) * (1 + 1e-12);
            const bool exact_end = k != 1 || std::abs(r - c_ere) <= 1e-12 * c_ere;
            if (!(r >= lo && r <= hi) || !exact_end) ++bad;
        }
        o.require(bad == 0, fmt("ratio-reaching step between c_er and c_ere: %.0f violations in 10000", double(bad)));
    }
    {
        std::size_t bad = 0, premises = 0;
        auto q = [&] { return QualityPair{gen() % 2 ? 0.0 : std::floor(3 * u01(gen)), std::floor(4 * u01(gen))}; };
        for (int i = 0; i < 10000; ++i) {
            const auto a = q(), b = q(), c = q();
            if (quality::qc_natural(a, b) && quality::qc_natural(b, c)) {
                ++premises;
                if (!quality::qc_natural(a, c)) ++bad;
            }
        }
        o.require(bad == 0 && premises > 1000,
                  fmt("qc_natural transitivity: %.0f violations over %.0f chains", double(bad), double(premises)));
    }
    {
        std::size_t bad = 0, graphs = 0;
        for (std::size_t n = 1; n <= 4; ++n) {
            std::vector<std::pair<std::size_t, std::size_t>> all;
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t c = 0; c < n; ++c) all.emplace_back(p, c);
            for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
                std::vector<std::pair<std::size_t, std::size_t>> edges;
                for (std::size_t k = 0; k < all.size(); ++k)
                    if (mask & (1u << k)) edges.push_back(all[k]);
                if (memory::check_forest(n, edges).empty() != oracle::is_forest(n, edges)) ++bad;
                ++graphs;
            }
        }
        o.require(bad == 0, fmt("forest validator vs brute force: %.0f disagreements over %.0f digraphs", double(bad),
                                double(graphs)));
    }
    {
        problem::ConstrainedProblem box;
        const auto cmp = quality::Comparator::natural();
        std::size_t bad_de = 0, bad_ps = 0, bad_sc = 0;
        for (int i = 0; i < 1000; ++i) {
            const std::size_t dim = 1 + gen() % 6;
            std::vector<double> lo(dim), hi(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                lo[d] = -10 * u01(gen);
                hi[d] = lo[d] + 0.5 + 10 * u01(gen);
            }
            box.space = problem::BoundedSpace(lo, hi);
            box.objective = [](std::span<const double> x) { return x[0]; };
            box.constraints = [](std::span<const double>, std::span<double>) {};
            auto rand_state = [&] {
                State st;
                for (std::size_t d = 0; d < dim; ++d) st.x.push_back(lo[d] + u01(gen) * (hi[d] - lo[d]));
                st.quality = {gen() % 2 ? 0.0 : std::floor(3 * u01(gen)), std::floor(5 * u01(gen))};
                return st;
            };
            std::vector<State> pool(1 + gen() % 10);
            for (auto& p : pool) p = rand_state();
            const State a = rand_state(), b = rand_state(), c = rand_state();
            std::vector<double> seq(64);
            for (auto& v : seq) v = u01(gen);
            problem::NfeCounter nfe;

            const toolbox::DeParams dp{u01(gen), u01(gen), u01(gen) < 0.5 ? 1.0 : u01(gen)};
            ScriptedRandom r1(seq);
            oracle::Draws d1{seq};
            const auto de = toolbox::ge_de(box, a, pool, dp, cmp, r1, nfe);
            if (de.x != oracle::de(lo, hi, a, pool, dp.c_f, dp.c_cr, dp.c_cg, d1) || r1.consumed() != d1.pos) ++bad_de;

            ScriptedRandom r2(seq);
            oracle::Draws d2{seq};
            const auto ps = toolbox::ge_ps(box, a, b, c, pool, {2.05, 2.05, false}, cmp, r2, nfe);
            if (ps.x != oracle::ps(lo, hi, a, b, c, pool, 2.05, 2.05, d2) || r2.consumed() != d2.pos) ++bad_ps;

            const int ntb = 1 + static_cast<int>(gen() % 3);
            ScriptedRandom r3(seq);
            oracle::Draws d3{seq};
            const auto sc = toolbox::ge_sc(box, a, pool, ntb, cmp, r3, nfe);
            if (sc.x != oracle::sc(lo, hi, a, pool, ntb, d3) || r3.consumed() != d3.pos) ++bad_sc;
        }
        o.require(bad_de + bad_ps + bad_sc == 0,
                  fmt("injected draws vs straight-line oracles: DE %.0f, PS %.0f, SC %.0f mismatches in 1000 each",
                      double(bad_de), double(bad_ps), double(bad_sc)));
    }
    {
        engine::EngineConfig cfg;
        cfg.case_id = "#DESC-I";
        cfg.seed = 42;
        cfg.record_trace = true;
        const auto p = problem::catalog_get("G13");
        const auto r1 = engine::run(cfg, s, p);
        const auto r2 = engine::run(cfg, s, p);
        o.require(r1 == r2, fmt("seed 42 run repeated: identical results, best %.17g", r1.best.quality.v_obj));
    }
    {
        const double ck = toolbox::constriction(2.05, 2.05);
        o.require(std::abs(ck - 0.72984) <= 1e-5, fmt("c_K(2.05, 2.05) = %.10f", ck));
    }
    report(5, "property suite", o);
}

void criterion_script() {
    Outcome o;
    const auto s = fixture::reference();
    const auto diags = script::validate(s);
    o.require(diags.empty(), fmt("reference script validates with %.0f diagnostics", double(diags.size())));

    std::size_t mismatched = 0;
    for (const auto& [id, rows] : fixture::expected_cases()) {
        const auto rc = script::resolve_case(s, id);
        double total = 0;
        for (const auto& r : rows) total += r.weight;
        std::size_t j = 0;
        bool ok = true;
        for (const auto& r : rows) {
            if (r.weight == 0) continue;
            ok = ok && j < rc.rows.size() && rc.rows[j].generator->id == r.generator &&
                 rc.rows[j].weight == r.weight && rc.rows[j].updates == r.updates &&
                 std::abs(rc.rows[j].probability - r.weight / total) < 1e-15;
            ++j;
        }
        ok = ok && j == rc.rows.size();
        const auto* c = s.find_case(id);
        ok = ok && c && c->rows.size() == rows.size();
        for (std::size_t k = 0; ok && k < rows.size(); ++k) {
            ok = c->rows[k].generator == rows[k].generator && c->rows[k].weight == rows[k].weight &&
                 c->rows[k].updates == rows[k].updates;
        }
        if (!ok) ++mismatched;
        o.require(ok, "case " + id + " rows, weights and updating lists");
    }

    auto mutated = [&](const char* rule, auto&& mutate) {
        auto m = fixture::reference();
        mutate(m);
        const auto d = script::validate(m);
        std::string first = d.empty() ? "none" : memory::format(d.front());
        o.require(fixture::has_rule(d, rule), std::string("mutation reports ") + rule + " (first: " + first + ")");
    };
    mutated("duplicate-chunk", [](script::Script& m) { m.protocol.rows.push_back(m.protocol.rows[1]); });
    mutated("cycle", [](script::Script& m) { fixture::row(m, "x_R").source = "x_O"; });
    mutated("update-list-coverage",
            [](script::Script& m) { fixture::case_of(m, "#PS").rows[0].updates = {"x_O", "x_P"}; });
    mutated("shared-chunk-not-leaf", [](script::Script& m) { fixture::row(m, "x_O").source = "$x_GR"; });
    report(6, "script conformance", o);
}

template <class F>
void timed(F&& f) {
    started = std::chrono::steady_clock::now();
    f();
}

}  // namespace

int main() {
    const auto s = fixture::reference();
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    timed([&] { criterion_properties(s); });
    timed([&] { criterion_script(); });
    timed([&] { criterion_pure(s); });
    timed([&] { criterion_hybrid(s); });
    timed([&] { criterion_tight(s); });
    timed([&] { criterion_landscape(s); });
    const double total = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("%d criteria failed, %.0fs total\n", failures, total);
    return failures == 0 ? 0 : 1;
}
