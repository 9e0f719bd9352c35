#include "cgo/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "cgo/catalog.hpp"

namespace cgo::harness {

namespace {

std::string num(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace

std::vector<RunRecord> run_batch(const script::Script& script, const problem::ConstrainedProblem& problem,
                                 const engine::EngineConfig& base, std::size_t runs, std::uint64_t base_seed,
                                 unsigned threads) {
    if (runs == 0) throw std::invalid_argument("run_batch: runs must be at least 1");
    std::vector<RunRecord> out(runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs; i = next++) {
            RunRecord& rec = out[i];
            rec.seed = base_seed + i;
            engine::EngineConfig cfg = base;
            cfg.seed = rec.seed;
            try {
                rec.result = engine::run(cfg, script, problem);
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
        }
    };
    unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, runs));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return out;
}

std::vector<double> feasible_objectives(std::span<const RunRecord> records) {
    std::vector<double> v;
    for (const auto& r : records) {
        if (!r.error && r.result.entered_feasible) v.push_back(r.result.best.quality.v_obj);
    }
    return v;
}

AggregateStats aggregate(std::span<const RunRecord> records) {
    AggregateStats s;
    s.runs = records.size();
    double nfe = 0.0;
    std::size_t ok = 0;
    for (const auto& r : records) {
        if (r.error) {
            ++s.errors;
            continue;
        }
        nfe += static_cast<double>(r.result.nfe);
        ++ok;
    }
    s.nfe_mean = ok ? nfe / static_cast<double>(ok) : 0.0;
    auto v = feasible_objectives(records);
    s.feasible = v.size();
    s.failed = s.runs - s.feasible;
    if (v.empty()) return s;
    const SampleSummary sum = summarize(v);
    s.mean = sum.mean;
    s.stdev = sum.stdev;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    s.best = v.front();
    s.worst = v.back();
    return s;
}

double solved_threshold(std::string_view instance_id) {
    return (instance_id == "G08" || instance_id == "G13") ? 1e-6 : 1e-5;
}

bool mark_solved(const AggregateStats& stats, std::string_view instance_id, std::optional<double> known_optimum) {
    if (!stats.mean || !known_optimum) return false;
    return std::abs(*stats.mean - *known_optimum) < solved_threshold(instance_id);
}

SampleSummary summarize(std::span<const double> sample) {
    SampleSummary s;
    s.n = sample.size();
    if (s.n == 0) return s;
    s.mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : sample) ss += (x - s.mean) * (x - s.mean);
        s.stdev = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

WelchResult welch_t(const SampleSummary& a, const SampleSummary& b, double alpha) {
    if (a.n < 2 || b.n < 2) throw std::invalid_argument("welch_t: each sample needs at least two values");
    const double va = a.stdev * a.stdev / static_cast<double>(a.n);
    const double vb = b.stdev * b.stdev / static_cast<double>(b.n);
    const double se2 = va + vb;
    WelchResult r;
    if (se2 == 0.0) {
        r.df = static_cast<double>(a.n + b.n - 2);
        if (a.mean == b.mean) {
            r.t = 0.0;
            r.p_value = 1.0;
        } else {
            r.t = a.mean < b.mean ? -INFINITY : INFINITY;
            r.p_value = 0.0;
        }
        r.significant = r.p_value < alpha;
        return r;
    }
    r.t = (a.mean - b.mean) / std::sqrt(se2);
    r.df = se2 * se2 /
           (va * va / static_cast<double>(a.n - 1) + vb * vb / static_cast<double>(b.n - 1));
    boost::math::students_t dist(r.df);
    r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    r.significant = r.p_value < alpha;
    return r;
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b, double alpha) {
    return welch_t(summarize(a), summarize(b), alpha);
}

std::vector<std::pair<std::int64_t, double>> RldSeries::points() const {
    std::vector<std::pair<std::int64_t, double>> out;
    if (runs == 0) return out;
    for (std::size_t i = 0; i < solved_cycles.size(); ++i) {
        const double frac = static_cast<double>(i + 1) / static_cast<double>(runs);
        if (!out.empty() && out.back().first == solved_cycles[i]) {
            out.back().second = frac;
        } else {
            out.emplace_back(solved_cycles[i], frac);
        }
    }
    return out;
}

double RldSeries::terminal_fraction() const {
    return runs ? static_cast<double>(solved_cycles.size()) / static_cast<double>(runs) : 0.0;
}

RldSeries make_rld(std::span<const RunRecord> records) {
    RldSeries s;
    s.runs = records.size();
    for (const auto& r : records) {
        if (!r.error && r.result.first_solved_cycle) s.solved_cycles.push_back(*r.result.first_solved_cycle);
    }
    std::sort(s.solved_cycles.begin(), s.solved_cycles.end());
    return s;
}

void write_rld(std::ostream& out, const RldSeries& series) {
    out << "cycle,solved_fraction\n";
    for (const auto& [c, f] : series.points()) out << c << "," << num(f) << "\n";
}

void emit_rld(const RldSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_rld(out, series);
}

std::vector<InstanceReport> run_experiment(const ExperimentPlan& plan) {
    if (plan.runs == 0) throw std::invalid_argument("run_experiment: runs must be at least 1");
    std::vector<InstanceReport> out;
    const double eps = plan.eps_h.value_or(plan.script.eps_h.value_or(problem::kDefaultEpsH));
    engine::EngineConfig base;
    base.case_id = plan.case_id;
    base.agents = plan.agents;
    base.cycles = plan.cycles;
    base.record_trace = plan.record_trace;
    for (const auto& id : plan.problems) {
        const auto problem = problem::catalog_get(id, eps);
        InstanceReport rep;
        rep.instance = id;
        rep.case_id = plan.case_id;
        rep.records = run_batch(plan.script, problem, base, plan.runs, plan.base_seed, plan.threads);
        rep.stats = aggregate(rep.records);
        rep.stats.solved = mark_solved(rep.stats, id, problem.known_optimum);
        rep.rld = make_rld(rep.records);
        out.push_back(std::move(rep));
    }
    return out;
}

const char* stats_csv_header() {
    return "instance,case,runs,feasible,failed,mean,stdev,median,best,worst,solved,nfe_mean";
}

std::string stats_csv_row(const InstanceReport& r) {
    const auto& s = r.stats;
    return r.instance + "," + r.case_id + "," + std::to_string(s.runs) + "," + std::to_string(s.feasible) + "," +
           std::to_string(s.failed) + "," + opt_num(s.mean) + "," + opt_num(s.stdev) + "," + opt_num(s.median) +
           "," + opt_num(s.best) + "," + opt_num(s.worst) + "," + (s.solved ? "1" : "0") + "," + num(s.nfe_mean);
}

void write_stats_csv(std::ostream& out, std::span<const InstanceReport> reports) {
    out << stats_csv_header() << "\n";
    for (const auto& r : reports) out << stats_csv_row(r) << "\n";
}

void write_trace(std::ostream& out, const engine::RunResult& result) {
    out << "cycle,best_v_obj,best_v_con,c_er\n";
    for (const auto& p : result.trace) {
        out << p.cycle << "," << num(p.best_v_obj) << "," << num(p.best_v_con) << "," << num(p.c_er) << "\n";
    }
}

}  // namespace cgo::harness
