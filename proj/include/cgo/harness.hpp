#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cgo/engine.hpp"
#include "cgo/problem.hpp"
#include "cgo/script.hpp"

namespace cgo::harness {

struct RunRecord {
    std::uint64_t seed = 0;
    engine::RunResult result;
    /// Set when the run aborted; result is then meaningless.
    std::optional<std::string> error;
};

/// Runs `runs` seeds base_seed, base_seed+1, ... and returns them in seed
/// order regardless of how they were scheduled.
std::vector<RunRecord> run_batch(const script::Script& script, const problem::ConstrainedProblem& problem,
                                 const engine::EngineConfig& base, std::size_t runs, std::uint64_t base_seed,
                                 unsigned threads = 0);

struct AggregateStats {
    std::size_t runs = 0;
    std::size_t feasible = 0;
    /// runs - feasible; includes aborted runs.
    std::size_t failed = 0;
    std::size_t errors = 0;
    std::optional<double> mean;
    std::optional<double> stdev;
    std::optional<double> median;
    std::optional<double> best;
    std::optional<double> worst;
    bool solved = false;
    double nfe_mean = 0.0;
};

/// Statistics of the final objective over runs that entered the feasible
/// region; `solved` is left false (see mark_solved).
AggregateStats aggregate(std::span<const RunRecord> records);

/// Solved threshold of an instance: 1e-6 for G08 and G13, 1e-5 otherwise.
double solved_threshold(std::string_view instance_id);

bool mark_solved(const AggregateStats& stats, std::string_view instance_id, std::optional<double> known_optimum);

struct SampleSummary {
    double mean = 0.0;
    double stdev = 0.0;
    std::size_t n = 0;
};

SampleSummary summarize(std::span<const double> sample);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    bool significant = false;
};

/// Two-sided Welch test at level alpha. Throws when either n < 2.
WelchResult welch_t(const SampleSummary& a, const SampleSummary& b, double alpha = 0.05);
WelchResult welch_t(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

/// Final objective values of the feasible runs.
std::vector<double> feasible_objectives(std::span<const RunRecord> records);

struct RldSeries {
    std::size_t runs = 0;
    /// Sorted first-solved cycles of the runs that were solved.
    std::vector<std::int64_t> solved_cycles;

    /// (cycle, cumulative solved fraction) at each distinct solved cycle.
    std::vector<std::pair<std::int64_t, double>> points() const;
    double terminal_fraction() const;
};

RldSeries make_rld(std::span<const RunRecord> records);
void write_rld(std::ostream& out, const RldSeries& series);
void emit_rld(const RldSeries& series, const std::string& path);

struct InstanceReport {
    std::string instance;
    std::string case_id;
    AggregateStats stats;
    RldSeries rld;
    std::vector<RunRecord> records;
};

struct ExperimentPlan {
    script::Script script;
    std::string case_id;
    std::vector<std::string> problems;
    std::size_t runs = 50;
    std::uint64_t base_seed = 1;
    std::optional<std::int64_t> agents;
    std::optional<std::int64_t> cycles;
    std::optional<double> eps_h;
    bool record_trace = false;
    unsigned threads = 0;
};

/// Runs and aggregates every problem of the plan in order.
std::vector<InstanceReport> run_experiment(const ExperimentPlan& plan);

const char* stats_csv_header();
std::string stats_csv_row(const InstanceReport& report);
void write_stats_csv(std::ostream& out, std::span<const InstanceReport> reports);

void write_trace(std::ostream& out, const engine::RunResult& result);

}  // namespace cgo::harness
