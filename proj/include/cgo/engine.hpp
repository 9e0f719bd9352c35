#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgo/memory.hpp"
#include "cgo/problem.hpp"
#include "cgo/quality.hpp"
#include "cgo/rng.hpp"
#include "cgo/script.hpp"
#include "cgo/state.hpp"

namespace cgo::engine {

struct EngineConfig {
    std::string case_id;
    /// Override the script's N and T when set.
    std::optional<std::int64_t> agents;
    std::optional<std::int64_t> cycles;
    std::uint64_t seed = 0;
    bool record_trace = false;
};

struct TracePoint {
    std::int64_t cycle = 0;
    double best_v_obj = 0.0;
    double best_v_con = 0.0;
    double c_er = 0.0;

    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct RunResult {
    State best;
    std::uint64_t nfe = 0;
    bool entered_feasible = false;
    std::optional<std::int64_t> first_solved_cycle;
    std::vector<TracePoint> trace;
    /// Executions of each active row of the case, in case order.
    std::vector<std::uint64_t> generations;
    std::uint64_t adjuster_calls = 0;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// B_MM: index of the active row picked by weight.
std::size_t meta_manage(const script::RunnableCase& runnable, RandomSource& rng);

class Engine {
public:
    Engine(const script::Script& script, const problem::ConstrainedProblem& problem, const EngineConfig& config,
           RandomSource& rng);

    std::int64_t agents() const { return agents_; }
    std::int64_t cycles() const { return cycles_; }

    /// B_INI and B_CO.
    void initialize();
    /// One full learning cycle t (1-based).
    void step_cycle(std::int64_t t);
    /// initialize() followed by all cycles.
    RunResult run();

    RunResult result() const;

    const memory::MemorySystem& memory() const { return memory_; }
    const quality::Facilitator& facilitator() const { return facilitator_; }
    const script::RunnableCase& runnable() const { return case_; }
    const problem::NfeCounter& nfe() const { return nfe_; }

private:
    struct CompiledRow {
        toolbox::RuleKind kind;
        std::vector<std::size_t> inputs;
        std::size_t output;
        std::vector<std::size_t> updates;
        toolbox::DeParams de;
        toolbox::PsParams ps;
        int c_ntb = 1;
    };

    State generate(const CompiledRow& row, std::size_t agent);

    const problem::ConstrainedProblem* problem_;
    RandomSource* rng_;
    std::int64_t agents_;
    std::int64_t cycles_;
    bool record_trace_;
    script::RunnableCase case_;
    std::vector<CompiledRow> rows_;
    memory::MemorySystem memory_;
    quality::Facilitator facilitator_;
    std::optional<std::size_t> feedback_;
    problem::NfeCounter nfe_;
    std::optional<std::int64_t> first_solved_;
    std::vector<TracePoint> trace_;
    std::vector<std::uint64_t> generations_;
    std::uint64_t adjuster_calls_ = 0;
    bool initialized_ = false;
};

/// Runs one seeded run with its own RngStream.
RunResult run(const EngineConfig& config, const script::Script& script, const problem::ConstrainedProblem& problem);

}  // namespace cgo::engine
