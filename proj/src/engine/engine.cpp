#include "cgo/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace cgo::engine {

namespace {

std::int64_t checked_positive(std::int64_t v, const char* what) {
    if (v < 1) throw std::invalid_argument(std::string("engine: ") + what + " must be at least 1");
    return v;
}

script::Script with_overrides(const script::Script& s, const EngineConfig& c) {
    script::Script out = s;
    if (c.agents) out.agents = *c.agents;
    if (c.cycles) out.cycles = *c.cycles;
    return out;
}

}  // namespace

std::size_t meta_manage(const script::RunnableCase& runnable, RandomSource& rng) {
    if (runnable.rows.empty()) throw std::invalid_argument("meta_manage: case has no active rows");
    const double u = rng.uniform();
    for (std::size_t i = 0; i < runnable.rows.size(); ++i) {
        if (u < runnable.rows[i].cumulative) return i;
    }
    return runnable.rows.size() - 1;
}

Engine::Engine(const script::Script& script, const problem::ConstrainedProblem& problem,
               const EngineConfig& config, RandomSource& rng)
    : problem_(&problem),
      rng_(&rng),
      agents_(checked_positive(config.agents.value_or(script.agents), "N")),
      cycles_(checked_positive(config.cycles.value_or(script.cycles), "T")),
      record_trace_(config.record_trace),
      case_(script::resolve_case(script, config.case_id)),
      memory_(script.protocol, problem, static_cast<std::size_t>(agents_)),
      facilitator_(script.facilitator.config, problem, cycles_, rng) {
    script::require_valid(with_overrides(script, config));
    for (const auto& r : case_.rows) {
        const auto& g = *r.generator;
        CompiledRow c;
        c.kind = g.rule.kind;
        for (const auto& n : g.inputs) c.inputs.push_back(memory_.chunk(n));
        c.output = memory_.chunk(g.output);
        for (const auto& n : r.updates) c.updates.push_back(memory_.chunk(n));
        switch (c.kind) {
            case toolbox::RuleKind::ge_de:
                c.de = {g.rule.param("C_F"), g.rule.param("C_CR"), g.rule.param("C_CG")};
                break;
            case toolbox::RuleKind::ge_ps:
                c.ps = {g.rule.param("C_A"), g.rule.param("C_B"), g.rule.param("C_TOROIDAL") != 0.0};
                break;
            case toolbox::RuleKind::ge_sc:
                c.c_ntb = static_cast<int>(g.rule.param("C_NTB"));
                break;
            default:
                break;
        }
        rows_.push_back(std::move(c));
    }
    generations_.assign(rows_.size(), 0);
    if (facilitator_.has_adjuster()) feedback_ = memory_.chunk(script.facilitator.feedback);
}

void Engine::initialize() {
    memory_.initialize(*rng_, nfe_);
    initialized_ = true;
}

State Engine::generate(const CompiledRow& row, std::size_t agent) {
    const auto& cmp = facilitator_.internal();
    auto state = [&](std::size_t k) -> const State& { return memory_.agent_state(agent, row.inputs[k]); };
    auto set = [&](std::size_t k) { return memory_.set_view(row.inputs[k]); };
    switch (row.kind) {
        case toolbox::RuleKind::ge_random:
            return toolbox::ge_random(*problem_, *rng_, nfe_);
        case toolbox::RuleKind::ge_de:
            return toolbox::ge_de(*problem_, state(0), set(1), row.de, cmp, *rng_, nfe_);
        case toolbox::RuleKind::ge_ps:
            return toolbox::ge_ps(*problem_, state(0), state(1), state(2), set(3), row.ps, cmp, *rng_, nfe_);
        case toolbox::RuleKind::ge_sc:
            return toolbox::ge_sc(*problem_, state(0), set(1), row.c_ntb, cmp, *rng_, nfe_);
        default:
            throw std::logic_error("engine: not a generating rule");
    }
}

void Engine::step_cycle(std::int64_t t) {
    if (!initialized_) throw std::logic_error("engine: step_cycle before initialize");
    if (feedback_) {
        facilitator_.adjust(t, memory_.set_view(*feedback_));
        ++adjuster_calls_;
    }
    for (std::size_t a = 0; a < static_cast<std::size_t>(agents_); ++a) {
        const std::size_t r = meta_manage(case_, *rng_);
        const CompiledRow& row = rows_[r];
        State x = generate(row, a);
        ++generations_[r];
        facilitator_.keep_best(x);
        memory_.put_generated(row.output, std::move(x));
        memory_.submit(a, row.updates);
        memory_.clear_generated();
    }
    memory_.flush(facilitator_.internal(), *rng_);

    const auto& best = facilitator_.best();
    if (!first_solved_ && best && best->quality.feasible() && problem_->known_optimum &&
        std::abs(best->quality.v_obj - *problem_->known_optimum) < problem_->solved_tolerance) {
        first_solved_ = t;
    }
    if (record_trace_ && best) {
        trace_.push_back({t, best->quality.v_obj, best->quality.v_con, facilitator_.relaxation()});
    }
}

RunResult Engine::run() {
    initialize();
    for (std::int64_t t = 1; t <= cycles_; ++t) step_cycle(t);
    return result();
}

RunResult Engine::result() const {
    RunResult r;
    if (facilitator_.best()) {
        r.best = *facilitator_.best();
        r.entered_feasible = r.best.quality.feasible();
    }
    r.nfe = nfe_.count;
    r.first_solved_cycle = first_solved_;
    r.trace = trace_;
    r.generations = generations_;
    r.adjuster_calls = adjuster_calls_;
    return r;
}

RunResult run(const EngineConfig& config, const script::Script& script, const problem::ConstrainedProblem& problem) {
    RngStream rng(config.seed);
    Engine engine(script, problem, config, rng);
    return engine.run();
}

}  // namespace cgo::engine
