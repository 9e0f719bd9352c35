#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgo/problem.hpp"
#include "cgo/rng.hpp"
#include "cgo/state.hpp"

namespace cgo::quality {

/// Summed violation of `values` against the constraint intervals.
double violation(std::span<const problem::ConstraintBounds> bounds, std::span<const double> values);

QualityPair encode(const problem::ConstrainedProblem& problem, std::span<const double> x,
                   problem::NfeCounter& nfe);

/// Builds a State for x with its quality cached.
State make_state(const problem::ConstrainedProblem& problem, std::vector<double> x,
                 problem::NfeCounter& nfe);

bool qc_natural(const QualityPair& a, const QualityPair& b);
bool qc_penalized(const QualityPair& a, const QualityPair& b, double c_ap);
bool qc_stochastic(const QualityPair& a, const QualityPair& b, double c_pf, RandomSource& rng);
bool qc_static_relaxing(const QualityPair& a, const QualityPair& b, double c_er);

/// Binary "a is at least as good as b" predicate used by every rule.
class Comparator {
public:
    enum class Kind { natural, penalized, stochastic, relaxing };

    Comparator() = default;

    static Comparator natural() { return Comparator(Kind::natural, 0.0, nullptr); }
    static Comparator penalized(double c_ap);
    static Comparator stochastic(double c_pf, RandomSource& rng);
    static Comparator relaxing(double c_er);

    bool operator()(const QualityPair& a, const QualityPair& b) const;
    bool operator()(const State& a, const State& b) const { return (*this)(a.quality, b.quality); }

    Kind kind() const { return kind_; }
    double parameter() const { return param_; }

    /// Only meaningful for the relaxing kind.
    void set_relaxation(double c_er) { param_ = c_er; }

private:
    Comparator(Kind kind, double param, RandomSource* rng) : kind_(kind), param_(param), rng_(rng) {}

    Kind kind_ = Kind::natural;
    double param_ = 0.0;
    RandomSource* rng_ = nullptr;
};

enum class ComparatorRule { O, P, S, RS, O3R };

std::string rule_name(ComparatorRule rule);
ComparatorRule rule_from_name(const std::string& name);

struct FacilitatorConfig {
    ComparatorRule rule = ComparatorRule::O3R;
    double c_ap = 0.0;
    double c_pf = 0.45;
    double c_er = 0.0;
    double c_rre = 10.0;
    double c_rnu = 0.5;
    double c_rtu = 0.5;

    friend bool operator==(const FacilitatorConfig&, const FacilitatorConfig&) = default;
};

struct AdjusterState {
    double c_er = 0.0;
    double c_rre = 10.0;
    double c_rnu = 0.5;
    double c_rtu = 0.5;
    std::int64_t t_th = 0;
    double c_ere = 0.0;
};

AdjusterState make_adjuster(double c_rre, double c_rnu, double c_rtu, std::int64_t total_cycles,
                            double min_width);

/// One geometric step: c_er * (c_ere / c_er)^(1/k). c_er = 0 stays 0.
double ratio_reaching_step(double c_er, double c_ere, std::int64_t k);

/// Updates adjuster.c_er for cycle t given the feedback states.
void adjust_ratio_reaching(AdjusterState& adjuster, std::int64_t t, std::span<const State> feedback);

/// True when the relaxed constraint widths call for the relaxing comparator.
bool o3r_selects_relaxing(const problem::ConstrainedProblem& problem);

/// Owns the natural and the internal comparators, the optional adjuster and
/// the best-so-far state.
class Facilitator {
public:
    Facilitator(const FacilitatorConfig& config, const problem::ConstrainedProblem& problem,
                std::int64_t total_cycles, RandomSource& rng);

    const Comparator& natural() const { return natural_; }
    const Comparator& internal() const { return internal_; }

    bool has_adjuster() const { return adjuster_.has_value(); }
    const std::optional<AdjusterState>& adjuster() const { return adjuster_; }

    /// Runs the adjuster for cycle t when one is configured; returns whether
    /// it was consulted.
    bool adjust(std::int64_t t, std::span<const State> feedback);

    /// Current relaxation level of the internal comparator (0 for kinds
    /// without one).
    double relaxation() const;

    /// Strict-improvement update under the natural comparator.
    bool keep_best(const State& candidate);

    const std::optional<State>& best() const { return best_; }

private:
    Comparator natural_;
    Comparator internal_;
    std::optional<AdjusterState> adjuster_;
    std::optional<State> best_;
};

}  // namespace cgo::quality
