#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cgo/problem.hpp"
#include "cgo/quality.hpp"
#include "cgo/rng.hpp"
#include "cgo/state.hpp"

namespace cgo::toolbox {

using quality::Comparator;

enum class RuleKind {
    sel_greedy,
    sel_tournament,
    ie_random,
    ue_direct,
    ue_greedy,
    ue_tournament,
    ge_random,
    ge_de,
    ge_ps,
    ge_sc,
};

enum class RuleFamily { selecting, initializing, updating, generating };

/// Script spelling, e.g. "GE.DE".
std::string kind_name(RuleKind kind);
std::optional<RuleKind> kind_from_name(const std::string& name);
RuleFamily family(RuleKind kind);

enum class ParamType { real, integer, boolean };

struct ParamSpec {
    std::string key;
    ParamType type;
    std::optional<double> default_value;
};

/// Accepted setting parameters of a rule kind in canonical order.
const std::vector<ParamSpec>& param_schema(RuleKind kind);

/// A rule kind together with its setting parameters in schema order.
struct RuleInstance {
    RuleKind kind = RuleKind::ge_random;
    std::vector<std::pair<std::string, double>> params;

    double param(const std::string& key) const;

    friend bool operator==(const RuleInstance&, const RuleInstance&) = default;
};

/// Validates keys, types and ranges, fills defaults and orders the
/// parameters per schema. Throws std::invalid_argument.
RuleInstance make_rule(RuleKind kind, const std::vector<std::pair<std::string, double>>& params);

// ---- selection ----

std::size_t sel_greedy_index(std::span<const State> set, const Comparator& cmp);
const State& sel_greedy(std::span<const State> set, const Comparator& cmp);

std::size_t sel_tournament_index(std::span<const State> set, int c_nts, bool c_bq, const Comparator& cmp,
                                 RandomSource& rng);
const State& sel_tournament(std::span<const State> set, int c_nts, bool c_bq, const Comparator& cmp,
                            RandomSource& rng);

// ---- initialization ----

std::vector<double> random_point(const problem::BoundedSpace& space, RandomSource& rng);

StateSet ie_random(const problem::ConstrainedProblem& problem, std::size_t cardinality, RandomSource& rng,
                   problem::NfeCounter& nfe);

// ---- updating ----

void ue_direct(State& cell, const State& candidate);
bool ue_greedy(State& cell, const State& candidate, const Comparator& cmp);
void ue_tournament_replace(StateSet& cell, std::span<const State> candidates, int c_ntw, const Comparator& cmp,
                           RandomSource& rng);

// ---- generation ----

State ge_random(const problem::ConstrainedProblem& problem, RandomSource& rng, problem::NfeCounter& nfe);

struct DeParams {
    double c_f = 0.5;
    double c_cr = 0.9;
    double c_cg = 1.0;
};

std::vector<double> de_point(const problem::BoundedSpace& space, const State& x_p, std::span<const State> pool,
                             const DeParams& p, const Comparator& cmp, RandomSource& rng);
State ge_de(const problem::ConstrainedProblem& problem, const State& x_p, std::span<const State> pool,
            const DeParams& p, const Comparator& cmp, RandomSource& rng, problem::NfeCounter& nfe);

struct PsParams {
    double c_a = 2.05;
    double c_b = 2.05;
    /// Use the signed toroidal difference instead of the literal branches.
    bool standard_dis = false;
};

double constriction(double c_a, double c_b);
double dis(double a, double b, double range, bool standard = false);
/// Wraps an out-of-box coordinate back by modulo the range, then clamps.
double repair_periodic(double x, double lo, double hi);

std::vector<double> ps_point(const problem::BoundedSpace& space, const State& x_o, const State& x_r,
                             const State& x_p, std::span<const State> pool, const PsParams& p,
                             const Comparator& cmp, RandomSource& rng);
State ge_ps(const problem::ConstrainedProblem& problem, const State& x_o, const State& x_r, const State& x_p,
            std::span<const State> pool, const PsParams& p, const Comparator& cmp, RandomSource& rng,
            problem::NfeCounter& nfe);

std::vector<double> sc_point(const problem::BoundedSpace& space, const State& x_r, std::span<const State> pool,
                             int c_ntb, const Comparator& cmp, RandomSource& rng);
State ge_sc(const problem::ConstrainedProblem& problem, const State& x_r, std::span<const State> pool, int c_ntb,
            const Comparator& cmp, RandomSource& rng, problem::NfeCounter& nfe);

}  // namespace cgo::toolbox
