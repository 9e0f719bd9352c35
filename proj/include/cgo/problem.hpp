#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgo::problem {

/// Box S_P = prod_d [lower[d], upper[d]].
class BoundedSpace {
public:
    BoundedSpace() = default;
    BoundedSpace(std::vector<double> lower, std::vector<double> upper);

    std::size_t dimension() const { return lower_.size(); }
    double lower(std::size_t d) const { return lower_[d]; }
    double upper(std::size_t d) const { return upper_[d]; }
    double range(std::size_t d) const { return upper_[d] - lower_[d]; }
    std::span<const double> lower() const { return lower_; }
    std::span<const double> upper() const { return upper_; }

    bool contains(std::span<const double> x) const;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Admissible interval [lower, upper] of one constraint function.
struct ConstraintBounds {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = 0.0;

    double width() const { return upper - lower; }
    bool is_equality() const { return lower == upper; }

    static ConstraintBounds at_most(double c) { return {-std::numeric_limits<double>::infinity(), c}; }
    static ConstraintBounds equal_to(double c) { return {c, c}; }
};

using ObjectiveFn = std::function<double(std::span<const double>)>;
/// Writes all J constraint values g_j(x) into the output span.
using ConstraintFn = std::function<void(std::span<const double>, std::span<double>)>;

/// minimize f(x) subject to g_j(x) in [lower_j, upper_j], x in the box.
struct ConstrainedProblem {
    std::string id;
    BoundedSpace space;
    ObjectiveFn objective;
    ConstraintFn constraints;
    std::vector<ConstraintBounds> bounds;
    /// Tolerance the equality constraints were widened with; 0 when the
    /// problem has not been relaxed.
    double eps_h = 0.0;
    std::optional<double> known_optimum;
    /// |mean - known_optimum| below this counts as solved.
    double solved_tolerance = 1e-5;

    std::size_t dimension() const { return space.dimension(); }
    std::size_t constraint_count() const { return bounds.size(); }
};

/// Counts objective+constraint evaluations of one run.
struct NfeCounter {
    std::uint64_t count = 0;
};

struct Evaluation {
    double objective = 0.0;
    std::vector<double> constraint_values;
};

/// Raw f(x) and every g_j(x). Throws std::invalid_argument on a dimension
/// mismatch.
Evaluation evaluate(const ConstrainedProblem& problem, std::span<const double> x, NfeCounter& nfe);

/// Writes constraint values into `out` (size J) and returns f(x). Allocation
/// free variant of evaluate() used on the hot path.
double evaluate_into(const ConstrainedProblem& problem, std::span<const double> x,
                     std::span<double> out, NfeCounter& nfe);

/// Widens each equality constraint to [c - eps_h, c + eps_h].
ConstrainedProblem relax_equalities(ConstrainedProblem problem, double eps_h);

/// min_j (upper_j - lower_j); +infinity when there are no constraints.
double min_constraint_width(const ConstrainedProblem& problem);

}  // namespace cgo::problem
