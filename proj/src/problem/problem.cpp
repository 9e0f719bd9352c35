#include "cgo/problem.hpp"

#include <algorithm>
#include <string>

namespace cgo::problem {

BoundedSpace::BoundedSpace(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty()) {
        throw std::invalid_argument("BoundedSpace: dimension must be at least 1");
    }
    if (lower_.size() != upper_.size()) {
        throw std::invalid_argument("BoundedSpace: lower/upper size mismatch");
    }
    for (std::size_t d = 0; d < lower_.size(); ++d) {
        if (!(lower_[d] < upper_[d])) {
            throw std::invalid_argument("BoundedSpace: lower >= upper in dimension " + std::to_string(d));
        }
    }
}

bool BoundedSpace::contains(std::span<const double> x) const {
    if (x.size() != dimension()) {
        return false;
    }
    for (std::size_t d = 0; d < x.size(); ++d) {
        if (x[d] < lower_[d] || x[d] > upper_[d]) {
            return false;
        }
    }
    return true;
}

double evaluate_into(const ConstrainedProblem& problem, std::span<const double> x,
                     std::span<double> out, NfeCounter& nfe) {
    if (x.size() != problem.dimension()) {
        throw std::invalid_argument("evaluate: expected " + std::to_string(problem.dimension()) +
                                    " coordinates for " + problem.id + ", got " + std::to_string(x.size()));
    }
    if (out.size() != problem.constraint_count()) {
        throw std::invalid_argument("evaluate: constraint buffer size mismatch");
    }
    ++nfe.count;
    if (problem.constraint_count() > 0) {
        problem.constraints(x, out);
    }
    return problem.objective(x);
}

Evaluation evaluate(const ConstrainedProblem& problem, std::span<const double> x, NfeCounter& nfe) {
    Evaluation e;
    e.constraint_values.resize(problem.constraint_count());
    e.objective = evaluate_into(problem, x, e.constraint_values, nfe);
    return e;
}

ConstrainedProblem relax_equalities(ConstrainedProblem problem, double eps_h) {
    if (!(eps_h > 0.0)) {
        throw std::invalid_argument("relax_equalities: eps_h must be positive");
    }
    for (auto& b : problem.bounds) {
        if (b.is_equality()) {
            b = {b.lower - eps_h, b.upper + eps_h};
        }
    }
    problem.eps_h = eps_h;
    return problem;
}

double min_constraint_width(const ConstrainedProblem& problem) {
    double w = std::numeric_limits<double>::infinity();
    for (const auto& b : problem.bounds) {
        w = std::min(w, b.width());
    }
    return w;
}

}  // namespace cgo::problem
