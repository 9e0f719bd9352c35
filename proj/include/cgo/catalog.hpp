#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cgo/problem.hpp"

namespace cgo::problem {

inline constexpr double kDefaultEpsH = 1e-4;

/// Summary characteristics of a benchmark instance.
struct InstanceMetadata {
    std::string objective_type;
    int linear_inequalities = 0;
    int nonlinear_equalities = 0;
    int nonlinear_inequalities = 0;
    int active_at_optimum = 0;
    /// Estimated feasible ratio |S_PF|/|S_P| in percent.
    double feasible_percent = 0.0;
};

struct BenchmarkEntry {
    std::string id;
    InstanceMetadata metadata;
    /// Optimum under eps_h = 1e-4 (the true optimum when there are no equalities).
    double optimum_eps4 = 0.0;
    /// Optimum under eps_h = 1e-8; equals optimum_eps4 without equalities.
    double optimum_eps8 = 0.0;
    /// Literature optimum point, feasible under eps_h = 1e-4.
    std::vector<double> optimum_point;
};

/// Ids "G01".."G13" in order.
const std::vector<std::string>& catalog_ids();

/// Throws std::out_of_range listing valid ids when unknown.
const BenchmarkEntry& catalog_entry(std::string_view id);

/// Unrelaxed problem (equalities are exact, eps_h = 0, no known optimum).
ConstrainedProblem catalog_raw(std::string_view id);

/// Instance relaxed with eps_h. known_optimum is set for eps_h of 1e-4 and
/// 1e-8, and always for instances without equalities.
ConstrainedProblem catalog_get(std::string_view id, double eps_h = kDefaultEpsH);

/// JSON text of dimension, box and constraint bounds for auditing.
std::string dump_instance(const ConstrainedProblem& problem);

}  // namespace cgo::problem
