#pragma once

#include <vector>

namespace cgo {

/// Quality of a state: summed constraint violation and objective value.
struct QualityPair {
    double v_con = 0.0;
    double v_obj = 0.0;

    bool feasible() const { return v_con == 0.0; }
    friend bool operator==(const QualityPair&, const QualityPair&) = default;
};

/// A point of the search box together with the quality computed when it was
/// generated. States are never re-evaluated.
struct State {
    std::vector<double> x;
    QualityPair quality;

    friend bool operator==(const State&, const State&) = default;
};

using StateSet = std::vector<State>;

}  // namespace cgo
