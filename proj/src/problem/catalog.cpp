#include "cgo/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace cgo::problem {
namespace {

using std::pow;
using std::sin;
using Span = std::span<const double>;
using Out = std::span<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<ConstraintBounds> at_most_zero(std::size_t j) {
    return std::vector<ConstraintBounds>(j, ConstraintBounds::at_most(0.0));
}

ConstrainedProblem make(std::string id, BoundedSpace space, ObjectiveFn f, ConstraintFn g,
                        std::vector<ConstraintBounds> bounds) {
    ConstrainedProblem p;
    p.id = std::move(id);
    p.space = std::move(space);
    p.objective = std::move(f);
    p.constraints = std::move(g);
    p.bounds = std::move(bounds);
    return p;
}

ConstrainedProblem g01() {
    std::vector<double> lo(13, 0.0), hi(13, 1.0);
    hi[9] = hi[10] = hi[11] = 100.0;
    return make(
        "G01", BoundedSpace(lo, hi),
        [](Span x) {
            double a = 0.0, b = 0.0, c = 0.0;
            for (int i = 0; i < 4; ++i) {
                a += x[i];
                b += x[i] * x[i];
            }
            for (int i = 4; i < 13; ++i) c += x[i];
            return 5.0 * a - 5.0 * b - c;
        },
        [](Span x, Out g) {
            g[0] = 2 * x[0] + 2 * x[1] + x[9] + x[10] - 10;
            g[1] = 2 * x[0] + 2 * x[2] + x[9] + x[11] - 10;
            g[2] = 2 * x[1] + 2 * x[2] + x[10] + x[11] - 10;
            g[3] = -8 * x[0] + x[9];
            g[4] = -8 * x[1] + x[10];
            g[5] = -8 * x[2] + x[11];
            g[6] = -2 * x[3] - x[4] + x[9];
            g[7] = -2 * x[5] - x[6] + x[10];
            g[8] = -2 * x[7] - x[8] + x[11];
        },
        at_most_zero(9));
}

ConstrainedProblem g02() {
    constexpr std::size_t n = 20;
    return make(
        "G02", BoundedSpace(std::vector<double>(n, 0.0), std::vector<double>(n, 10.0)),
        [](Span x) {
            double s4 = 0.0, p2 = 1.0, sq = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double c = std::cos(x[i]);
                s4 += c * c * c * c;
                p2 *= c * c;
                sq += static_cast<double>(i + 1) * x[i] * x[i];
            }
            if (sq == 0.0) return 0.0;
            return -std::abs((s4 - 2.0 * p2) / std::sqrt(sq));
        },
        [](Span x, Out g) {
            double p = 1.0, s = 0.0;
            for (double v : x) {
                p *= v;
                s += v;
            }
            g[0] = 0.75 - p;
            g[1] = s - 7.5 * static_cast<double>(x.size());
        },
        at_most_zero(2));
}

ConstrainedProblem g03() {
    constexpr std::size_t n = 10;
    return make(
        "G03", BoundedSpace(std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)),
        [](Span x) {
            const double dn = static_cast<double>(x.size());
            double p = std::pow(std::sqrt(dn), dn);
            for (double v : x) p *= v;
            return -p;
        },
        [](Span x, Out g) {
            double s = 0.0;
            for (double v : x) s += v * v;
            g[0] = s - 1.0;
        },
        {ConstraintBounds::equal_to(0.0)});
}

ConstrainedProblem g04() {
    return make(
        "G04", BoundedSpace({78, 33, 27, 27, 27}, {102, 45, 45, 45, 45}),
        [](Span x) {
            return 5.3578547 * x[2] * x[2] + 0.8356891 * x[0] * x[4] + 37.293239 * x[0] - 40792.141;
        },
        [](Span x, Out g) {
            const double u = 85.334407 + 0.0056858 * x[1] * x[4] + 0.0006262 * x[0] * x[3] -
                             0.0022053 * x[2] * x[4];
            const double v = 80.51249 + 0.0071317 * x[1] * x[4] + 0.0029955 * x[0] * x[1] +
                             0.0021813 * x[2] * x[2];
            const double w = 9.300961 + 0.0047026 * x[2] * x[4] + 0.0012547 * x[0] * x[2] +
                             0.0019085 * x[2] * x[3];
            g[0] = u - 92.0;
            g[1] = -u;
            g[2] = v - 110.0;
            g[3] = -v + 90.0;
            g[4] = w - 25.0;
            g[5] = -w + 20.0;
        },
        at_most_zero(6));
}

ConstrainedProblem g05() {
    auto bounds = at_most_zero(2);
    bounds.insert(bounds.end(), 3, ConstraintBounds::equal_to(0.0));
    return make(
        "G05", BoundedSpace({0, 0, -0.55, -0.55}, {1200, 1200, 0.55, 0.55}),
        [](Span x) {
            return 3 * x[0] + 0.000001 * pow(x[0], 3) + 2 * x[1] + (0.000002 / 3) * pow(x[1], 3);
        },
        [](Span x, Out g) {
            g[0] = -x[3] + x[2] - 0.55;
            g[1] = -x[2] + x[3] - 0.55;
            g[2] = 1000 * sin(-x[2] - 0.25) + 1000 * sin(-x[3] - 0.25) + 894.8 - x[0];
            g[3] = 1000 * sin(x[2] - 0.25) + 1000 * sin(x[2] - x[3] - 0.25) + 894.8 - x[1];
            g[4] = 1000 * sin(x[3] - 0.25) + 1000 * sin(x[3] - x[2] - 0.25) + 1294.8;
        },
        bounds);
}

ConstrainedProblem g06() {
    return make(
        "G06", BoundedSpace({13, 0}, {100, 100}),
        [](Span x) { return pow(x[0] - 10, 3) + pow(x[1] - 20, 3); },
        [](Span x, Out g) {
            g[0] = -pow(x[0] - 5, 2) - pow(x[1] - 5, 2) + 100;
            g[1] = pow(x[0] - 6, 2) + pow(x[1] - 5, 2) - 82.81;
        },
        at_most_zero(2));
}

ConstrainedProblem g07() {
    return make(
        "G07", BoundedSpace(std::vector<double>(10, -10.0), std::vector<double>(10, 10.0)),
        [](Span x) {
            return x[0] * x[0] + x[1] * x[1] + x[0] * x[1] - 14 * x[0] - 16 * x[1] + pow(x[2] - 10, 2) +
                   4 * pow(x[3] - 5, 2) + pow(x[4] - 3, 2) + 2 * pow(x[5] - 1, 2) + 5 * x[6] * x[6] +
                   7 * pow(x[7] - 11, 2) + 2 * pow(x[8] - 10, 2) + pow(x[9] - 7, 2) + 45;
        },
        [](Span x, Out g) {
            g[0] = -105 + 4 * x[0] + 5 * x[1] - 3 * x[6] + 9 * x[7];
            g[1] = 10 * x[0] - 8 * x[1] - 17 * x[6] + 2 * x[7];
            g[2] = -8 * x[0] + 2 * x[1] + 5 * x[8] - 2 * x[9] - 12;
            g[3] = 3 * pow(x[0] - 2, 2) + 4 * pow(x[1] - 3, 2) + 2 * x[2] * x[2] - 7 * x[3] - 120;
            g[4] = 5 * x[0] * x[0] + 8 * x[1] + pow(x[2] - 6, 2) - 2 * x[3] - 40;
            g[5] = x[0] * x[0] + 2 * pow(x[1] - 2, 2) - 2 * x[0] * x[1] + 14 * x[4] - 6 * x[5];
            g[6] = 0.5 * pow(x[0] - 8, 2) + 2 * pow(x[1] - 4, 2) + 3 * x[4] * x[4] - x[5] - 30;
            g[7] = -3 * x[0] + 6 * x[1] + 12 * pow(x[8] - 8, 2) - 7 * x[9];
        },
        at_most_zero(8));
}

ConstrainedProblem g08() {
    return make(
        "G08", BoundedSpace({0, 0}, {10, 10}),
        [](Span x) {
            constexpr double two_pi = 2.0 * std::numbers::pi;
            const double den = pow(x[0], 3) * (x[0] + x[1]);
            if (den == 0.0) return 0.0;
            return -pow(sin(two_pi * x[0]), 3) * sin(two_pi * x[1]) / den;
        },
        [](Span x, Out g) {
            g[0] = x[0] * x[0] - x[1] + 1;
            g[1] = 1 - x[0] + pow(x[1] - 4, 2);
        },
        at_most_zero(2));
}

ConstrainedProblem g09() {
    return make(
        "G09", BoundedSpace(std::vector<double>(7, -10.0), std::vector<double>(7, 10.0)),
        [](Span x) {
            return pow(x[0] - 10, 2) + 5 * pow(x[1] - 12, 2) + pow(x[2], 4) + 3 * pow(x[3] - 11, 2) +
                   10 * pow(x[4], 6) + 7 * x[5] * x[5] + pow(x[6], 4) - 4 * x[5] * x[6] - 10 * x[5] -
                   8 * x[6];
        },
        [](Span x, Out g) {
            g[0] = -127 + 2 * x[0] * x[0] + 3 * pow(x[1], 4) + x[2] + 4 * x[3] * x[3] + 5 * x[4];
            g[1] = -282 + 7 * x[0] + 3 * x[1] + 10 * x[2] * x[2] + x[3] - x[4];
            g[2] = -196 + 23 * x[0] + x[1] * x[1] + 6 * x[5] * x[5] - 8 * x[6];
            g[3] = 4 * x[0] * x[0] + x[1] * x[1] - 3 * x[0] * x[1] + 2 * x[2] * x[2] + 5 * x[5] - 11 * x[6];
        },
        at_most_zero(4));
}

ConstrainedProblem g10() {
    return make(
        "G10",
        BoundedSpace({100, 1000, 1000, 10, 10, 10, 10, 10}, {10000, 10000, 10000, 1000, 1000, 1000, 1000, 1000}),
        [](Span x) { return x[0] + x[1] + x[2]; },
        [](Span x, Out g) {
            g[0] = -1 + 0.0025 * (x[3] + x[5]);
            g[1] = -1 + 0.0025 * (x[4] + x[6] - x[3]);
            g[2] = -1 + 0.01 * (x[7] - x[4]);
            g[3] = -x[0] * x[5] + 833.33252 * x[3] + 100 * x[0] - 83333.333;
            g[4] = -x[1] * x[6] + 1250 * x[4] + x[1] * x[3] - 1250 * x[3];
            g[5] = -x[2] * x[7] + 1250000 + x[2] * x[4] - 2500 * x[4];
        },
        at_most_zero(6));
}

ConstrainedProblem g11() {
    return make(
        "G11", BoundedSpace({-1, -1}, {1, 1}),
        [](Span x) { return x[0] * x[0] + pow(x[1] - 1, 2); },
        [](Span x, Out g) { g[0] = x[1] - x[0] * x[0]; },
        {ConstraintBounds::equal_to(0.0)});
}

// Feasible region is the union of 9^3 spheres of radius 0.25 centred at
// integer points (p, q, r) in [1, 9]^3. The squared distance to the closest
// centre is separable, so each coordinate picks its nearest admissible integer.
ConstrainedProblem g12() {
    return make(
        "G12", BoundedSpace({0, 0, 0}, {10, 10, 10}),
        [](Span x) {
            return -(100 - pow(x[0] - 5, 2) - pow(x[1] - 5, 2) - pow(x[2] - 5, 2)) / 100;
        },
        [](Span x, Out g) {
            double s = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double c = std::clamp(std::round(x[i]), 1.0, 9.0);
                s += (x[i] - c) * (x[i] - c);
            }
            g[0] = s - 0.0625;
        },
        at_most_zero(1));
}

ConstrainedProblem g13() {
    return make(
        "G13", BoundedSpace({-2.3, -2.3, -3.2, -3.2, -3.2}, {2.3, 2.3, 3.2, 3.2, 3.2}),
        [](Span x) { return std::exp(x[0] * x[1] * x[2] * x[3] * x[4]); },
        [](Span x, Out g) {
            double s = 0.0;
            for (double v : x) s += v * v;
            g[0] = s - 10;
            g[1] = x[1] * x[2] - 5 * x[3] * x[4];
            g[2] = pow(x[0], 3) + pow(x[1], 3) + 1;
        },
        std::vector<ConstraintBounds>(3, ConstraintBounds::equal_to(0.0)));
}

struct CatalogRecord {
    BenchmarkEntry entry;
    ConstrainedProblem (*make)();
};

const std::vector<CatalogRecord>& records() {
    static const std::vector<CatalogRecord> table = [] {
        const double g03_point = std::sqrt((1.0 + 0.99e-4) / 10.0);
        std::vector<CatalogRecord> r;
        r.push_back({{"G01", {"quadratic", 9, 0, 0, 6, 0.011}, -15.0, -15.0,
                      {1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3, 3, 1}},
                     g01});
        r.push_back({{"G02", {"nonlinear", 1, 0, 1, 1, 99.990}, -0.80361910412559, -0.80361910412559,
                      {3.16246061572185, 3.12833142812967, 3.09479212988791, 3.06145059523469,
                       3.02792915885555, 2.99382606701730, 2.95866871765285, 2.92184227312450,
                       0.49482511456933, 0.48835711005490, 0.48231642711865, 0.47664475092742,
                       0.47129550835493, 0.46623099264167, 0.46142004984199, 0.45683664767217,
                       0.45245876903267, 0.44826762241853, 0.44424700958760, 0.44038285956317}},
                     g02});
        // (1 + eps)^5 at the symmetric point sum x^2 = 1 + eps.
        r.push_back({{"G03", {"polynomial", 0, 1, 0, 1, 0.000}, -1.0005001000100005, -1.0000000500000010,
                      std::vector<double>(10, g03_point)},
                     g03});
        r.push_back({{"G04", {"quadratic", 0, 0, 6, 2, 52.123}, -30665.538671783317, -30665.538671783317,
                      {78, 33, 29.9952560256815985, 45, 36.7758129057882073}},
                     g04});
        r.push_back({{"G05", {"cubic", 2, 3, 0, 3, 0.000}, 5126.4967140071, 5126.49810945572,
                      {679.9453372406872, 1026.06677444844, 0.11887623447526027, -0.39623354917777037}},
                     g05});
        r.push_back({{"G06", {"cubic", 0, 0, 2, 2, 0.006}, -6961.81387558015, -6961.81387558015,
                      {14.09500000000000064, 0.8429607892154795668}},
                     g06});
        r.push_back({{"G07", {"quadratic", 3, 0, 5, 6, 0.000}, 24.3062090681283, 24.3062090681283,
                      {2.17199634142692, 2.3636830416034, 8.77392573913157, 5.09598443745173,
                       0.990654756560493, 1.43057392853463, 1.32164415364306, 9.82872576524495,
                       8.2800915887356, 8.3759266477347}},
                     g07});
        r.push_back({{"G08", {"nonlinear", 0, 0, 2, 0, 0.856}, -0.0958250414180359, -0.0958250414180359,
                      {1.22797135260752599, 4.24537336612274885}},
                     g08});
        r.push_back({{"G09", {"polynomial", 0, 0, 4, 2, 0.512}, 680.630057374402, 680.630057374402,
                      {2.33049935147405174, 1.95137236847114592, -0.477541399510615805,
                       4.36572624923625874, -0.624486959100388983, 1.03813099410962173,
                       1.5942266780671519}},
                     g09});
        r.push_back({{"G10", {"linear", 3, 0, 3, 3, 0.001}, 7049.24802052867, 7049.24802052867,
                      {579.306685017979589, 1359.97067807935605, 5109.97065743133317,
                       182.01769963061534, 295.601173702746792, 217.982300369384632,
                       286.41652592786852, 395.601173702746735}},
                     g10});
        // f = 0.75 - eps at x2 = 1/2, x1^2 = 1/2 - eps.
        r.push_back({{"G11", {"quadratic", 0, 1, 0, 1, 0.000}, 0.7499, 0.74999999,
                      {-std::sqrt(0.5 - 0.99e-4), 0.5}},
                     g11});
        r.push_back({{"G12", {"quadratic", 0, 0, 729, 0, 4.779}, -1.0, -1.0, {5, 5, 5}}, g12});
        r.push_back({{"G13", {"exponential", 0, 3, 0, 3, 0.000}, 0.0539415140418979, 0.0539498469368404,
                      {-1.7171422410738082, 1.5957212286126268, 1.827250236671806, -0.7636598624888726,
                       -0.763659853260164}},
                     g13});
        return r;
    }();
    return table;
}

const CatalogRecord& record(std::string_view id) {
    for (const auto& r : records()) {
        if (r.entry.id == id) return r;
    }
    std::string valid;
    for (const auto& r : records()) {
        valid += (valid.empty() ? "" : ", ") + r.entry.id;
    }
    throw std::out_of_range("unknown benchmark instance '" + std::string(id) + "'; valid ids: " + valid);
}

}  // namespace

const std::vector<std::string>& catalog_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& r : records()) v.push_back(r.entry.id);
        return v;
    }();
    return ids;
}

const BenchmarkEntry& catalog_entry(std::string_view id) { return record(id).entry; }

ConstrainedProblem catalog_raw(std::string_view id) { return record(id).make(); }

ConstrainedProblem catalog_get(std::string_view id, double eps_h) {
    const auto& rec = record(id);
    ConstrainedProblem p = relax_equalities(rec.make(), eps_h);
    const bool has_equalities = rec.entry.metadata.nonlinear_equalities > 0;
    if (!has_equalities || eps_h == 1e-4) {
        p.known_optimum = rec.entry.optimum_eps4;
    } else if (eps_h == 1e-8) {
        p.known_optimum = rec.entry.optimum_eps8;
    }
    if (rec.entry.id == "G08" || rec.entry.id == "G13") {
        p.solved_tolerance = 1e-6;
    }
    return p;
}

std::string dump_instance(const ConstrainedProblem& problem) {
    using nlohmann::json;
    auto num = [](double v) -> json {
        if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
        return v;
    };
    json j;
    j["id"] = problem.id;
    j["dimension"] = problem.dimension();
    j["eps_h"] = problem.eps_h;
    j["lower"] = std::vector<double>(problem.space.lower().begin(), problem.space.lower().end());
    j["upper"] = std::vector<double>(problem.space.upper().begin(), problem.space.upper().end());
    json cons = json::array();
    for (const auto& b : problem.bounds) {
        cons.push_back({{"lower", num(b.lower)}, {"upper", num(b.upper)}});
    }
    j["constraints"] = cons;
    j["min_constraint_width"] = num(min_constraint_width(problem));
    j["known_optimum"] = problem.known_optimum ? json(*problem.known_optimum) : json(nullptr);
    return j.dump(2);
}

}  // namespace cgo::problem
