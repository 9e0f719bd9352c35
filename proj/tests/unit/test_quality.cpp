#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cgo/catalog.hpp"
#include "cgo/quality.hpp"
#include "../support/oracles.hpp"

using namespace cgo;
using namespace cgo::quality;

namespace {

problem::ConstrainedProblem interval_problem(std::vector<problem::ConstraintBounds> bounds) {
    problem::ConstrainedProblem p;
    p.space = problem::BoundedSpace({-100.0}, {100.0});
    p.objective = [](std::span<const double> x) { return x[0]; };
    const std::size_t j = bounds.size();
    // g_k(x) = x[0] * (k + 1)
    p.constraints = [j](std::span<const double> x, std::span<double> g) {
        for (std::size_t k = 0; k < j; ++k) g[k] = x[0] * static_cast<double>(k + 1);
    };
    p.bounds = std::move(bounds);
    return p;
}

}  // namespace

TEST_CASE("encode") {
    problem::NfeCounter nfe;
    auto one = interval_problem({{0.0, 1.0}});
    CHECK(encode(one, std::vector<double>{0.5}, nfe) == QualityPair{0.0, 0.5});
    CHECK(encode(one, std::vector<double>{1.5}, nfe).v_con == 0.5);
    // two constraints [0,1] and [2,3] with g1=-0.25, g2=3.5
    const std::vector<problem::ConstraintBounds> b = {{0.0, 1.0}, {2.0, 3.0}};
    const std::vector<double> g = {-0.25, 3.5};
    CHECK(violation(b, g) == 0.75);
    CHECK(nfe.count == 2);
}

TEST_CASE("encode agrees with the clamp-sum oracle") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 500; ++i) {
        const std::size_t j = 1 + gen() % 5;
        std::vector<problem::ConstraintBounds> b(j);
        std::vector<double> lo(j), hi(j), g(j);
        for (std::size_t k = 0; k < j; ++k) {
            double a = u(gen), c = u(gen);
            if (a > c) std::swap(a, c);
            if (gen() % 4 == 0) a = -std::numeric_limits<double>::infinity();
            b[k] = {a, c};
            lo[k] = a;
            hi[k] = c;
            g[k] = u(gen);
        }
        CHECK(violation(b, g) == doctest::Approx(oracle::violation(lo, hi, g)).epsilon(1e-14));
    }
}

TEST_CASE("qc_natural") {
    CHECK(qc_natural({0, 5}, {1, 0}));
    CHECK_FALSE(qc_natural({0, 2}, {0, 1}));
    CHECK(qc_natural({0.3, 1}, {0.3, 1}));
}

TEST_CASE("qc_penalized") {
    CHECK(qc_penalized({5, 1}, {0, 2}, 0.0));
    CHECK_FALSE(qc_penalized({1, 0}, {0, 0.5}, 1.0));
    CHECK(qc_penalized({1, 1}, {1, 1}, 3.0));
    CHECK_THROWS_AS(qc_penalized({1, 1}, {1, 1}, -1.0), std::invalid_argument);
}

TEST_CASE("qc_stochastic draw bookkeeping") {
    ScriptedRandom none({});
    CHECK(qc_stochastic({1, 0}, {2, 5}, 0.0, none));
    CHECK(qc_stochastic({1, 0}, {1, 5}, 0.45, none));
    CHECK_FALSE(qc_stochastic({1, 6}, {1, 5}, 0.45, none));
    CHECK_FALSE(qc_stochastic({3, 6}, {1, 5}, 0.45, none));
    CHECK(none.consumed() == 0);
    ScriptedRandom low({0.2, 0.9});
    CHECK(qc_stochastic({3, 4}, {1, 5}, 0.45, low));
    CHECK_FALSE(qc_stochastic({3, 4}, {1, 5}, 0.45, low));
    CHECK(low.consumed() == 2);
    ScriptedRandom any({0.999999});
    CHECK(qc_stochastic({9, 1}, {0, 2}, 1.0, any));
    CHECK_THROWS_AS(qc_stochastic({0, 0}, {0, 0}, 1.5, any), std::invalid_argument);
}

TEST_CASE("qc_static_relaxing") {
    CHECK_FALSE(qc_static_relaxing({0.5, 9}, {0.4, 1}, 1.0));
    CHECK(qc_static_relaxing({0.5, 1}, {0.4, 9}, 1.0));
    CHECK_FALSE(qc_static_relaxing({2, 1}, {2, 5}, 1.0));
    CHECK(qc_static_relaxing({1, 9}, {2, 5}, 1.0));
    // with c_er = 0 the decisions equal qc_natural whenever v_con differ or both are feasible
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int i = 0; i < 2000; ++i) {
        QualityPair a{static_cast<double>(pick(gen)) * 0.5, static_cast<double>(pick(gen))};
        QualityPair b{static_cast<double>(pick(gen)) * 0.5, static_cast<double>(pick(gen))};
        if (a.v_con != b.v_con || a.v_con == 0.0) CHECK(qc_static_relaxing(a, b, 0.0) == qc_natural(a, b));
    }
}

TEST_CASE("ratio-reaching adjuster") {
    CHECK(ratio_reaching_step(100.0, 1.0, 2) == doctest::Approx(10.0));
    CHECK(ratio_reaching_step(100.0, 1.0, 1) == 1.0);
    CHECK(ratio_reaching_step(0.0, 1.0, 3) == 0.0);

    auto a = make_adjuster(10.0, 0.5, 0.5, 2000, 2e-4);
    CHECK(a.t_th == 1000);
    CHECK(a.c_ere == doctest::Approx(1e-3));
    CHECK(make_adjuster(10, 0.5, 0.5, 5, 1).t_th == 3);  // 2.5 rounds up
    CHECK(make_adjuster(10, 0.5, 0.0, 5, 1).t_th == 0);

    std::vector<State> fb(4);
    fb[0].quality = {4.0, 0};
    fb[1].quality = {1.0, 0};
    fb[2].quality = {0.0, 0};
    fb[3].quality = {2.0, 0};
    adjust_ratio_reaching(a, 0, fb);
    CHECK(a.c_er == 0.0);
    adjust_ratio_reaching(a, 1, fb);
    CHECK(a.c_er == 4.0);
    // all four within c_er, ratio 1 > 0.5: geometric step with k = t_th - t + 1
    adjust_ratio_reaching(a, 2, fb);
    CHECK(a.c_er == doctest::Approx(4.0 * std::pow(1e-3 / 4.0, 1.0 / 999.0)));
    // only one of four within a tiny level: unchanged
    a.c_er = 0.5;
    adjust_ratio_reaching(a, 3, fb);
    CHECK(a.c_er == 0.5);
    adjust_ratio_reaching(a, 1000, fb);
    CHECK(a.c_er == 0.5);
    a.c_er = 3.0;
    adjust_ratio_reaching(a, 1000, fb);
    CHECK(a.c_er == doctest::Approx(1e-3));
    adjust_ratio_reaching(a, 1001, fb);
    CHECK(a.c_er == 0.0);
    auto empty = make_adjuster(10.0, 0.5, 0.5, 2000, 2e-4);
    CHECK_THROWS_AS(adjust_ratio_reaching(empty, 1, std::span<const State>()), std::runtime_error);
}

TEST_CASE("o3r dispatch") {
    CHECK_FALSE(o3r_selects_relaxing(problem::catalog_get("G04")));
    CHECK(o3r_selects_relaxing(problem::catalog_get("G05")));
    CHECK(o3r_selects_relaxing(problem::catalog_get("G05", 1e-8)));
    CHECK_FALSE(o3r_selects_relaxing(problem::catalog_get("G02")));
    RngStream rng(1);
    Facilitator f(FacilitatorConfig{}, problem::catalog_get("G13"), 2000, rng);
    CHECK(f.has_adjuster());
    CHECK(f.internal().kind() == Comparator::Kind::relaxing);
    Facilitator n(FacilitatorConfig{}, problem::catalog_get("G06"), 2000, rng);
    CHECK_FALSE(n.has_adjuster());
    CHECK(n.internal().kind() == Comparator::Kind::natural);
}

TEST_CASE("keep_best strict improvement under the natural comparator") {
    RngStream rng(1);
    FacilitatorConfig cfg;
    cfg.rule = ComparatorRule::P;
    cfg.c_ap = 0.0;
    Facilitator f(cfg, problem::catalog_get("G01"), 10, rng);
    State a{{1.0}, {0.0, -15.0}};
    CHECK(f.keep_best(a));
    State same{{2.0}, {0.0, -15.0}};
    CHECK_FALSE(f.keep_best(same));
    CHECK(f.best()->x == std::vector<double>{1.0});
    // better for the penalized internal rule, worse under the natural one
    State infeasible{{3.0}, {1.0, -100.0}};
    CHECK_FALSE(f.keep_best(infeasible));
    State better{{4.0}, {0.0, -15.1}};
    CHECK(f.keep_best(better));
    CHECK(f.best()->quality.v_obj == -15.1);
}
