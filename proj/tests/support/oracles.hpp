#pragma once

// Straight-line reference implementations used to check the library. They are
// written independently of src/ and only share the public data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "cgo/problem.hpp"
#include "cgo/state.hpp"

namespace oracle {

/// Consumes a fixed list of draws in order.
struct Draws {
    std::vector<double> u;
    std::size_t pos = 0;
    double next() { return u.at(pos++); }
    std::size_t pick(std::size_t n) {
        const auto i = static_cast<std::size_t>(std::floor(next() * static_cast<double>(n)));
        return std::min(i, n - 1);
    }
};

inline double violation(const std::vector<double>& lo, const std::vector<double>& hi, const std::vector<double>& g) {
    double v = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) v += std::max({0.0, lo[j] - g[j], g[j] - hi[j]});
    return v;
}

/// Lexicographic (v_con, v_obj) "at least as good".
inline bool natural(const cgo::QualityPair& a, const cgo::QualityPair& b) {
    return a.v_con < b.v_con || (a.v_con == b.v_con && a.v_obj <= b.v_obj);
}

/// Index of the best state, earliest index among exact ties.
inline std::size_t argbest(const std::vector<cgo::State>& pool) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool.size(); ++i) {
        const auto& a = pool[i].quality;
        const auto& b = pool[best].quality;
        if (a.v_con < b.v_con || (a.v_con == b.v_con && a.v_obj < b.v_obj)) best = i;
    }
    return best;
}

inline std::vector<double> de(const std::vector<double>& lo, const std::vector<double>& hi, const cgo::State& xp,
                              const std::vector<cgo::State>& pool, double f, double cr, double cg, Draws& d) {
    const std::size_t n = pool.size();
    const std::size_t dim = lo.size();
    const auto& xg = pool[argbest(pool)].x;
    std::size_t a, b, c, e;
    if (n >= 4) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::size_t j = d.pick(n);
        std::swap(idx[0], idx[j]);
        j = 1 + d.pick(n - 1);
        std::swap(idx[1], idx[j]);
        j = 2 + d.pick(n - 2);
        std::swap(idx[2], idx[j]);
        j = 3 + d.pick(n - 3);
        std::swap(idx[3], idx[j]);
        a = idx[0], b = idx[1], c = idx[2], e = idx[3];
    } else {
        a = d.pick(n), b = d.pick(n), c = d.pick(n), e = d.pick(n);
    }
    const std::size_t forced = d.pick(dim);
    std::vector<double> x = xp.x;
    for (std::size_t k = 0; k < dim; ++k) {
        const double u = d.next();
        if (!(u < cr) && k != forced) continue;
        double v = xp.x[k] + cg * (xg[k] - xp.x[k]) +
                   f * (pool[a].x[k] - pool[b].x[k] + pool[c].x[k] - pool[e].x[k]);
        if (v < lo[k] || v > hi[k]) v = lo[k] + d.next() * (hi[k] - lo[k]);
        x[k] = v;
    }
    return x;
}

inline double dis_literal(double a, double b, double r) {
    const double y = a - b;
    if (y < -r / 2) return r + y;
    if (y > r / 2) return r - y;
    return y;
}

inline std::vector<double> ps(const std::vector<double>& lo, const std::vector<double>& hi, const cgo::State& xo,
                              const cgo::State& xr, const cgo::State& xp, const std::vector<cgo::State>& pool,
                              double ca, double cb, Draws& d) {
    const double phi = ca + cb;
    const double ck = 2.0 / (std::sqrt(phi * (phi - 4.0)) + phi - 2.0);
    const auto& xg = pool[argbest(pool)].x;
    std::vector<double> x(lo.size());
    for (std::size_t k = 0; k < lo.size(); ++k) {
        const double r = hi[k] - lo[k];
        const double u1 = d.next();
        const double u2 = d.next();
        double v = xr.x[k] + ck * dis_literal(xr.x[k], xo.x[k], r) + ca * u1 * dis_literal(xp.x[k], xr.x[k], r) +
                   cb * u2 * dis_literal(xg[k], xr.x[k], r);
        if (v < lo[k]) v = hi[k] - std::fmod(lo[k] - v, r);
        if (v > hi[k]) v = lo[k] + std::fmod(v - hi[k], r);
        x[k] = std::min(hi[k], std::max(lo[k], v));
    }
    return x;
}

inline std::vector<double> sc(const std::vector<double>& lo, const std::vector<double>& hi, const cgo::State& xr,
                              const std::vector<cgo::State>& pool, int ntb, Draws& d) {
    std::size_t m = d.pick(pool.size());
    for (int k = 1; k < ntb; ++k) {
        const std::size_t c = d.pick(pool.size());
        if (!natural(pool[m].quality, pool[c].quality)) m = c;
    }
    const bool model_first = natural(pool[m].quality, xr.quality);
    const auto& b = model_first ? pool[m].x : xr.x;
    const auto& r = model_first ? xr.x : pool[m].x;
    std::vector<double> x(lo.size());
    for (std::size_t k = 0; k < lo.size(); ++k) {
        const double w = std::fabs(b[k] - r[k]);
        const double l = std::max(lo[k], b[k] - w);
        const double h = std::min(hi[k], b[k] + w);
        x[k] = l + d.next() * (h - l);
    }
    return x;
}

/// Forest test via counting: in-degree at most one, no self loops, and
/// exactly n - (weak components) edges.
inline bool is_forest(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<int> indeg(n, 0);
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& [p, c] : edges) {
        if (p == c) return false;
        if (++indeg[c] > 1) return false;
        parent[find(p)] = find(c);
    }
    std::size_t comps = 0;
    for (std::size_t v = 0; v < n; ++v) comps += find(v) == v;
    return edges.size() == n - comps;
}

/// G12 constraint by scanning all 729 sphere centres.
inline double g12_constraint(const std::vector<double>& x) {
    double best = 1e300;
    for (int p = 1; p <= 9; ++p)
        for (int q = 1; q <= 9; ++q)
            for (int r = 1; r <= 9; ++r) {
                const double s = (x[0] - p) * (x[0] - p) + (x[1] - q) * (x[1] - q) + (x[2] - r) * (x[2] - r);
                best = std::min(best, s - 0.0625);
            }
    return best;
}

}  // namespace oracle
