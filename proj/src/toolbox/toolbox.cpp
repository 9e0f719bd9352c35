#include "cgo/toolbox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cgo::toolbox {

namespace {

struct KindInfo {
    RuleKind kind;
    const char* name;
    RuleFamily family;
};

constexpr KindInfo kKinds[] = {
    {RuleKind::sel_greedy, "SEL.G", RuleFamily::selecting},
    {RuleKind::sel_tournament, "SEL.TS", RuleFamily::selecting},
    {RuleKind::ie_random, "IE.X.RND", RuleFamily::initializing},
    {RuleKind::ue_direct, "UE.S.D", RuleFamily::updating},
    {RuleKind::ue_greedy, "UE.S.G", RuleFamily::updating},
    {RuleKind::ue_tournament, "UE.X.TS", RuleFamily::updating},
    {RuleKind::ge_random, "GE.RND", RuleFamily::generating},
    {RuleKind::ge_de, "GE.DE", RuleFamily::generating},
    {RuleKind::ge_ps, "GE.PS", RuleFamily::generating},
    {RuleKind::ge_sc, "GE.SC", RuleFamily::generating},
};

const KindInfo& info(RuleKind kind) {
    for (const auto& k : kKinds) {
        if (k.kind == kind) return k;
    }
    throw std::logic_error("unregistered rule kind");
}

void check_nonempty(std::span<const State> set, const char* what) {
    if (set.empty()) {
        throw std::invalid_argument(std::string(what) + ": empty state set");
    }
}

}  // namespace

std::string kind_name(RuleKind kind) { return info(kind).name; }

std::optional<RuleKind> kind_from_name(const std::string& name) {
    for (const auto& k : kKinds) {
        if (name == k.name) return k.kind;
    }
    return std::nullopt;
}

RuleFamily family(RuleKind kind) { return info(kind).family; }

const std::vector<ParamSpec>& param_schema(RuleKind kind) {
    static const std::vector<ParamSpec> none;
    static const std::vector<ParamSpec> ts = {{"C_NTS", ParamType::integer, std::nullopt},
                                              {"C_BQ", ParamType::boolean, std::nullopt}};
    static const std::vector<ParamSpec> uts = {{"C_NTW", ParamType::integer, std::nullopt}};
    static const std::vector<ParamSpec> de = {{"C_F", ParamType::real, std::nullopt},
                                              {"C_CR", ParamType::real, std::nullopt},
                                              {"C_CG", ParamType::real, std::nullopt}};
    static const std::vector<ParamSpec> ps = {{"C_A", ParamType::real, std::nullopt},
                                              {"C_B", ParamType::real, std::nullopt},
                                              {"C_TOROIDAL", ParamType::boolean, 0.0}};
    static const std::vector<ParamSpec> sc = {{"C_NTB", ParamType::integer, std::nullopt}};
    switch (kind) {
        case RuleKind::sel_tournament: return ts;
        case RuleKind::ue_tournament: return uts;
        case RuleKind::ge_de: return de;
        case RuleKind::ge_ps: return ps;
        case RuleKind::ge_sc: return sc;
        default: return none;
    }
}

double RuleInstance::param(const std::string& key) const {
    for (const auto& [k, v] : params) {
        if (k == key) return v;
    }
    throw std::invalid_argument(kind_name(kind) + " has no parameter " + key);
}

RuleInstance make_rule(RuleKind kind, const std::vector<std::pair<std::string, double>>& params) {
    const auto& schema = param_schema(kind);
    const std::string name = kind_name(kind);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& key = params[i].first;
        if (std::none_of(schema.begin(), schema.end(), [&](const ParamSpec& s) { return s.key == key; })) {
            throw std::invalid_argument(name + ": unknown parameter " + key);
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (params[j].first == key) throw std::invalid_argument(name + ": parameter " + key + " given twice");
        }
    }
    RuleInstance r;
    r.kind = kind;
    for (const auto& spec : schema) {
        auto it = std::find_if(params.begin(), params.end(), [&](const auto& p) { return p.first == spec.key; });
        double v;
        if (it != params.end()) {
            v = it->second;
        } else if (spec.default_value) {
            v = *spec.default_value;
        } else {
            throw std::invalid_argument(name + ": missing parameter " + spec.key);
        }
        if (!std::isfinite(v)) throw std::invalid_argument(name + ": " + spec.key + " must be finite");
        if (spec.type == ParamType::integer && v != std::floor(v)) {
            throw std::invalid_argument(name + ": " + spec.key + " must be an integer");
        }
        if (spec.type == ParamType::boolean && v != 0.0 && v != 1.0) {
            throw std::invalid_argument(name + ": " + spec.key + " must be TRUE or FALSE");
        }
        r.params.emplace_back(spec.key, v);
    }
    switch (kind) {
        case RuleKind::sel_tournament:
            if (r.param("C_NTS") < 1) throw std::invalid_argument(name + ": C_NTS must be at least 1");
            break;
        case RuleKind::ue_tournament:
            if (r.param("C_NTW") < 1) throw std::invalid_argument(name + ": C_NTW must be at least 1");
            break;
        case RuleKind::ge_sc:
            if (r.param("C_NTB") < 1) throw std::invalid_argument(name + ": C_NTB must be at least 1");
            break;
        case RuleKind::ge_de:
            if (r.param("C_F") < 0 || r.param("C_CR") < 0 || r.param("C_CR") > 1) {
                throw std::invalid_argument(name + ": C_F >= 0 and C_CR in [0, 1] required");
            }
            break;
        case RuleKind::ge_ps:
            if (!(r.param("C_A") + r.param("C_B") > 4.0)) {
                throw std::invalid_argument(name + ": C_A + C_B must exceed 4");
            }
            break;
        default:
            break;
    }
    return r;
}

std::size_t sel_greedy_index(std::span<const State> set, const Comparator& cmp) {
    check_nonempty(set, "sel_greedy");
    std::size_t best = 0;
    for (std::size_t i = 1; i < set.size(); ++i) {
        if (!cmp(set[best], set[i])) best = i;
    }
    return best;
}

const State& sel_greedy(std::span<const State> set, const Comparator& cmp) {
    return set[sel_greedy_index(set, cmp)];
}

std::size_t sel_tournament_index(std::span<const State> set, int c_nts, bool c_bq, const Comparator& cmp,
                                 RandomSource& rng) {
    check_nonempty(set, "sel_tournament");
    if (c_nts < 1) throw std::invalid_argument("sel_tournament: C_NTS must be at least 1");
    std::size_t survivor = rng.index(set.size());
    for (int k = 1; k < c_nts; ++k) {
        const std::size_t cand = rng.index(set.size());
        const bool keep = c_bq ? cmp(set[survivor], set[cand]) : cmp(set[cand], set[survivor]);
        if (!keep) survivor = cand;
    }
    return survivor;
}

const State& sel_tournament(std::span<const State> set, int c_nts, bool c_bq, const Comparator& cmp,
                            RandomSource& rng) {
    return set[sel_tournament_index(set, c_nts, c_bq, cmp, rng)];
}

std::vector<double> random_point(const problem::BoundedSpace& space, RandomSource& rng) {
    std::vector<double> x(space.dimension());
    for (std::size_t d = 0; d < x.size(); ++d) {
        x[d] = rng.uniform(space.lower(d), space.upper(d));
    }
    return x;
}

StateSet ie_random(const problem::ConstrainedProblem& problem, std::size_t cardinality, RandomSource& rng,
                   problem::NfeCounter& nfe) {
    StateSet out;
    out.reserve(cardinality);
    for (std::size_t i = 0; i < cardinality; ++i) {
        out.push_back(quality::make_state(problem, random_point(problem.space, rng), nfe));
    }
    return out;
}

void ue_direct(State& cell, const State& candidate) { cell = candidate; }

bool ue_greedy(State& cell, const State& candidate, const Comparator& cmp) {
    if (cmp(candidate, cell)) {
        cell = candidate;
        return true;
    }
    return false;
}

void ue_tournament_replace(StateSet& cell, std::span<const State> candidates, int c_ntw, const Comparator& cmp,
                           RandomSource& rng) {
    if (c_ntw < 1) throw std::invalid_argument("ue_tournament_replace: C_NTW must be at least 1");
    for (const auto& c : candidates) {
        const std::size_t victim = sel_tournament_index(cell, c_ntw, false, cmp, rng);
        cell[victim] = c;
    }
}

State ge_random(const problem::ConstrainedProblem& problem, RandomSource& rng, problem::NfeCounter& nfe) {
    return quality::make_state(problem, random_point(problem.space, rng), nfe);
}

std::vector<double> de_point(const problem::BoundedSpace& space, const State& x_p, std::span<const State> pool,
                             const DeParams& p, const Comparator& cmp, RandomSource& rng) {
    check_nonempty(pool, "ge_de");
    const std::size_t dim = space.dimension();
    const State& x_g = sel_greedy(pool, cmp);

    std::size_t parents[4];
    const std::size_t n = pool.size();
    if (n >= 4) {
        // partial Fisher-Yates over an index permutation
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t k = 0; k < 4; ++k) {
            const std::size_t j = k + rng.index(n - k);
            std::swap(perm[k], perm[j]);
            parents[k] = perm[k];
        }
    } else {
        for (auto& idx : parents) idx = rng.index(n);
    }
    const auto& xa = pool[parents[0]].x;
    const auto& xb = pool[parents[1]].x;
    const auto& xc = pool[parents[2]].x;
    const auto& xd = pool[parents[3]].x;

    const std::size_t forced = rng.index(dim);
    std::vector<double> x = x_p.x;
    for (std::size_t d = 0; d < dim; ++d) {
        const double u = rng.uniform();
        if (u < p.c_cr || d == forced) {
            double v = x_p.x[d] + p.c_cg * (x_g.x[d] - x_p.x[d]) + p.c_f * (xa[d] - xb[d] + xc[d] - xd[d]);
            if (v < space.lower(d) || v > space.upper(d)) {
                v = rng.uniform(space.lower(d), space.upper(d));
            }
            x[d] = v;
        }
    }
    return x;
}

State ge_de(const problem::ConstrainedProblem& problem, const State& x_p, std::span<const State> pool,
            const DeParams& p, const Comparator& cmp, RandomSource& rng, problem::NfeCounter& nfe) {
    return quality::make_state(problem, de_point(problem.space, x_p, pool, p, cmp, rng), nfe);
}

double constriction(double c_a, double c_b) {
    const double phi = c_a + c_b;
    if (!(phi > 4.0)) {
        throw std::invalid_argument("constriction: C_A + C_B must exceed 4");
    }
    return 2.0 / (std::sqrt(phi * (phi - 4.0)) + phi - 2.0);
}

double dis(double a, double b, double range, bool standard) {
    const double y = a - b;
    if (y < -range / 2) return standard ? y + range : range + y;
    if (y > range / 2) return standard ? y - range : range - y;
    return y;
}

double repair_periodic(double x, double lo, double hi) {
    const double r = hi - lo;
    if (x < lo) {
        x = hi - std::fmod(lo - x, r);
    } else if (x > hi) {
        x = lo + std::fmod(x - hi, r);
    }
    return std::clamp(x, lo, hi);
}

std::vector<double> ps_point(const problem::BoundedSpace& space, const State& x_o, const State& x_r,
                             const State& x_p, std::span<const State> pool, const PsParams& p,
                             const Comparator& cmp, RandomSource& rng) {
    check_nonempty(pool, "ge_ps");
    const double c_k = constriction(p.c_a, p.c_b);
    const State& x_g = sel_greedy(pool, cmp);
    std::vector<double> x(space.dimension());
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double range = space.range(d);
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const double v = x_r.x[d] + c_k * dis(x_r.x[d], x_o.x[d], range, p.standard_dis) +
                         p.c_a * u1 * dis(x_p.x[d], x_r.x[d], range, p.standard_dis) +
                         p.c_b * u2 * dis(x_g.x[d], x_r.x[d], range, p.standard_dis);
        x[d] = repair_periodic(v, space.lower(d), space.upper(d));
    }
    return x;
}

State ge_ps(const problem::ConstrainedProblem& problem, const State& x_o, const State& x_r, const State& x_p,
            std::span<const State> pool, const PsParams& p, const Comparator& cmp, RandomSource& rng,
            problem::NfeCounter& nfe) {
    return quality::make_state(problem, ps_point(problem.space, x_o, x_r, x_p, pool, p, cmp, rng), nfe);
}

std::vector<double> sc_point(const problem::BoundedSpace& space, const State& x_r, std::span<const State> pool,
                             int c_ntb, const Comparator& cmp, RandomSource& rng) {
    const State& model = sel_tournament(pool, c_ntb, true, cmp, rng);
    const bool model_better = cmp(model, x_r);
    const State& b = model_better ? model : x_r;
    const State& r = model_better ? x_r : model;
    std::vector<double> x(space.dimension());
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double w = std::abs(b.x[d] - r.x[d]);
        const double lo = std::max(space.lower(d), b.x[d] - w);
        const double hi = std::min(space.upper(d), b.x[d] + w);
        x[d] = rng.uniform(lo, hi);
    }
    return x;
}

State ge_sc(const problem::ConstrainedProblem& problem, const State& x_r, std::span<const State> pool, int c_ntb,
            const Comparator& cmp, RandomSource& rng, problem::NfeCounter& nfe) {
    return quality::make_state(problem, sc_point(problem.space, x_r, pool, c_ntb, cmp, rng), nfe);
}

}  // namespace cgo::toolbox
