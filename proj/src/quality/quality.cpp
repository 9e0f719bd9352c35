#include "cgo/quality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cgo::quality {

double violation(std::span<const problem::ConstraintBounds> bounds, std::span<const double> values) {
    double v = 0.0;
    for (std::size_t j = 0; j < bounds.size(); ++j) {
        const double g = values[j];
        if (g < bounds[j].lower) {
            v += bounds[j].lower - g;
        } else if (g > bounds[j].upper) {
            v += g - bounds[j].upper;
        }
    }
    return v;
}

QualityPair encode(const problem::ConstrainedProblem& problem, std::span<const double> x,
                   problem::NfeCounter& nfe) {
    // Small fixed buffer covers every catalog instance without allocating.
    constexpr std::size_t kStack = 16;
    const std::size_t j = problem.constraint_count();
    double stack[kStack];
    std::vector<double> heap;
    std::span<double> g;
    if (j <= kStack) {
        g = std::span<double>(stack, j);
    } else {
        heap.resize(j);
        g = heap;
    }
    QualityPair q;
    q.v_obj = problem::evaluate_into(problem, x, g, nfe);
    q.v_con = violation(problem.bounds, g);
    return q;
}

State make_state(const problem::ConstrainedProblem& problem, std::vector<double> x,
                 problem::NfeCounter& nfe) {
    State s;
    s.quality = encode(problem, x, nfe);
    s.x = std::move(x);
    return s;
}

bool qc_natural(const QualityPair& a, const QualityPair& b) {
    if (a.v_con < b.v_con) return true;
    return a.v_con == b.v_con && a.v_obj <= b.v_obj;
}

bool qc_penalized(const QualityPair& a, const QualityPair& b, double c_ap) {
    if (c_ap < 0.0) {
        throw std::invalid_argument("qc_penalized: C_AP must be non-negative");
    }
    return a.v_obj + c_ap * a.v_con <= b.v_obj + c_ap * b.v_con;
}

bool qc_stochastic(const QualityPair& a, const QualityPair& b, double c_pf, RandomSource& rng) {
    if (!(c_pf >= 0.0 && c_pf <= 1.0)) {
        throw std::invalid_argument("qc_stochastic: C_PF must lie in [0, 1]");
    }
    if (a.v_con < b.v_con) return true;
    const bool obj = a.v_obj <= b.v_obj;
    if (a.v_con == b.v_con) return obj;
    // a.v_con > b.v_con: the objective clause only applies after a draw
    if (!obj) return false;
    return rng.uniform() < c_pf;
}

bool qc_static_relaxing(const QualityPair& a, const QualityPair& b, double c_er) {
    if (b.v_con > c_er && a.v_con < b.v_con) return true;
    return a.v_con <= c_er && b.v_con <= c_er && a.v_obj <= b.v_obj;
}

Comparator Comparator::penalized(double c_ap) {
    if (c_ap < 0.0) {
        throw std::invalid_argument("penalized comparator: C_AP must be non-negative");
    }
    return Comparator(Kind::penalized, c_ap, nullptr);
}

Comparator Comparator::stochastic(double c_pf, RandomSource& rng) {
    if (!(c_pf >= 0.0 && c_pf <= 1.0)) {
        throw std::invalid_argument("stochastic comparator: C_PF must lie in [0, 1]");
    }
    return Comparator(Kind::stochastic, c_pf, &rng);
}

Comparator Comparator::relaxing(double c_er) {
    if (c_er < 0.0) {
        throw std::invalid_argument("relaxing comparator: C_ER must be non-negative");
    }
    return Comparator(Kind::relaxing, c_er, nullptr);
}

bool Comparator::operator()(const QualityPair& a, const QualityPair& b) const {
    switch (kind_) {
        case Kind::natural:
            return qc_natural(a, b);
        case Kind::penalized:
            return qc_penalized(a, b, param_);
        case Kind::stochastic:
            return qc_stochastic(a, b, param_, *rng_);
        case Kind::relaxing:
            return qc_static_relaxing(a, b, param_);
    }
    return false;
}

std::string rule_name(ComparatorRule rule) {
    switch (rule) {
        case ComparatorRule::O: return "O";
        case ComparatorRule::P: return "P";
        case ComparatorRule::S: return "S";
        case ComparatorRule::RS: return "RS";
        case ComparatorRule::O3R: return "O3R";
    }
    return "?";
}

ComparatorRule rule_from_name(const std::string& name) {
    if (name == "O") return ComparatorRule::O;
    if (name == "P") return ComparatorRule::P;
    if (name == "S") return ComparatorRule::S;
    if (name == "RS") return ComparatorRule::RS;
    if (name == "O3R") return ComparatorRule::O3R;
    throw std::invalid_argument("unknown comparator rule '" + name + "' (expected O, P, S, RS or O3R)");
}

AdjusterState make_adjuster(double c_rre, double c_rnu, double c_rtu, std::int64_t total_cycles,
                            double min_width) {
    if (c_rre < 0.0 || c_rnu < 0.0 || c_rnu > 1.0 || c_rtu < 0.0 || c_rtu > 1.0) {
        throw std::invalid_argument("ratio-reaching adjuster: C_RRE >= 0, C_RNU and C_RTU in [0, 1] required");
    }
    AdjusterState a;
    a.c_rre = c_rre;
    a.c_rnu = c_rnu;
    a.c_rtu = c_rtu;
    a.t_th = std::lround(c_rtu * static_cast<double>(total_cycles));
    a.c_ere = c_rre * min_width / 2.0;
    return a;
}

double ratio_reaching_step(double c_er, double c_ere, std::int64_t k) {
    if (k < 1) {
        throw std::invalid_argument("ratio_reaching_step: k must be at least 1");
    }
    if (c_er == 0.0) return 0.0;
    if (k == 1) return c_ere;
    return c_er * std::pow(c_ere / c_er, 1.0 / static_cast<double>(k));
}

void adjust_ratio_reaching(AdjusterState& adjuster, std::int64_t t, std::span<const State> feedback) {
    if (t <= 0 || t > adjuster.t_th) {
        adjuster.c_er = 0.0;
        return;
    }
    if (feedback.empty()) {
        throw std::runtime_error("ratio-reaching adjuster: empty feedback set");
    }
    if (t == 1) {
        double m = 0.0;
        for (const auto& s : feedback) m = std::max(m, s.quality.v_con);
        adjuster.c_er = m;
        return;
    }
    std::size_t inside = 0;
    for (const auto& s : feedback) {
        if (s.quality.v_con <= adjuster.c_er) ++inside;
    }
    const double c_rnc = static_cast<double>(inside) / static_cast<double>(feedback.size());
    if (c_rnc > adjuster.c_rnu) {
        adjuster.c_er = ratio_reaching_step(adjuster.c_er, adjuster.c_ere, adjuster.t_th - t + 1);
    }
}

bool o3r_selects_relaxing(const problem::ConstrainedProblem& problem) {
    const double w = problem::min_constraint_width(problem);
    const double limit = 2.0 * problem.eps_h;
    return w <= limit + 1e-12 * std::max(1.0, limit);
}

Facilitator::Facilitator(const FacilitatorConfig& config, const problem::ConstrainedProblem& problem,
                         std::int64_t total_cycles, RandomSource& rng) {
    switch (config.rule) {
        case ComparatorRule::O:
            internal_ = Comparator::natural();
            break;
        case ComparatorRule::P:
            internal_ = Comparator::penalized(config.c_ap);
            break;
        case ComparatorRule::S:
            internal_ = Comparator::stochastic(config.c_pf, rng);
            break;
        case ComparatorRule::RS:
            internal_ = Comparator::relaxing(config.c_er);
            break;
        case ComparatorRule::O3R:
            if (o3r_selects_relaxing(problem)) {
                adjuster_ = make_adjuster(config.c_rre, config.c_rnu, config.c_rtu, total_cycles,
                                          problem::min_constraint_width(problem));
                internal_ = Comparator::relaxing(0.0);
            } else {
                internal_ = Comparator::natural();
            }
            break;
    }
}

bool Facilitator::adjust(std::int64_t t, std::span<const State> feedback) {
    if (!adjuster_) return false;
    adjust_ratio_reaching(*adjuster_, t, feedback);
    internal_.set_relaxation(adjuster_->c_er);
    return true;
}

double Facilitator::relaxation() const {
    return internal_.kind() == Comparator::Kind::relaxing ? internal_.parameter() : 0.0;
}

bool Facilitator::keep_best(const State& candidate) {
    if (!best_) {
        best_ = candidate;
        return true;
    }
    if (qc_natural(candidate.quality, best_->quality) && !(candidate.quality == best_->quality)) {
        best_ = candidate;
        return true;
    }
    return false;
}

}  // namespace cgo::quality
