#pragma once

// Independent reference computations used by the unit tests and the
// acceptance suite. Nothing here reuses the closed forms or search code under
// test; only the public value types and the generic simplex routine.

#include "cpdetect/baselines.hpp"
#include "cpdetect/nelder_mead.hpp"
#include "cpdetect/objective.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

using namespace cpdetect;

/// Weibull Bayesian-MDL written out term by term from the expanded objective.
inline double weibull_bmdl(const std::vector<SegmentParams>& seg, const std::vector<int>& tau, int T,
                           const std::vector<int>& d, const Hyperparams& h) {
    std::vector<double> b{0.0};
    for (int t : tau) b.push_back(t);
    b.push_back(T);
    const int J = static_cast<int>(tau.size());
    double pen = 0.0;
    if (J == 0) {
        pen = std::log(static_cast<double>(T));
    } else {
        for (int j = 1; j <= J + 1; ++j) pen += std::log(b[j] - b[j - 1]);
        pen += std::log(static_cast<double>(J));
        for (int j = 2; j <= J; ++j) pen += std::log(b[j]);
    }
    double value = pen + J * std::log(T - 1.0);
    for (int j = 1; j <= J + 1; ++j) {
        const double a = seg[j - 1].alpha;
        const double be = seg[j - 1].beta;
        value += std::pow(b[j] / be, a) - std::pow(b[j - 1] / be, a);
        for (int di : d) {
            if (di > b[j - 1] && di <= b[j]) {
                value -= std::log(a) - a * std::log(be) + (a - 1.0) * std::log(static_cast<double>(di));
            }
        }
        value -= (h.phi12 - 1.0) * std::log(a) - h.phi11 * a + (h.phi22 - 1.0) * std::log(be) - h.phi21 * be;
    }
    return value;
}

/// Regime contribution to -log-likelihood - log-prior, computed from the
/// generic intensity and mean functions.
inline double regime_cost(Family f, const SegmentParams& p, int lo, int hi, const ExceedanceData& data,
                          const Hyperparams& h) {
    double v = mean_cumulative(f, p, hi) - mean_cumulative(f, p, lo);
    for (int di : data.event_times()) {
        if (di > lo && di <= hi) v -= std::log(intensity(f, p, di));
    }
    v -= (h.phi12 - 1.0) * std::log(p.alpha) - h.phi11 * p.alpha + (h.phi22 - 1.0) * std::log(p.beta) -
         h.phi21 * p.beta;
    if (p.gamma) v -= (h.phi32 - 1.0) * std::log(*p.gamma) - h.phi31 * *p.gamma;
    return v;
}

/// Minimum regime cost from several simplex starts spread over log-parameter
/// space.
inline double best_regime_cost(Family f, int lo, int hi, const ExceedanceData& data, const Hyperparams& h) {
    const int dim = param_count(f);
    auto cost = [&](const Eigen::VectorXd& x) {
        SegmentParams p{std::exp(x(0)), std::exp(x(1)), std::nullopt};
        if (dim == 3) p.gamma = std::exp(x(2));
        const double v = regime_cost(f, p, lo, hi, data, h);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    NelderMeadOptions nm;
    nm.tolerance = 1e-12;
    nm.max_evaluations = 4000;
    nm.initial_step = 0.7;
    double best = std::numeric_limits<double>::infinity();
    for (double la : {-2.5, -0.5, 1.0}) {
        for (double lb : {-3.0, -1.0, 1.5}) {
            Eigen::VectorXd x(dim);
            x(0) = la;
            x(1) = lb;
            if (dim == 3) x(2) = 0.0;
            auto r = nelder_mead(cost, x, nm);
            r = nelder_mead(cost, r.x, nm);
            best = std::min(best, r.value);
        }
    }
    return best;
}

struct Optimum {
    double bmdl = std::numeric_limits<double>::infinity();
    std::vector<int> tau;
};

/// Exact minimum of the Bayesian-MDL over every configuration with at most
/// max_j change-points (max_j = T - 2 covers all of them), by dynamic
/// programming over regime costs. The objective splits into per-regime terms
/// plus ln J + sum_{j>=2} ln tau_j + J ln(T - 1), which the recursion carries.
inline Optimum exhaustive_bmdl(Family f, const ExceedanceData& data, const Hyperparams& h, int max_j) {
    const int T = data.horizon();
    const double R = penalty_weight(f);
    std::vector<std::vector<double>> seg(static_cast<std::size_t>(T + 1),
                                         std::vector<double>(static_cast<std::size_t>(T + 1), 0.0));
    for (int lo = 0; lo < T; ++lo) {
        for (int hi = lo + 1; hi <= T; ++hi) {
            if (lo == 1) continue;  // tau_1 > 1
            seg[lo][hi] = R * std::log(static_cast<double>(hi - lo)) / 2 + best_regime_cost(f, lo, hi, data, h);
        }
    }
    const double inf = std::numeric_limits<double>::infinity();
    Optimum out{seg[0][T], {}};
    // cost[tau] for the current J, with back pointers
    std::vector<double> cost(static_cast<std::size_t>(T), inf);
    std::vector<std::vector<int>> back;
    for (int t = 2; t < T; ++t) cost[t] = seg[0][t];
    back.push_back(std::vector<int>(static_cast<std::size_t>(T), 0));
    for (int J = 1; J <= max_j && J <= T - 2; ++J) {
        if (J > 1) {
            std::vector<double> next(static_cast<std::size_t>(T), inf);
            std::vector<int> arg(static_cast<std::size_t>(T), 0);
            for (int t = 2; t < T; ++t) {
                for (int s = 2; s < t; ++s) {
                    const double v = cost[s] + seg[s][t] + std::log(static_cast<double>(t));
                    if (v < next[t]) {
                        next[t] = v;
                        arg[t] = s;
                    }
                }
            }
            cost = std::move(next);
            back.push_back(std::move(arg));
        }
        for (int t = 2; t < T; ++t) {
            const double v = cost[t] + seg[t][T] + std::log(static_cast<double>(J)) + J * std::log(T - 1.0);
            if (v < out.bmdl) {
                out.bmdl = v;
                out.tau.assign(static_cast<std::size_t>(J), 0);
                int cur = t;
                for (int j = J; j >= 1; --j) {
                    out.tau[static_cast<std::size_t>(j - 1)] = cur;
                    cur = back[static_cast<std::size_t>(j - 1)][cur];
                }
            }
        }
    }
    return out;
}

/// Optimal partitioning without pruning: O(T^2) dynamic programme.
inline std::vector<int> optimal_partition(const GaussianMeanCost& cost, double beta) {
    const int T = cost.size();
    std::vector<double> F(static_cast<std::size_t>(T + 1), 0.0);
    std::vector<int> last(static_cast<std::size_t>(T + 1), 0);
    F[0] = -beta;
    for (int s = 1; s <= T; ++s) {
        F[s] = std::numeric_limits<double>::infinity();
        for (int t = 0; t < s; ++t) {
            const double v = F[t] + cost(t, s) + beta;
            if (v < F[s]) {
                F[s] = v;
                last[s] = t;
            }
        }
    }
    std::vector<int> cps;
    for (int s = last[T]; s > 0; s = last[s]) cps.insert(cps.begin(), s);
    return cps;
}

/// Penalized cost of an explicit segmentation.
inline double partition_cost(const GaussianMeanCost& cost, const std::vector<int>& cps, double beta) {
    double v = 0.0;
    int prev = 0;
    for (int c : cps) {
        v += cost(prev, c) + beta;
        prev = c;
    }
    return v + cost(prev, cost.size());
}

/// Brute force over all 2^(T-1) segmentations; returns the minimum cost.
inline double enumerate_partitions(const GaussianMeanCost& cost, double beta) {
    const int T = cost.size();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << (T - 1)); ++mask) {
        std::vector<int> cps;
        for (int i = 0; i < T - 1; ++i) {
            if (mask & (1u << i)) cps.push_back(i + 1);
        }
        best = std::min(best, partition_cost(cost, cps, beta));
    }
    return best;
}

}  // namespace oracle
