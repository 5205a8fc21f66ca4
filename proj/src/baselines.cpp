#include "cpdetect/baselines.hpp"

#include "cpdetect/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cpdetect {

GaussianMeanCost::GaussianMeanCost(std::span<const double> x, double variance)
    : sum_(x.size() + 1, 0.0), sum_sq_(x.size() + 1, 0.0), variance_(variance) {
    if (!(variance > 0.0)) throw DomainError("Gaussian cost needs a positive variance");
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum_[i + 1] = sum_[i] + x[i];
        sum_sq_[i + 1] = sum_sq_[i] + x[i] * x[i];
    }
    log_norm_ = std::log(2.0 * std::numbers::pi * variance_);
}

double GaussianMeanCost::operator()(int start, int end) const {
    const auto s = static_cast<std::size_t>(start);
    const auto e = static_cast<std::size_t>(end);
    const double n = end - start;
    const double sum = sum_[e] - sum_[s];
    const double sse = std::max(0.0, (sum_sq_[e] - sum_sq_[s]) - sum * sum / n);
    return sse / variance_ + n * log_norm_;
}

double difference_variance(std::span<const double> x) {
    if (x.size() < 2) return 1.0;
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double d = x[i] - x[i - 1];
        acc += d * d;
    }
    const double v = acc / (2.0 * static_cast<double>(x.size() - 1));
    return v > 0.0 ? v : 1.0;
}

std::vector<double> pelt_input(const MeasurementSeries& series, PeltCost cost) {
    std::vector<double> x(series.values().data(), series.values().data() + series.size());
    if (cost == PeltCost::GaussianOnLog) {
        for (double& v : x) {
            if (!(v > 0.0)) throw InvalidInput("log-data PELT cost needs strictly positive values");
            v = std::log(v);
        }
    }
    return x;
}

std::vector<int> pelt_search(const GaussianMeanCost& cost, double beta, double pruning_k) {
    if (!(beta >= 0.0)) throw InvalidInput("PELT penalty must be >= 0");
    const int T = cost.size();
    std::vector<double> F(static_cast<std::size_t>(T) + 1, 0.0);
    std::vector<int> last(static_cast<std::size_t>(T) + 1, 0);
    F[0] = -beta;
    std::vector<int> candidates{0};
    std::vector<double> totals;
    for (int s = 1; s <= T; ++s) {
        totals.resize(candidates.size());
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const int t = candidates[i];
            totals[i] = F[static_cast<std::size_t>(t)] + cost(t, s);
            if (totals[i] + beta < best) {
                best = totals[i] + beta;
                arg = t;
            }
        }
        F[static_cast<std::size_t>(s)] = best;
        last[static_cast<std::size_t>(s)] = arg;
        std::vector<int> kept;
        kept.reserve(candidates.size() + 1);
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (totals[i] + pruning_k <= best) kept.push_back(candidates[i]);
        }
        kept.push_back(s);
        candidates = std::move(kept);
    }
    std::vector<int> cps;
    for (int s = last[static_cast<std::size_t>(T)]; s > 0; s = last[static_cast<std::size_t>(s)]) {
        cps.push_back(s);
    }
    std::reverse(cps.begin(), cps.end());
    return cps;
}

std::vector<int> pelt(const MeasurementSeries& series, const PeltConfig& cfg) {
    const std::vector<double> x = pelt_input(series, cfg.cost);
    const GaussianMeanCost cost(x, difference_variance(x));
    const double beta = cfg.penalty.value_or(2.0 * std::log(static_cast<double>(series.size())));
    return pelt_search(cost, beta, cfg.pruning_k);
}

double cusum_sigma(const MeasurementSeries& series, double mu0) {
    const auto& y = series.values();
    const double ss = (y.array() - mu0).square().sum();
    return std::sqrt(ss / (series.size() - 1.0));
}

CusumResult cusum(const MeasurementSeries& series, const CusumConfig& cfg) {
    CusumResult r;
    r.mu0 = cfg.mu0.value_or(mean_threshold(series));
    r.sigma = cfg.sigma.value_or(cusum_sigma(series, r.mu0));
    r.slack = cfg.slack;
    r.decision_interval = cfg.decision_interval.value_or(5.0 * r.sigma);
    if (!(r.sigma > 0.0)) throw DomainError("CUSUM needs sigma > 0");
    if (!(r.decision_interval > 0.0)) throw DomainError("CUSUM needs H > 0");
    if (!(r.slack >= 0.0)) throw DomainError("CUSUM needs K >= 0");

    const int T = series.size();
    r.upper.resize(static_cast<std::size_t>(T));
    r.lower.resize(static_cast<std::size_t>(T));
    double up = 0.0;
    double lo = 0.0;
    int up_zero = 0;  // last t with C+ = 0
    int lo_zero = 0;
    bool in_run = false;
    for (int t = 1; t <= T; ++t) {
        const double y = series.at(t);
        up = std::max(0.0, y - (r.mu0 + r.slack) + up);
        lo = std::max(0.0, (r.mu0 - r.slack) - y + lo);
        r.upper[static_cast<std::size_t>(t - 1)] = up;
        r.lower[static_cast<std::size_t>(t - 1)] = lo;
        const bool up_alarm = up > r.decision_interval;
        const bool lo_alarm = lo > r.decision_interval;
        if (up_alarm || lo_alarm) {
            r.alarms.push_back(t);
            if (!in_run) {
                r.change_points.push_back(std::max(1, up_alarm ? up_zero : lo_zero));
            }
            in_run = true;
        } else {
            in_run = false;
        }
        if (up == 0.0) up_zero = t;
        if (lo == 0.0) lo_zero = t;
    }
    r.change_points.erase(std::unique(r.change_points.begin(), r.change_points.end()),
                          r.change_points.end());
    return r;
}

LognormalFit lognormal_mle(std::span<const double> values) {
    if (values.empty()) throw InvalidInput("log-normal fit of an empty sample");
    LognormalFit fit;
    for (double v : values) {
        if (!(v > 0.0)) throw DomainError("log-normal fit needs strictly positive values");
        fit.mu += std::log(v);
    }
    fit.mu /= static_cast<double>(values.size());
    for (double v : values) {
        const double r = std::log(v) - fit.mu;
        fit.sigma2 += r * r;
    }
    fit.sigma2 /= static_cast<double>(values.size());
    return fit;
}

FreqMdlValue freq_mdl(const MeasurementSeries& series, const ChangePointConfig& config) {
    if (config.horizon() != series.size()) {
        throw InvalidInput("configuration horizon does not match the series length");
    }
    const int J = config.size();
    if (J < 1) throw InvalidInput("frequentist MDL needs at least one change-point");

    FreqMdlValue v;
    const double* y = series.values().data();
    double pooled = 0.0;
    for (int j = 1; j <= J + 1; ++j) {
        const int lo = config.boundary(j - 1);
        const int hi = config.boundary(j);
        const LognormalFit fit =
            lognormal_mle(std::span<const double>(y + lo, static_cast<std::size_t>(hi - lo)));
        v.mu_hat.push_back(fit.mu);
        v.sigma2_hat.push_back(fit.sigma2);
        pooled += fit.sigma2 * (hi - lo);
        v.length_term += std::log(static_cast<double>(hi - lo)) / 2.0;
    }
    const double T = series.size();
    v.pooled_sigma2 = pooled / T;
    v.count_term = std::log(static_cast<double>(J));
    for (int j = 2; j <= J; ++j) v.location_term += std::log(static_cast<double>(config.boundary(j)));
    if (v.pooled_sigma2 <= 0.0) {
        v.degenerate = true;
        v.fit_term = std::numeric_limits<double>::lowest();
        v.mdl = std::numeric_limits<double>::lowest();
        return v;
    }
    v.fit_term = T / 2.0 * std::log(v.pooled_sigma2);
    v.mdl = v.fit_term + v.length_term + v.count_term + v.location_term;
    return v;
}

GAHistory<FreqMdlEvaluation> run_freq_mdl_ga(const MeasurementSeries& series, const GAConfig& cfg) {
    if (series.values().minCoeff() <= 0.0) {
        throw InvalidInput("frequentist MDL search needs strictly positive values");
    }
    auto evaluator = [&series](const ChangePointConfig& config, std::uint64_t) {
        if (config.size() == 0) return FreqMdlEvaluation{{}, true};
        return FreqMdlEvaluation{freq_mdl(series, config), false};
    };
    auto history = evolve(series.size(), cfg, evaluator);
    if (history.best().evaluation.rejected) {
        history.notes.push_back("no chromosome with J >= 1 was evaluated");
    }
    return history;
}

}  // namespace cpdetect
