#pragma once

#include "cpdetect/genetic.hpp"
#include "cpdetect/nhpp.hpp"
#include "cpdetect/series.hpp"

#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cpdetect {

// ---------------------------------------------------------------- PELT

enum class PeltCost {
    /// Gaussian likelihood of ln y_t (values must be > 0).
    GaussianOnLog,
    /// Gaussian likelihood of the raw values.
    GaussianOnRaw,
};

struct PeltConfig {
    /// Per-change-point penalty beta; unset means 2 ln T.
    std::optional<double> penalty;
    /// Pruning constant K; 0 is valid for the Gaussian likelihood cost.
    double pruning_k = 0.0;
    PeltCost cost = PeltCost::GaussianOnLog;
};

/// Twice the negative Gaussian log-likelihood of a segment, with the segment
/// mean and a fixed global variance. Segments are addressed as x_{(start+1):end}.
class GaussianMeanCost {
public:
    GaussianMeanCost(std::span<const double> x, double variance);

    double operator()(int start, int end) const;
    int size() const { return static_cast<int>(sum_.size()) - 1; }
    double variance() const { return variance_; }

private:
    std::vector<double> sum_;
    std::vector<double> sum_sq_;
    double variance_;
    double log_norm_;
};

/// Variance estimate sum (x_t - x_{t-1})^2 / (2 (T - 1)); insensitive to mean
/// shifts. Returns 1 for a constant series.
double difference_variance(std::span<const double> x);

/// Transformed data the PELT cost is evaluated on (logs or raw values).
std::vector<double> pelt_input(const MeasurementSeries& series, PeltCost cost);

/// Exact penalized optimal partitioning with PELT pruning. Returns change-points
/// tau (last index of each non-final segment, 1-based) in increasing order.
std::vector<int> pelt(const MeasurementSeries& series, const PeltConfig& cfg = {});

/// Same search on an arbitrary additive cost (used by tests and the oracle).
std::vector<int> pelt_search(const GaussianMeanCost& cost, double beta, double pruning_k);

// ---------------------------------------------------------------- CUSUM

struct CusumConfig {
    std::optional<double> mu0;    // default: series mean
    std::optional<double> sigma;  // default: sqrt(sum (y - mu0)^2 / (T - 1))
    double slack = 0.0;           // K, in measurement units
    std::optional<double> decision_interval;  // H, default 5 sigma
};

struct CusumResult {
    double mu0 = 0.0;
    double sigma = 0.0;
    double slack = 0.0;
    double decision_interval = 0.0;
    std::vector<double> upper;  // C+_t, t = 1..T
    std::vector<double> lower;  // C-_t
    std::vector<int> alarms;    // t with C+_t > H or C-_t > H
    /// Heuristic change-point estimates: for each run of consecutive alarms,
    /// the last time the triggering statistic was zero before the run.
    std::vector<int> change_points;

    int alarm_count() const { return static_cast<int>(alarms.size()); }
};

double cusum_sigma(const MeasurementSeries& series, double mu0);

/// Tabular two-sided CUSUM.
CusumResult cusum(const MeasurementSeries& series, const CusumConfig& cfg = {});

// ---------------------------------------------------------------- MDL GA

struct LognormalFit {
    double mu = 0.0;
    double sigma2 = 0.0;
};

/// Closed-form log-normal MLE: mean and (biased) variance of ln y.
LognormalFit lognormal_mle(std::span<const double> values);

struct FreqMdlValue {
    /// (T/2) ln sigma2 + length, count and location terms. Set to the lowest
    /// double when the pooled variance is zero (see `degenerate`).
    double mdl = 0.0;
    double fit_term = 0.0;       // (T/2) ln sigma2
    double length_term = 0.0;    // sum ln(tau_j - tau_{j-1}) / 2
    double count_term = 0.0;     // ln J
    double location_term = 0.0;  // sum_{j>=2} ln tau_j
    std::vector<double> mu_hat;      // per regime
    std::vector<double> sigma2_hat;  // per regime, around the regime mean
    double pooled_sigma2 = 0.0;
    bool degenerate = false;
};

/// Frequentist MDL of a log-normal series with regime-wise means and a pooled
/// variance. Requires J >= 1 and positive values.
FreqMdlValue freq_mdl(const MeasurementSeries& series, const ChangePointConfig& config);

struct FreqMdlEvaluation {
    FreqMdlValue value;
    /// J = 0 chromosomes are outside the objective's domain.
    bool rejected = false;

    double score() const {
        return rejected ? std::numeric_limits<double>::infinity() : value.mdl;
    }
};

/// Genetic search with freq_mdl as the fitness.
GAHistory<FreqMdlEvaluation> run_freq_mdl_ga(const MeasurementSeries& series, const GAConfig& cfg);

}  // namespace cpdetect
