#pragma once

#include "cpdetect/nhpp.hpp"
#include "cpdetect/series.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cpdetect {

/// Gamma prior hyperparameters. phi_i1 is the rate and phi_i2 the shape of
/// the prior on alpha (i = 1), beta (i = 2) and gamma (i = 3, GGO only).
struct Hyperparams {
    double phi11 = 1.0;
    double phi12 = 2.0;
    double phi21 = 3.0;
    double phi22 = 1.2;
    double phi31 = 1.0;
    double phi32 = 1.0;

    void validate() const;

    /// Builds from 4 values (phi11, phi12, phi21, phi22) or 6 (plus phi31, phi32).
    static Hyperparams from_list(std::span<const double> values);
};

/// Penalized negative log-posterior and its parts; bmdl = penalty - log_lik - log_prior.
struct ObjectiveValue {
    double bmdl = 0.0;
    double log_lik = 0.0;
    double log_prior = 0.0;
    double penalty = 0.0;
};

struct SegmentFit {
    std::vector<SegmentParams> params;
    std::vector<bool> converged;
    int evaluations = 0;

    bool all_converged() const;
};

struct FitOptions {
    double alpha0 = 0.1;
    double beta0 = 0.5;
    double gamma0 = 1.0;
    double tolerance = 1e-8;
    int max_evaluations = 500;
    /// Initial simplex offset in log-parameter space.
    double initial_step = 1.0;
    /// Standard deviation of the log-space perturbation used for the restart.
    double restart_scale = 0.5;
};

struct FitResult {
    SegmentFit fit;
    ObjectiveValue value;
};

/// R in the penalty: 2 for two-parameter families, 3 for GGO.
int penalty_weight(Family family);

/// Change-point log-likelihood, summed regime by regime over (tau_{j-1}, tau_j].
double log_likelihood(Family family, std::span<const SegmentParams> segments,
                      const ChangePointConfig& config, const ExceedanceData& data);

/// Gamma log-kernels for every regime minus J ln(T - 1) for the uniform
/// change-point priors.
double log_prior(Family family, std::span<const SegmentParams> segments,
                 const ChangePointConfig& config, const Hyperparams& hyper);

/// MDL penalty R sum ln(tau_j - tau_{j-1})/2 + ln J + sum_{j>=2} ln tau_j.
/// For J = 0 it is R ln(T)/2.
double penalty(const ChangePointConfig& config, int weight);

/// Generic route: penalty - log_likelihood - log_prior.
ObjectiveValue bayesian_mdl(Family family, std::span<const SegmentParams> segments,
                            const ChangePointConfig& config, const ExceedanceData& data,
                            const Hyperparams& hyper);

/// Bayesian-MDL with the per-family closed forms, using prefix sums over the
/// event times. Shared by the expanded objective and the segment fitter.
class BmdlObjective {
public:
    BmdlObjective(Family family, const ExceedanceData& data, Hyperparams hyper,
                  FitOptions options = {});

    Family family() const { return family_; }
    const ExceedanceData& data() const { return *data_; }
    const Hyperparams& hyper() const { return hyper_; }
    const FitOptions& options() const { return options_; }

    /// -log-likelihood - log-prior kernel of one regime (lo, hi].
    double segment_cost(const SegmentParams& theta, int lo, int hi) const;

    /// Expanded per-family objective value (penalty + sum of segment costs
    /// + J ln(T - 1)).
    double expanded(std::span<const SegmentParams> segments, const ChangePointConfig& config) const;

    /// Fits every regime independently by simplex descent in log-parameter
    /// space. `stream_seed` drives the restart perturbation.
    FitResult fit(const ChangePointConfig& config, std::uint64_t stream_seed = 0) const;

private:
    SegmentParams from_log(const double* x) const;

    Family family_;
    const ExceedanceData* data_;
    Hyperparams hyper_;
    FitOptions options_;
    std::vector<double> prefix_log_;  // sum of ln d_i over the first i events
    std::vector<double> prefix_time_;  // sum of d_i over the first i events
};

/// Minimizes the Bayesian-MDL over the regime parameters with tau fixed.
FitResult fit_segments(Family family, const ChangePointConfig& config, const ExceedanceData& data,
                       const Hyperparams& hyper, const FitOptions& options = {},
                       std::uint64_t stream_seed = 0);

}  // namespace cpdetect
