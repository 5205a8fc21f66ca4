#include "cpdetect/objective.hpp"

#include "cpdetect/errors.hpp"
#include "cpdetect/nelder_mead.hpp"
#include "cpdetect/rng.hpp"

#include <cmath>
#include <limits>

namespace cpdetect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_segments(Family family, std::span<const SegmentParams> segments,
                    const ChangePointConfig& config) {
    if (static_cast<int>(segments.size()) != config.size() + 1) {
        throw InvalidInput("expected J + 1 = " + std::to_string(config.size() + 1) +
                           " segment parameter vectors, got " + std::to_string(segments.size()));
    }
    for (const auto& s : segments) s.validate(family);
}

double gamma_log_kernel(double x, double rate, double shape) {
    return (shape - 1.0) * std::log(x) - rate * x;
}

double segment_log_prior(Family family, const SegmentParams& theta, const Hyperparams& h) {
    double lp = gamma_log_kernel(theta.alpha, h.phi11, h.phi12) +
                gamma_log_kernel(theta.beta, h.phi21, h.phi22);
    if (family == Family::GeneralizedGoelOkumoto) {
        lp += gamma_log_kernel(*theta.gamma, h.phi31, h.phi32);
    }
    return lp;
}

}  // namespace

void Hyperparams::validate() const {
    for (double v : {phi11, phi12, phi21, phi22, phi31, phi32}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw DomainError("hyperparameters must be finite and > 0");
        }
    }
}

Hyperparams Hyperparams::from_list(std::span<const double> values) {
    if (values.size() != 4 && values.size() != 6) {
        throw InvalidInput("hyperparameters need 4 or 6 values");
    }
    Hyperparams h;
    h.phi11 = values[0];
    h.phi12 = values[1];
    h.phi21 = values[2];
    h.phi22 = values[3];
    if (values.size() == 6) {
        h.phi31 = values[4];
        h.phi32 = values[5];
    }
    h.validate();
    return h;
}

bool SegmentFit::all_converged() const {
    for (bool c : converged) {
        if (!c) return false;
    }
    return true;
}

int penalty_weight(Family family) {
    return param_count(family) == 3 ? 3 : 2;
}

double log_likelihood(Family family, std::span<const SegmentParams> segments,
                      const ChangePointConfig& config, const ExceedanceData& data) {
    check_segments(family, segments, config);
    if (config.horizon() != data.horizon()) {
        throw InvalidInput("configuration horizon does not match the data horizon");
    }
    const auto& d = data.event_times();
    double total = 0.0;
    for (int j = 1; j <= config.size() + 1; ++j) {
        const auto& theta = segments[static_cast<std::size_t>(j - 1)];
        const int lo = config.boundary(j - 1);
        const int hi = config.boundary(j);
        total += mean_cumulative(family, theta, lo) - mean_cumulative(family, theta, hi);
        for (int i = data.cumulative(lo); i < data.cumulative(hi); ++i) {
            total += std::log(intensity(family, theta, d[static_cast<std::size_t>(i)]));
        }
    }
    return total;
}

double log_prior(Family family, std::span<const SegmentParams> segments,
                 const ChangePointConfig& config, const Hyperparams& hyper) {
    hyper.validate();
    check_segments(family, segments, config);
    double total = 0.0;
    for (const auto& theta : segments) total += segment_log_prior(family, theta, hyper);
    return total - config.size() * std::log(config.horizon() - 1.0);
}

double penalty(const ChangePointConfig& config, int weight) {
    const int J = config.size();
    if (J == 0) {
        return weight * std::log(static_cast<double>(config.horizon())) / 2.0;
    }
    double total = 0.0;
    for (int j = 1; j <= J + 1; ++j) {
        total += std::log(static_cast<double>(config.boundary(j) - config.boundary(j - 1))) / 2.0;
    }
    total *= weight;
    total += std::log(static_cast<double>(J));
    for (int j = 2; j <= J; ++j) total += std::log(static_cast<double>(config.boundary(j)));
    return total;
}

ObjectiveValue bayesian_mdl(Family family, std::span<const SegmentParams> segments,
                            const ChangePointConfig& config, const ExceedanceData& data,
                            const Hyperparams& hyper) {
    ObjectiveValue v;
    v.log_lik = log_likelihood(family, segments, config, data);
    v.log_prior = log_prior(family, segments, config, hyper);
    v.penalty = penalty(config, penalty_weight(family));
    v.bmdl = v.penalty - v.log_lik - v.log_prior;
    return v;
}

BmdlObjective::BmdlObjective(Family family, const ExceedanceData& data, Hyperparams hyper,
                             FitOptions options)
    : family_(family), data_(&data), hyper_(hyper), options_(options) {
    hyper_.validate();
    const auto& d = data.event_times();
    prefix_log_.assign(d.size() + 1, 0.0);
    prefix_time_.assign(d.size() + 1, 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        prefix_log_[i + 1] = prefix_log_[i] + std::log(static_cast<double>(d[i]));
        prefix_time_[i + 1] = prefix_time_[i] + d[i];
    }
}

double BmdlObjective::segment_cost(const SegmentParams& theta, int lo, int hi) const {
    const int first = data_->cumulative(lo);
    const int last = data_->cumulative(hi);
    const double n = last - first;
    const double sum_log = prefix_log_[static_cast<std::size_t>(last)] -
                           prefix_log_[static_cast<std::size_t>(first)];
    const double sum_time = prefix_time_[static_cast<std::size_t>(last)] -
                            prefix_time_[static_cast<std::size_t>(first)];
    const double a = theta.alpha;
    const double b = theta.beta;
    const double log_a = std::log(a);
    const double log_b = std::log(b);
    const auto& d = data_->event_times();

    double ll = 0.0;
    switch (family_) {
        case Family::Weibull: {
            const double m_hi = std::exp(a * (std::log(static_cast<double>(hi)) - log_b));
            const double m_lo =
                lo > 0 ? std::exp(a * (std::log(static_cast<double>(lo)) - log_b)) : 0.0;
            ll = (m_lo - m_hi) + n * (log_a - a * log_b) + (a - 1.0) * sum_log;
            break;
        }
        case Family::MusaOkumoto: {
            ll = b * (std::log(a + lo) - std::log(a + hi)) + n * log_b;
            for (int i = first; i < last; ++i) ll -= std::log(a + d[static_cast<std::size_t>(i)]);
            break;
        }
        case Family::GoelOkumoto: {
            ll = a * (std::exp(-b * hi) - std::exp(-b * lo)) + n * (log_a + log_b) - b * sum_time;
            break;
        }
        case Family::GeneralizedGoelOkumoto: {
            const double g = *theta.gamma;
            double sum_pow = 0.0;
            for (int i = first; i < last; ++i) {
                sum_pow += std::pow(static_cast<double>(d[static_cast<std::size_t>(i)]), g);
            }
            const double lo_pow = lo > 0 ? std::pow(static_cast<double>(lo), g) : 0.0;
            ll = a * (std::exp(-b * std::pow(static_cast<double>(hi), g)) - std::exp(-b * lo_pow)) +
                 n * (log_a + log_b + std::log(g)) + (g - 1.0) * sum_log - b * sum_pow;
            break;
        }
    }
    return -ll - segment_log_prior(family_, theta, hyper_);
}

double BmdlObjective::expanded(std::span<const SegmentParams> segments,
                               const ChangePointConfig& config) const {
    check_segments(family_, segments, config);
    double total = penalty(config, penalty_weight(family_));
    for (int j = 1; j <= config.size() + 1; ++j) {
        total += segment_cost(segments[static_cast<std::size_t>(j - 1)], config.boundary(j - 1),
                              config.boundary(j));
    }
    return total + config.size() * std::log(config.horizon() - 1.0);
}

SegmentParams BmdlObjective::from_log(const double* x) const {
    SegmentParams theta{std::exp(x[0]), std::exp(x[1]), std::nullopt};
    if (family_ == Family::GeneralizedGoelOkumoto) theta.gamma = std::exp(x[2]);
    return theta;
}

FitResult BmdlObjective::fit(const ChangePointConfig& config, std::uint64_t stream_seed) const {
    if (config.horizon() != data_->horizon()) {
        throw InvalidInput("configuration horizon does not match the data horizon");
    }
    const int dim = param_count(family_);
    Eigen::VectorXd start(dim);
    start(0) = std::log(options_.alpha0);
    start(1) = std::log(options_.beta0);
    if (dim == 3) start(2) = std::log(options_.gamma0);

    NelderMeadOptions nm;
    nm.tolerance = options_.tolerance;
    nm.max_evaluations = options_.max_evaluations;
    nm.initial_step = options_.initial_step;

    Rng rng(stream_seed);
    FitResult out;
    const int regimes = config.size() + 1;
    out.fit.params.reserve(static_cast<std::size_t>(regimes));
    for (int j = 1; j <= regimes; ++j) {
        const int lo = config.boundary(j - 1);
        const int hi = config.boundary(j);
        auto cost = [&](const Eigen::VectorXd& x) {
            const double v = segment_cost(from_log(x.data()), lo, hi);
            return std::isfinite(v) ? v : kInf;
        };
        NelderMeadResult best = nelder_mead(cost, start, nm);
        int evaluations = best.evaluations;
        if (!best.converged) {
            Eigen::VectorXd restart = best.x;
            for (Eigen::Index i = 0; i < restart.size(); ++i) {
                restart(i) += options_.restart_scale * rng.normal();
            }
            NelderMeadResult second = nelder_mead(cost, restart, nm);
            evaluations += second.evaluations;
            if (second.value <= best.value) best = std::move(second);
        }
        out.fit.params.push_back(from_log(best.x.data()));
        out.fit.converged.push_back(best.converged);
        out.fit.evaluations += evaluations;
    }
    out.value = bayesian_mdl(family_, out.fit.params, config, *data_, hyper_);
    return out;
}

FitResult fit_segments(Family family, const ChangePointConfig& config, const ExceedanceData& data,
                       const Hyperparams& hyper, const FitOptions& options,
                       std::uint64_t stream_seed) {
    return BmdlObjective(family, data, hyper, options).fit(config, stream_seed);
}

}  // namespace cpdetect
