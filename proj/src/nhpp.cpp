#include "cpdetect/nhpp.hpp"

#include "cpdetect/errors.hpp"

#include <cmath>

namespace cpdetect {

int param_count(Family family) {
    return family == Family::GeneralizedGoelOkumoto ? 3 : 2;
}

std::string_view family_name(Family family) {
    switch (family) {
        case Family::Weibull: return "weibull";
        case Family::MusaOkumoto: return "musa-okumoto";
        case Family::GoelOkumoto: return "goel-okumoto";
        case Family::GeneralizedGoelOkumoto: return "ggo";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "weibull" || name == "W") return Family::Weibull;
    if (name == "musa-okumoto" || name == "MO") return Family::MusaOkumoto;
    if (name == "goel-okumoto" || name == "GO") return Family::GoelOkumoto;
    if (name == "ggo" || name == "GGO") return Family::GeneralizedGoelOkumoto;
    throw InvalidInput("unknown intensity family '" + std::string(name) + "'");
}

void SegmentParams::validate(Family family) const {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw DomainError("segment parameters alpha and beta must be > 0");
    }
    const bool needs_gamma = family == Family::GeneralizedGoelOkumoto;
    if (needs_gamma != gamma.has_value()) {
        throw DomainError(needs_gamma ? "GGO parameters require gamma"
                                      : "gamma is only defined for the GGO family");
    }
    if (gamma && !(*gamma > 0.0)) {
        throw DomainError("segment parameter gamma must be > 0");
    }
}

double intensity(Family family, const SegmentParams& theta, double t) {
    theta.validate(family);
    const double a = theta.alpha;
    const double b = theta.beta;
    switch (family) {
        case Family::Weibull:
            if (t <= 0.0) {
                if (a < 1.0) throw SingularityError("Weibull intensity diverges at t = 0 for alpha < 1");
                return a == 1.0 ? 1.0 / b : 0.0;
            }
            return (a / b) * std::pow(t / b, a - 1.0);
        case Family::MusaOkumoto:
            return b / (t + a);
        case Family::GoelOkumoto:
            return a * b * std::exp(-b * t);
        case Family::GeneralizedGoelOkumoto: {
            const double g = theta.gamma.value_or(1.0);
            if (t <= 0.0) {
                if (g < 1.0) throw SingularityError("GGO intensity diverges at t = 0 for gamma < 1");
                return g == 1.0 ? a * b : 0.0;
            }
            return a * b * g * std::pow(t, g - 1.0) * std::exp(-b * std::pow(t, g));
        }
    }
    return 0.0;
}

double mean_cumulative(Family family, const SegmentParams& theta, double t) {
    theta.validate(family);
    if (t <= 0.0) return 0.0;
    const double a = theta.alpha;
    const double b = theta.beta;
    switch (family) {
        case Family::Weibull:
            return std::pow(t / b, a);
        case Family::MusaOkumoto:
            return b * std::log1p(t / a);
        case Family::GoelOkumoto:
            return -a * std::expm1(-b * t);
        case Family::GeneralizedGoelOkumoto:
            return -a * std::expm1(-b * std::pow(t, theta.gamma.value_or(1.0)));
    }
    return 0.0;
}

ChangePointConfig::ChangePointConfig(int horizon, std::vector<int> tau)
    : horizon_(horizon), tau_(std::move(tau)) {
    if (horizon_ < 1) {
        throw InvalidInput("change-point horizon must be positive");
    }
    int previous = 1;
    for (int t : tau_) {
        if (t <= previous || t >= horizon_) {
            throw InvalidInput("change-points must be strictly increasing inside (1, T)");
        }
        previous = t;
    }
}

int ChangePointConfig::boundary(int j) const {
    if (j <= 0) return 0;
    if (j > size()) return horizon_;
    return tau_[static_cast<std::size_t>(j - 1)];
}

SegmentedModel::SegmentedModel(Family family_, ChangePointConfig config_,
                               std::vector<SegmentParams> segments_)
    : family(family_), config(std::move(config_)), segments(std::move(segments_)) {
    if (static_cast<int>(segments.size()) != config.size() + 1) {
        throw InvalidInput("segmented model needs J + 1 parameter vectors");
    }
    for (const auto& s : segments) s.validate(family);
}

int regime_of(const ChangePointConfig& config, double t) {
    int j = 1;
    while (j <= config.size() && t >= config.boundary(j)) ++j;
    return j;
}

double segmented_mean(const SegmentedModel& model, double t) {
    const auto& cfg = model.config;
    if (!(t >= 0.0) || t > cfg.horizon()) {
        throw InvalidInput("segmented mean evaluated outside [0, T]");
    }
    const int regime = regime_of(cfg, t);
    double total = 0.0;
    for (int j = 1; j < regime; ++j) {
        const auto& theta = model.segments[static_cast<std::size_t>(j - 1)];
        total += mean_cumulative(model.family, theta, cfg.boundary(j)) -
                 mean_cumulative(model.family, theta, cfg.boundary(j - 1));
    }
    const auto& theta = model.segments[static_cast<std::size_t>(regime - 1)];
    return total + mean_cumulative(model.family, theta, t) -
           mean_cumulative(model.family, theta, cfg.boundary(regime - 1));
}

double segmented_intensity(const SegmentedModel& model, double t) {
    const int regime = regime_of(model.config, t);
    return intensity(model.family, model.segments[static_cast<std::size_t>(regime - 1)], t);
}

}  // namespace cpdetect
