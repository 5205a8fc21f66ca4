#include "cpdetect/report.hpp"

#include "cpdetect/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <unistd.h>

namespace cpdetect {

int poisson_quantile(double mean, double p) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("Poisson mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    // Mass more than 12 sd below the mean is negligible at double precision.
    const int start = std::max(0, static_cast<int>(std::floor(mean - 12.0 * std::sqrt(mean) - 12.0)));
    const double log_mean = std::log(mean);
    double cdf = 0.0;
    for (int k = start;; ++k) {
        cdf += std::exp(-mean + k * log_mean - std::lgamma(k + 1.0));
        if (cdf >= p) return k;
        if (k > mean + 40.0 * std::sqrt(mean) + 40.0) return k;
    }
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> confidence_bands(const Eigen::VectorXd& mean) {
    Eigen::VectorXd lower(mean.size());
    Eigen::VectorXd upper(mean.size());
    for (Eigen::Index i = 0; i < mean.size(); ++i) {
        lower(i) = std::min<double>(poisson_quantile(mean(i), 0.025), mean(i));
        upper(i) = std::max<double>(poisson_quantile(mean(i), 0.975), mean(i));
    }
    return {std::move(lower), std::move(upper)};
}

std::vector<RegimeRate> regime_rate_summary(const SegmentedModel& model) {
    std::vector<RegimeRate> out;
    const auto& cfg = model.config;
    for (int j = 1; j <= cfg.size() + 1; ++j) {
        RegimeRate r;
        r.start = std::max(cfg.boundary(j - 1) + 1, 1);
        r.end = cfg.boundary(j);
        r.min = std::numeric_limits<double>::infinity();
        r.max = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        const auto& theta = model.segments[static_cast<std::size_t>(j - 1)];
        for (int t = r.start; t <= r.end; ++t) {
            const double lambda = intensity(model.family, theta, t);
            r.min = std::min(r.min, lambda);
            r.max = std::max(r.max, lambda);
            sum += lambda;
        }
        r.mean = sum / (r.end - r.start + 1);
        out.push_back(r);
    }
    return out;
}

DetectionResult make_detection_result(const GAHistory<BmdlEvaluation>& history, Family family,
                                      const ExceedanceData& data) {
    DetectionResult r;
    const auto& best = history.best();
    r.family = family;
    r.best = best.best;
    r.segments = best.evaluation.fit.params;
    r.value = best.evaluation.value;
    r.best_generation = best.generation;
    r.cp_frequency = history.cp_frequency;
    r.notes = history.notes;
    for (const auto& g : history.generations) {
        r.trace.push_back({g.generation, g.evaluation.value.bmdl, g.best.tau()});
    }

    const SegmentedModel model(family, r.best, r.segments);
    const int T = data.horizon();
    Eigen::VectorXd m(T);
    for (int t = 1; t <= T; ++t) m(t - 1) = segmented_mean(model, t);
    const auto [lower, upper] = confidence_bands(m);
    r.fit.reserve(static_cast<std::size_t>(T));
    for (int t = 1; t <= T; ++t) {
        r.fit.push_back({t, data.cumulative(t), m(t - 1), lower(t - 1), upper(t - 1)});
    }
    r.regimes = regime_rate_summary(model);
    return r;
}

int modal_change_point(const std::map<int, int>& frequency) {
    int best = 0;
    int count = 0;
    for (const auto& [tau, c] : frequency) {
        if (c > count) {
            best = tau;
            count = c;
        }
    }
    return best;
}

double band_coverage(const DetectionResult& result) {
    if (result.fit.empty()) return 0.0;
    int inside = 0;
    for (const auto& p : result.fit) {
        if (p.lower <= p.observed && p.observed <= p.upper) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(result.fit.size());
}

nlohmann::json segment_params_json(const SegmentParams& theta) {
    nlohmann::json j{{"alpha", theta.alpha}, {"beta", theta.beta}};
    if (theta.gamma) j["gamma"] = *theta.gamma;
    return j;
}

nlohmann::json to_json(const DetectionResult& result, const nlohmann::json& input,
                       const nlohmann::json& config) {
    using nlohmann::json;
    json best{{"J", result.best.size()},
              {"tau", result.best.tau()},
              {"bmdl", result.value.bmdl},
              {"log_lik", result.value.log_lik},
              {"log_prior", result.value.log_prior},
              {"penalty", result.value.penalty},
              {"generation", result.best_generation},
              {"family", std::string(family_name(result.family))}};
    json segments = json::array();
    for (const auto& s : result.segments) segments.push_back(segment_params_json(s));
    best["segments"] = std::move(segments);

    json trace = json::array();
    for (const auto& e : result.trace) {
        trace.push_back({{"generation", e.generation},
                         {"bmdl", e.bmdl},
                         {"J", e.tau.size()},
                         {"tau", e.tau}});
    }
    json frequency = json::array();
    for (const auto& [tau, count] : result.cp_frequency) {
        frequency.push_back({{"tau", tau}, {"count", count}});
    }
    json fit = json::array();
    for (const auto& p : result.fit) {
        fit.push_back({{"t", p.t},
                       {"observed", p.observed},
                       {"m", p.mean},
                       {"lower", p.lower},
                       {"upper", p.upper}});
    }
    json regimes = json::array();
    for (const auto& r : result.regimes) {
        regimes.push_back(
            {{"start", r.start}, {"end", r.end}, {"min", r.min}, {"mean", r.mean}, {"max", r.max}});
    }
    json out{{"spec_version", kResultSchemaVersion},
             {"input", input},
             {"config", config},
             {"best", std::move(best)},
             {"trace", std::move(trace)},
             {"frequency", std::move(frequency)},
             {"fit", std::move(fit)},
             {"regimes", std::move(regimes)}};
    if (!result.notes.empty()) out["input"]["notes"] = result.notes;
    return out;
}

void write_plot_csv(std::ostream& out, const DetectionResult& result) {
    std::ostringstream buf;
    buf << std::setprecision(17);
    buf << "panel,t,series,value\n";
    auto row = [&](char panel, int t, const char* series, double value) {
        if (!std::isfinite(value)) {
            throw DomainError(std::string("non-finite plot value in series ") + series);
        }
        buf << panel << ',' << t << ',' << series << ',' << value << '\n';
    };
    for (const auto& p : result.fit) row('a', p.t, "observed", p.observed);
    for (const auto& p : result.fit) row('a', p.t, "m", p.mean);
    for (const auto& p : result.fit) row('a', p.t, "lower", p.lower);
    for (const auto& p : result.fit) row('a', p.t, "upper", p.upper);
    for (const auto& e : result.trace) row('b', e.generation, "bmdl", e.bmdl);
    for (const auto& [tau, count] : result.cp_frequency) row('c', tau, "frequency", count);
    for (const auto& e : result.trace) row('d', e.generation, "J", static_cast<double>(e.tau.size()));
    out << buf.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InvalidInput("cannot write '" + tmp.string() + "'");
        f << contents;
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw InvalidInput("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw InvalidInput("cannot replace '" + path + "': " + ec.message());
    }
}

}  // namespace cpdetect
