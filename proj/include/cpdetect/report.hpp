#pragma once

#include "cpdetect/genetic.hpp"
#include "cpdetect/nhpp.hpp"
#include "cpdetect/objective.hpp"
#include "cpdetect/series.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cpdetect {

inline constexpr const char* kResultSchemaVersion = "1.0";

struct FitPoint {
    int t = 0;
    int observed = 0;  // N_t
    double mean = 0.0;  // m(t | theta-hat)
    double lower = 0.0;
    double upper = 0.0;
};

struct RegimeRate {
    int start = 0;  // first integer day of the regime
    int end = 0;    // last integer day
    double min = 0.0;
    double mean = 0.0;
    double max = 0.0;
};

struct TraceEntry {
    int generation = 0;
    double bmdl = 0.0;
    std::vector<int> tau;
};

/// Everything behind the four result panels and the regime table.
struct DetectionResult {
    Family family = Family::Weibull;
    ChangePointConfig best{2};
    std::vector<SegmentParams> segments;
    ObjectiveValue value;
    int best_generation = 0;
    std::vector<TraceEntry> trace;
    std::map<int, int> cp_frequency;
    std::vector<FitPoint> fit;
    std::vector<RegimeRate> regimes;
    std::vector<std::string> notes;
};

/// Smallest k with P(X <= k) >= p for X ~ Poisson(mean).
int poisson_quantile(double mean, double p);

/// Pointwise 2.5% / 97.5% Poisson quantiles around each fitted mean, widened
/// to contain the mean itself when it falls between integers near zero.
std::pair<Eigen::VectorXd, Eigen::VectorXd> confidence_bands(const Eigen::VectorXd& mean);

/// Min / arithmetic mean / max of the fitted intensity on each regime's
/// integer days (tau_{j-1}, tau_j], starting no earlier than day 1.
std::vector<RegimeRate> regime_rate_summary(const SegmentedModel& model);

DetectionResult make_detection_result(const GAHistory<BmdlEvaluation>& history, Family family,
                                      const ExceedanceData& data);

/// Most frequent change-point over the per-generation bests; ties go to the
/// smallest location. Returns 0 when the table is empty.
int modal_change_point(const std::map<int, int>& frequency);

/// Fraction of grid points whose observed N_t lies inside the bands.
double band_coverage(const DetectionResult& result);

nlohmann::json segment_params_json(const SegmentParams& theta);

/// Result document with keys spec_version, input, config, best, trace,
/// frequency, fit, regimes.
nlohmann::json to_json(const DetectionResult& result, const nlohmann::json& input,
                       const nlohmann::json& config);

/// Tidy plot data: panel,t,series,value. Panel a holds observed/mean/lower/upper
/// on the day grid, b the per-generation BMDL, c the change-point frequency and
/// d the per-generation J.
void write_plot_csv(std::ostream& out, const DetectionResult& result);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace cpdetect
