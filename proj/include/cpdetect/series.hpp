#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cpdetect {

/// Raw measurements y_1..y_T with optional opaque calendar labels.
///
/// Construction validates T >= 2 and that every value is finite; the object is
/// immutable afterwards.
class MeasurementSeries {
public:
    explicit MeasurementSeries(Eigen::VectorXd values, std::vector<std::string> labels = {});

    /// Number of observations T.
    int size() const { return static_cast<int>(values_.size()); }
    const Eigen::VectorXd& values() const { return values_; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool has_labels() const { return !labels_.empty(); }

    /// y_t with 1-based t.
    double at(int t) const { return values_(t - 1); }

private:
    Eigen::VectorXd values_;
    std::vector<std::string> labels_;
};

/// Threshold exceedance events: d_1 < ... < d_n in [1, T] and the counting
/// process N_t.
class ExceedanceData {
public:
    ExceedanceData(double threshold, int horizon, std::vector<int> event_times);

    double threshold() const { return threshold_; }
    int horizon() const { return horizon_; }
    int count() const { return static_cast<int>(event_times_.size()); }
    const std::vector<int>& event_times() const { return event_times_; }

    /// N_t: number of events at or before t. t is clamped to [0, T].
    int cumulative(int t) const;

private:
    double threshold_;
    int horizon_;
    std::vector<int> event_times_;
    std::vector<int> counts_;  // counts_[t] = N_t, t = 0..T
};

/// Events are the t with y_t strictly above the threshold.
ExceedanceData extract_exceedances(const MeasurementSeries& series, double threshold);

/// Arithmetic mean of the series.
double mean_threshold(const MeasurementSeries& series);
double mean_threshold(std::span<const double> values);

/// Reads the `date,value` CSV format (header row required, no missing values).
MeasurementSeries read_series_csv(std::istream& in);
MeasurementSeries read_series_csv_file(const std::string& path);

/// Writes the `date,value` CSV format. Unlabelled series use t as the label.
void write_series_csv(std::ostream& out, const MeasurementSeries& series);

}  // namespace cpdetect
