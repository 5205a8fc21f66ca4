#include "cpdetect/series.hpp"

#include "cpdetect/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace cpdetect {

MeasurementSeries::MeasurementSeries(Eigen::VectorXd values, std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.size() < 2) {
        throw InvalidInput("measurement series needs at least 2 observations, got " +
                           std::to_string(values_.size()));
    }
    if (!values_.allFinite()) {
        throw InvalidInput("measurement series contains non-finite values");
    }
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != values_.size()) {
        throw InvalidInput("label count does not match value count");
    }
}

ExceedanceData::ExceedanceData(double threshold, int horizon, std::vector<int> event_times)
    : threshold_(threshold), horizon_(horizon), event_times_(std::move(event_times)) {
    if (horizon_ < 1) {
        throw InvalidInput("exceedance horizon must be positive");
    }
    counts_.assign(static_cast<std::size_t>(horizon_) + 1, 0);
    int previous = 0;
    for (int d : event_times_) {
        if (d <= previous || d > horizon_) {
            throw InvalidInput("event times must be strictly increasing within [1, T]");
        }
        counts_[static_cast<std::size_t>(d)] += 1;
        previous = d;
    }
    std::partial_sum(counts_.begin(), counts_.end(), counts_.begin());
}

int ExceedanceData::cumulative(int t) const {
    t = std::clamp(t, 0, horizon_);
    return counts_[static_cast<std::size_t>(t)];
}

ExceedanceData extract_exceedances(const MeasurementSeries& series, double threshold) {
    if (!std::isfinite(threshold)) {
        throw InvalidInput("threshold must be finite");
    }
    std::vector<int> events;
    const auto& y = series.values();
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) > threshold) {
            events.push_back(static_cast<int>(i) + 1);
        }
    }
    return ExceedanceData(threshold, series.size(), std::move(events));
}

double mean_threshold(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidInput("mean of an empty series");
    }
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double mean_threshold(const MeasurementSeries& series) {
    return mean_threshold(std::span<const double>(series.values().data(),
                                                  static_cast<std::size_t>(series.size())));
}

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

double parse_value(const std::string& text, int line) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw InvalidInput("line " + std::to_string(line) + ": missing or malformed value '" +
                           text + "'");
    }
    return v;
}

}  // namespace

MeasurementSeries read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InvalidInput("empty CSV input");
    }
    {
        auto comma = line.find(',');
        if (comma == std::string::npos || trim(line.substr(0, comma)) != "date" ||
            trim(line.substr(comma + 1)) != "value") {
            throw InvalidInput("CSV header must be 'date,value'");
        }
    }
    std::vector<std::string> labels;
    std::vector<double> values;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw InvalidInput("line " + std::to_string(lineno) + ": expected two columns");
        }
        labels.push_back(trim(line.substr(0, comma)));
        values.push_back(parse_value(trim(line.substr(comma + 1)), lineno));
    }
    if (values.empty()) {
        throw InvalidInput("CSV contains no observations");
    }
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                          static_cast<Eigen::Index>(values.size()));
    return MeasurementSeries(std::move(v), std::move(labels));
}

MeasurementSeries read_series_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path + "'");
    }
    return read_series_csv(in);
}

void write_series_csv(std::ostream& out, const MeasurementSeries& series) {
    out << "date,value\n";
    std::ostringstream buf;
    buf << std::setprecision(17);
    for (int t = 1; t <= series.size(); ++t) {
        if (series.has_labels()) {
            buf << series.labels()[static_cast<std::size_t>(t - 1)];
        } else {
            buf << t;
        }
        buf << ',' << series.at(t) << '\n';
    }
    out << buf.str();
}

}  // namespace cpdetect
