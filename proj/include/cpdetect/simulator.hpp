#pragma once

#include "cpdetect/rng.hpp"
#include "cpdetect/series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cpdetect {

/// One log-normal regime: ln y ~ N(mu, sigma^2) for `length` consecutive days.
struct RegimeSpec {
    double mu = 0.0;
    double sigma = 1.0;
    int length = 1;
};

struct SimulationSetting {
    std::string name;
    std::vector<RegimeSpec> regimes;
    std::uint64_t seed = 0;

    SimulationSetting(std::string name, std::vector<RegimeSpec> regimes, std::uint64_t seed = 0);

    int horizon() const;
    /// Cumulative regime lengths, excluding the last: the last day of each
    /// non-final regime.
    std::vector<int> change_points() const;
};

/// Independent log-normal draws, regime by regime, exp(mu + sigma z) with z
/// from Rng::normal().
MeasurementSeries gen_lognormal_series(const SimulationSetting& setting, Rng& rng);

/// Bundled experiments: "1cp", "2cp", "3cp" (T = 1096, sigma = 0.32, mu
/// stepping 3.5, 4.0, 4.5, 5.0) and "J10", "J20", "J50" (mu uniform in
/// [0.5, 6] drawn once from the setting seed).
std::vector<SimulationSetting> preset_settings();

/// Looks a preset up by name; throws InvalidInput when unknown.
SimulationSetting find_preset(const std::string& name);

/// Builds a setting from change-point locations and per-regime mu values.
SimulationSetting setting_from_change_points(std::string name, int horizon,
                                             const std::vector<int>& change_points,
                                             const std::vector<double>& mu, double sigma,
                                             std::uint64_t seed = 0);

}  // namespace cpdetect
