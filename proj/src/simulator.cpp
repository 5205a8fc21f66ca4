#include "cpdetect/simulator.hpp"

#include "cpdetect/errors.hpp"

#include <cmath>

namespace cpdetect {

namespace {

constexpr int kPresetHorizon = 1096;
constexpr double kPresetSigma = 0.32;

}  // namespace

SimulationSetting::SimulationSetting(std::string name_, std::vector<RegimeSpec> regimes_,
                                     std::uint64_t seed_)
    : name(std::move(name_)), regimes(std::move(regimes_)), seed(seed_) {
    if (regimes.empty()) throw InvalidInput("simulation setting needs at least one regime");
    for (const auto& r : regimes) {
        if (!(r.sigma > 0.0) || r.length < 1 || !std::isfinite(r.mu)) {
            throw InvalidInput("regimes need sigma > 0, finite mu and length >= 1");
        }
    }
}

int SimulationSetting::horizon() const {
    int total = 0;
    for (const auto& r : regimes) total += r.length;
    return total;
}

std::vector<int> SimulationSetting::change_points() const {
    std::vector<int> cps;
    int acc = 0;
    for (std::size_t i = 0; i + 1 < regimes.size(); ++i) {
        acc += regimes[i].length;
        cps.push_back(acc);
    }
    return cps;
}

MeasurementSeries gen_lognormal_series(const SimulationSetting& setting, Rng& rng) {
    Eigen::VectorXd values(setting.horizon());
    Eigen::Index t = 0;
    for (const auto& r : setting.regimes) {
        for (int i = 0; i < r.length; ++i) values(t++) = std::exp(r.mu + r.sigma * rng.normal());
    }
    return MeasurementSeries(std::move(values));
}

SimulationSetting setting_from_change_points(std::string name, int horizon,
                                             const std::vector<int>& change_points,
                                             const std::vector<double>& mu, double sigma,
                                             std::uint64_t seed) {
    if (mu.size() != change_points.size() + 1) {
        throw InvalidInput("need one mu per regime");
    }
    std::vector<RegimeSpec> regimes;
    int previous = 0;
    for (std::size_t j = 0; j <= change_points.size(); ++j) {
        const int end = j < change_points.size() ? change_points[j] : horizon;
        if (end <= previous) throw InvalidInput("change-points must be increasing and < T");
        regimes.push_back({mu[j], sigma, end - previous});
        previous = end;
    }
    return SimulationSetting(std::move(name), std::move(regimes), seed);
}

std::vector<SimulationSetting> preset_settings() {
    std::vector<SimulationSetting> out;
    auto stepped = [](std::size_t regimes) {
        std::vector<double> mu;
        for (std::size_t j = 0; j < regimes; ++j) mu.push_back(3.5 + 0.5 * static_cast<double>(j));
        return mu;
    };
    out.push_back(setting_from_change_points("1cp", kPresetHorizon, {825}, stepped(2), kPresetSigma, 1));
    out.push_back(
        setting_from_change_points("2cp", kPresetHorizon, {365, 730}, stepped(3), kPresetSigma, 2));
    out.push_back(setting_from_change_points("3cp", kPresetHorizon, {548, 823, 973}, stepped(4),
                                             kPresetSigma, 3));

    const std::vector<int> j10{101, 201, 301, 401, 501, 597, 697, 797, 897, 997};
    const std::vector<int> j20{53,  105, 157, 209, 261, 313, 365, 417, 469, 525,
                               576, 629, 681, 731, 785, 837, 889, 941, 993, 1045};
    std::vector<int> j50;
    for (int t = 22; j50.size() < 50; t += 21) j50.push_back(t);

    auto random_mu = [](std::size_t regimes, std::uint64_t seed) {
        Rng rng(derive_seed(seed, 0x6d75));
        std::vector<double> mu;
        for (std::size_t j = 0; j < regimes; ++j) mu.push_back(0.5 + 5.5 * rng.uniform());
        return mu;
    };
    out.push_back(setting_from_change_points("J10", kPresetHorizon, j10, random_mu(11, 10),
                                             kPresetSigma, 10));
    out.push_back(setting_from_change_points("J20", kPresetHorizon, j20, random_mu(21, 20),
                                             kPresetSigma, 20));
    out.push_back(setting_from_change_points("J50", kPresetHorizon, j50, random_mu(51, 50),
                                             kPresetSigma, 50));
    return out;
}

SimulationSetting find_preset(const std::string& name) {
    for (auto& s : preset_settings()) {
        if (s.name == name) return s;
    }
    throw InvalidInput("unknown simulation setting '" + name + "'");
}

}  // namespace cpdetect
