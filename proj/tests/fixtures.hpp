#pragma once

// Random instance generators shared by the unit tests and the acceptance suite.

#include "cpdetect/nhpp.hpp"
#include "cpdetect/rng.hpp"
#include "cpdetect/series.hpp"
#include "cpdetect/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fixture {

using namespace cpdetect;

inline constexpr Family kFamilies[] = {Family::Weibull, Family::MusaOkumoto, Family::GoelOkumoto,
                                       Family::GeneralizedGoelOkumoto};

inline SegmentParams random_params(Family f, Rng& rng) {
    SegmentParams p{std::exp(2.0 * rng.uniform() - 1.0), std::exp(3.0 * rng.uniform() - 1.5), std::nullopt};
    if (f == Family::GoelOkumoto || f == Family::GeneralizedGoelOkumoto) {
        p.alpha *= 30.0;
        p.beta *= 0.02;
    }
    if (f == Family::GeneralizedGoelOkumoto) p.gamma = std::exp(rng.uniform() - 0.5);
    return p;
}

/// Random strictly increasing change-points in (1, T).
inline ChangePointConfig random_config(int T, int max_j, Rng& rng) {
    const int J = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(max_j, T - 2) + 1)));
    std::vector<int> pool;
    for (int t = 2; t < T; ++t) pool.push_back(t);
    for (int i = 0; i < J; ++i) {
        const auto k = i + static_cast<int>(rng.below(pool.size() - static_cast<std::size_t>(i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(k)]);
    }
    std::vector<int> tau(pool.begin(), pool.begin() + J);
    std::sort(tau.begin(), tau.end());
    return ChangePointConfig(T, tau);
}

/// Events on days 1..T, each present with probability `rate`.
inline ExceedanceData random_events(int T, double rate, Rng& rng) {
    std::vector<int> d;
    for (int t = 1; t <= T; ++t) {
        if (rng.bernoulli(rate)) d.push_back(t);
    }
    return ExceedanceData(0.0, T, d);
}

inline std::vector<SegmentParams> random_segments(Family f, int count, Rng& rng) {
    std::vector<SegmentParams> s;
    for (int i = 0; i < count; ++i) s.push_back(random_params(f, rng));
    return s;
}

/// Log-normal toy series with sigma 0.32 and the given regime log-means.
inline MeasurementSeries toy_series(int T, const std::vector<int>& cps, const std::vector<double>& mu,
                                    std::uint64_t seed) {
    const auto setting = setting_from_change_points("toy", T, cps, mu, 0.32, seed);
    Rng rng(seed);
    return gen_lognormal_series(setting, rng);
}

}  // namespace fixture
