#include "cpdetect/errors.hpp"
#include "cpdetect/simulator.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace cpdetect;
using Catch::Approx;

TEST_CASE("presets") {
    const auto all = preset_settings();
    REQUIRE(all.size() == 6);
    const auto one = find_preset("1cp");
    CHECK(one.horizon() == 1096);
    CHECK(one.change_points() == std::vector<int>{825});
    CHECK(find_preset("2cp").change_points() == std::vector<int>{365, 730});
    CHECK(find_preset("3cp").change_points() == std::vector<int>{548, 823, 973});
    const auto three = find_preset("3cp");
    for (std::size_t j = 0; j < three.regimes.size(); ++j) {
        CHECK(three.regimes[j].mu == Approx(3.5 + 0.5 * static_cast<double>(j)));
        CHECK(three.regimes[j].sigma == 0.32);
    }

    const auto j50 = find_preset("J50");
    const auto cps = j50.change_points();
    REQUIRE(cps.size() == 50);
    CHECK(cps[0] == 22);
    CHECK(cps[1] == 43);
    CHECK(cps[2] == 64);
    CHECK(find_preset("J10").change_points().size() == 10);
    CHECK(find_preset("J20").change_points().size() == 20);
    for (const auto& s : all) {
        int total = 0;
        for (const auto& r : s.regimes) {
            total += r.length;
            if (s.name[0] == 'J') {
                CHECK(r.mu >= 0.5);
                CHECK(r.mu <= 6.0);
            }
        }
        CHECK(total == s.horizon());
    }
    CHECK_THROWS_AS(find_preset("4cp"), InvalidInput);
}

TEST_CASE("seeded generation is reproducible") {
    const auto s = find_preset("2cp");
    Rng a(7);
    Rng b(7);
    Rng c(8);
    const auto x = gen_lognormal_series(s, a);
    CHECK(x.values() == gen_lognormal_series(s, b).values());
    CHECK(x.values() != gen_lognormal_series(s, c).values());
    CHECK(x.size() == 1096);
}

TEST_CASE("regime boundaries follow the declared change-points") {
    const auto s = setting_from_change_points("tiny", 9, {3, 6}, {0.0, 1.0, 2.0}, 1e-12);
    Rng rng(1);
    const auto x = gen_lognormal_series(s, rng);
    for (int t = 1; t <= 9; ++t) {
        const double mu = t <= 3 ? 0.0 : (t <= 6 ? 1.0 : 2.0);
        CHECK(x.at(t) == Approx(std::exp(mu)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(setting_from_change_points("bad", 9, {3, 6}, {0.0, 1.0}, 0.3), InvalidInput);
    CHECK_THROWS_AS(setting_from_change_points("bad", 9, {3}, {0.0, 1.0}, 0.0), InvalidInput);
}

TEST_CASE("log-moments converge") {
    const SimulationSetting s("clt", {RegimeSpec{3.5, 0.32, 10000}, RegimeSpec{4.0, 0.5, 10000}});
    Rng rng(3);
    const auto x = gen_lognormal_series(s, rng);
    double m1 = 0;
    double m2 = 0;
    for (int t = 1; t <= 10000; ++t) m1 += std::log(x.at(t));
    for (int t = 10001; t <= 20000; ++t) m2 += std::log(x.at(t));
    CHECK(std::abs(m1 / 10000 - 3.5) <= 3 * 0.32 / 100);
    CHECK(std::abs(m2 / 10000 - 4.0) <= 3 * 0.5 / 100);
    double v = 0;
    for (int t = 1; t <= 10000; ++t) v += std::pow(std::log(x.at(t)) - 3.5, 2);
    // variance of the sample variance is 2 sigma^4 / n
    CHECK(std::abs(v / 10000 - 0.1024) <= 3 * std::sqrt(2.0 / 10000) * 0.1024);
}

TEST_CASE("higher regime mean raises the exceedance rate") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto s = setting_from_change_points("two", 2000, {1000}, {3.5, 4.0}, 0.32, seed);
        Rng rng(seed);
        const auto x = gen_lognormal_series(s, rng);
        const auto d = extract_exceedances(x, mean_threshold(x));
        const int first = d.cumulative(1000);
        const int second = d.count() - first;
        CHECK(second > first);
    }
}
