#include "cpdetect/errors.hpp"
#include "cpdetect/report.hpp"

#include "fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cpdetect;
using Catch::Approx;

namespace {

// Smallest k with CDF >= p, accumulating the pmf by the ratio recursion.
int quantile_by_recursion(double mean, double p) {
    double pmf = std::exp(-mean);
    double cdf = pmf;
    int k = 0;
    while (cdf < p) {
        ++k;
        pmf *= mean / k;
        cdf += pmf;
    }
    return k;
}

DetectionResult small_result() {
    const auto series = fixture::toy_series(80, {40}, {3.3, 4.3}, 5);
    const auto data = extract_exceedances(series, mean_threshold(series));
    GAConfig cfg;
    cfg.population_size = 12;
    cfg.generations = 6;
    cfg.seed = 3;
    return make_detection_result(run_ga(data, Family::Weibull, Hyperparams{}, cfg), Family::Weibull, data);
}

}  // namespace

TEST_CASE("Poisson quantiles") {
    CHECK(poisson_quantile(0.0, 0.025) == 0);
    CHECK(poisson_quantile(0.0, 0.975) == 0);
    for (double m : {0.05, 0.7, 3.0, 12.5, 29.9, 30.1, 55.0, 100.0, 400.0}) {
        CHECK(poisson_quantile(m, 0.025) == quantile_by_recursion(m, 0.025));
        CHECK(poisson_quantile(m, 0.975) == quantile_by_recursion(m, 0.975));
    }
    CHECK(std::abs(poisson_quantile(100.0, 0.025) - 80.4) <= 1.5);
    CHECK(std::abs(poisson_quantile(100.0, 0.975) - 119.6) <= 1.5);
    CHECK_THROWS_AS(poisson_quantile(-1.0, 0.5), DomainError);
}

TEST_CASE("confidence bands") {
    Eigen::VectorXd m = Eigen::VectorXd::LinSpaced(400, 0.0, 250.0);
    const auto [lo, hi] = confidence_bands(m);
    CHECK(lo(0) == 0.0);
    CHECK(hi(0) == 0.0);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        CHECK(lo(i) <= m(i));
        CHECK(m(i) <= hi(i));
        if (i > 0) {
            CHECK(lo(i) >= lo(i - 1));
            CHECK(hi(i) >= hi(i - 1));
        }
    }
}

TEST_CASE("regime rate summary") {
    const SegmentedModel hpp(Family::Weibull, ChangePointConfig(30, {10}), {{1, 2, {}}, {1, 0.5, {}}});
    const auto r = regime_rate_summary(hpp);
    REQUIRE(r.size() == 2);
    CHECK(r[0].start == 1);
    CHECK(r[0].end == 10);
    CHECK(r[0].min == Approx(0.5));
    CHECK(r[0].mean == Approx(0.5));
    CHECK(r[0].max == Approx(0.5));
    CHECK(r[1].start == 11);
    CHECK(r[1].mean == Approx(2.0));

    const SegmentedModel lin(Family::Weibull, ChangePointConfig(3), {{2, 1, {}}});
    const auto s = regime_rate_summary(lin);
    CHECK(s[0].min == Approx(2.0));
    CHECK(s[0].mean == Approx(4.0));
    CHECK(s[0].max == Approx(6.0));

    // singular at zero, so the grid starts at day 1
    const SegmentedModel sing(Family::Weibull, ChangePointConfig(20, {5}), {{0.5, 1, {}}, {0.7, 3, {}}});
    const auto u = regime_rate_summary(sing);
    CHECK(u[0].max == Approx(intensity(Family::Weibull, {0.5, 1, {}}, 1.0)));
    CHECK(u[0].min == Approx(intensity(Family::Weibull, {0.5, 1, {}}, 5.0)));
    CHECK(u[1].max == Approx(intensity(Family::Weibull, {0.7, 3, {}}, 6.0)));
    CHECK(u[1].min == Approx(intensity(Family::Weibull, {0.7, 3, {}}, 20.0)));
}

TEST_CASE("modal change-point") {
    CHECK(modal_change_point({}) == 0);
    CHECK(modal_change_point({{10, 3}, {20, 5}, {30, 5}}) == 20);
}

TEST_CASE("detection result invariants") {
    const auto r = small_result();
    REQUIRE(r.fit.size() == 80);
    for (const auto& p : r.fit) {
        CHECK(p.lower <= p.mean);
        CHECK(p.mean <= p.upper);
    }
    for (const auto& g : r.regimes) {
        CHECK(g.min <= g.mean);
        CHECK(g.mean <= g.max);
    }
    for (const auto& [tau, count] : r.cp_frequency) {
        bool seen = false;
        for (const auto& e : r.trace) seen = seen || std::find(e.tau.begin(), e.tau.end(), tau) != e.tau.end();
        CHECK(seen);
        CHECK(count > 0);
    }
    CHECK(band_coverage(r) >= 0.0);
    CHECK(band_coverage(r) <= 1.0);
}

TEST_CASE("JSON document round-trips byte for byte") {
    const auto r = small_result();
    const auto doc = to_json(r, {{"path", "x.csv"}}, {{"seed", 3}});
    for (const char* key : {"spec_version", "input", "config", "best", "trace", "frequency", "fit", "regimes"}) {
        CHECK(doc.contains(key));
    }
    CHECK(doc["spec_version"] == kResultSchemaVersion);
    const std::string text = doc.dump(2);
    CHECK(nlohmann::json::parse(text).dump(2) == text);
    CHECK(doc["best"]["segments"].size() == r.segments.size());
}

TEST_CASE("plot data") {
    const auto r = small_result();
    std::ostringstream out;
    write_plot_csv(out, r);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "panel,t,series,value");
    int a = 0;
    int b = 0;
    int c = 0;
    int d = 0;
    while (std::getline(in, line)) {
        CHECK(line.find("nan") == std::string::npos);
        CHECK(line.find("inf") == std::string::npos);
        switch (line[0]) {
            case 'a': ++a; break;
            case 'b': ++b; break;
            case 'c': ++c; break;
            case 'd': ++d; break;
            default: FAIL("unexpected panel " << line);
        }
    }
    CHECK(a == 4 * 80);
    CHECK(b == static_cast<int>(r.trace.size()));
    CHECK(c == static_cast<int>(r.cp_frequency.size()));
    CHECK(d == static_cast<int>(r.trace.size()));

    auto broken = r;
    broken.fit[3].mean = std::nan("");
    std::ostringstream sink;
    CHECK_THROWS_AS(write_plot_csv(sink, broken), DomainError);
}

TEST_CASE("atomic file writes") {
    const auto dir = std::filesystem::temp_directory_path() / "cpdetect_report_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "out.txt").string();
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    std::ifstream f(path);
    std::string text;
    std::getline(f, text);
    CHECK(text == "second");
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
    CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "x.txt").string(), "x"), InvalidInput);
    std::filesystem::remove_all(dir);
}
