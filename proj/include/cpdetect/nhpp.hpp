#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cpdetect {

/// NHPP intensity families: Weibull, Musa-Okumoto, Goel-Okumoto and the
/// generalized Goel-Okumoto.
enum class Family { Weibull, MusaOkumoto, GoelOkumoto, GeneralizedGoelOkumoto };

/// 2 for W/MO/GO, 3 for GGO.
int param_count(Family family);

/// CLI spelling: weibull, musa-okumoto, goel-okumoto, ggo.
std::string_view family_name(Family family);
Family parse_family(std::string_view name);

/// Per-regime parameter vector. gamma is present iff the family is GGO.
struct SegmentParams {
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> gamma;

    /// Throws DomainError when a parameter is nonpositive or gamma's presence
    /// does not match the family.
    void validate(Family family) const;
};

/// Intensity lambda(t | theta). Throws SingularityError for t <= 0 where the
/// intensity diverges (W with alpha < 1, GGO with gamma < 1).
double intensity(Family family, const SegmentParams& theta, double t);

/// Mean cumulative function m(t | theta); m(0) = 0 for every family.
double mean_cumulative(Family family, const SegmentParams& theta, double t);

/// Change-point chromosome (J, tau_1..tau_J) with 1 < tau_1 < ... < tau_J < T.
class ChangePointConfig {
public:
    explicit ChangePointConfig(int horizon, std::vector<int> tau = {});

    int horizon() const { return horizon_; }
    int size() const { return static_cast<int>(tau_.size()); }  // J
    const std::vector<int>& tau() const { return tau_; }

    /// tau_j with tau_0 = 0 and tau_{J+1} = T, j in [0, J+1].
    int boundary(int j) const;

    friend bool operator==(const ChangePointConfig&, const ChangePointConfig&) = default;
    friend auto operator<=>(const ChangePointConfig&, const ChangePointConfig&) = default;

private:
    int horizon_;
    std::vector<int> tau_;
};

/// A family, a configuration and one parameter vector per regime.
struct SegmentedModel {
    Family family;
    ChangePointConfig config;
    std::vector<SegmentParams> segments;

    SegmentedModel(Family family, ChangePointConfig config, std::vector<SegmentParams> segments);
};

/// Index j (1-based) of the regime containing t, using tau_{j-1} <= t < tau_j
/// with the last regime closed at T.
int regime_of(const ChangePointConfig& config, double t);

/// Piecewise mean function of the segmented process, continuous at each tau_j.
double segmented_mean(const SegmentedModel& model, double t);

/// Piecewise intensity of the segmented process.
double segmented_intensity(const SegmentedModel& model, double t);

}  // namespace cpdetect
