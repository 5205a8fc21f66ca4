#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace cpdetect {

struct NelderMeadOptions {
    /// Converged when max f - min f over the simplex drops below this.
    double tolerance = 1e-8;
    int max_evaluations = 500;
    /// Offset applied along each axis to build the initial simplex.
    double initial_step = 1.0;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimization with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2). Non-finite
/// objective values are treated as +inf.
template <typename Objective>
NelderMeadResult nelder_mead(Objective&& objective, const Eigen::VectorXd& start,
                             const NelderMeadOptions& options = {}) {
    const Eigen::Index n = start.size();
    const auto npts = static_cast<std::size_t>(n + 1);
    constexpr double inf = std::numeric_limits<double>::infinity();

    NelderMeadResult result;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++result.evaluations;
        const double v = objective(x);
        return std::isfinite(v) ? v : inf;
    };

    std::vector<Eigen::VectorXd> simplex(npts, start);
    std::vector<double> values(npts);
    for (Eigen::Index i = 0; i < n; ++i) {
        simplex[static_cast<std::size_t>(i + 1)](i) += options.initial_step;
    }
    for (std::size_t i = 0; i < npts; ++i) values[i] = eval(simplex[i]);

    std::vector<std::size_t> order(npts);
    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[npts - 2];

        const double spread = values[worst] - values[best];
        if (std::isfinite(values[best]) && spread < options.tolerance) {
            result.converged = true;
            break;
        }
        if (result.evaluations >= options.max_evaluations) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < npts; ++i) {
            if (i != worst) centroid += simplex[i];
        }
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
        const double f_reflected = eval(reflected);

        if (f_reflected < values[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }

        const bool outside = f_reflected < values[worst];
        const Eigen::VectorXd contracted =
            outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                    : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
        const double f_contracted = eval(contracted);
        if (f_contracted < (outside ? f_reflected : values[worst])) {
            simplex[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }

        for (std::size_t i = 0; i < npts; ++i) {
            if (i == best) continue;
            simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
            values[i] = eval(simplex[i]);
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    result.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
    result.value = *best_it;
    return result;
}

}  // namespace cpdetect
