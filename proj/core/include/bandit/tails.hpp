#pragma once

#include <cstdint>
#include <vector>

#include "bandit/sim.hpp"

namespace bandit {

/// Log-spaced evaluation points across the deviation window
/// D_gamma(T) = [log^{1+gamma}(T), (1-gamma) T].
struct DeviationGrid {
    double gamma = 0.0;
    std::uint64_t horizon = 0;
    std::vector<double> points;  // strictly increasing, endpoints included
};

DeviationGrid deviation_grid(std::uint64_t horizon, double gamma, std::size_t num_points);

/// Empirical exceedance curve p_hat(x) = P(N_i(T) > x) with Wilson 95%
/// intervals, one point per grid value.
struct TailCurve {
    std::size_t arm = 0;  // 1-based arm label, matching the N_i columns
    DeviationGrid grid;
    std::uint64_t replications = 0;
    struct Point {
        double x;
        double p_hat;
        double ci_lo;
        double ci_hi;
        std::uint64_t exceedances;
    };
    std::vector<Point> points;
};

/// Tabulates strict exceedances of arm `arm_label`'s final pull count over
/// the grid. The event is N_i(T) > x, strict, per the tail statements.
TailCurve tail_curve(const BatchResult& batch, std::size_t arm_label, const DeviationGrid& grid);

/// Wilson score interval at 95% for successes/trials.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// OLS fit of log p_hat against log x over the reliable part of the curve.
struct ExponentEstimate {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double x_lo = 0.0;  // fit range actually used
    double x_hi = 0.0;
    std::size_t n_points = 0;
    std::uint64_t min_exceedances = 0;
};

/// Fits the tail exponent using only grid points with at least
/// `min_exceedances` exceedances. Throws InsufficientData with fewer than
/// 3 reliable points.
ExponentEstimate tail_exponent(const TailCurve& curve, std::uint64_t min_exceedances = 50);

}  // namespace bandit
