#include "bandit/tails.hpp"

#include <algorithm>
#include <cmath>

namespace bandit {

DeviationGrid deviation_grid(std::uint64_t horizon, double gamma, std::size_t num_points) {
    if (horizon < 3) throw ConfigError("deviation grid requires T >= 3");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0,1)");
    if (num_points < 10) throw ConfigError("deviation grid needs at least 10 points");

    const double lo = std::pow(std::log(static_cast<double>(horizon)), 1.0 + gamma);
    const double hi = (1.0 - gamma) * static_cast<double>(horizon);
    if (!(lo < hi))
        throw ConfigError("empty deviation window: log^{1+gamma}(T) >= (1-gamma)T");

    DeviationGrid g;
    g.gamma = gamma;
    g.horizon = horizon;
    g.points.resize(num_points);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < num_points; ++i)
        g.points[i] =
            std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                               static_cast<double>(num_points - 1));
    g.points.front() = lo;
    g.points.back() = hi;
    return g;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

TailCurve tail_curve(const BatchResult& batch, std::size_t arm_label, const DeviationGrid& grid) {
    if (batch.records.empty()) throw ConfigError("tail curve over an empty batch");
    const std::size_t K = batch.records.front().pulls.size();
    if (arm_label < 1 || arm_label > K)
        throw ConfigError("arm label out of range: " + std::to_string(arm_label));

    std::vector<std::uint64_t> counts;
    counts.reserve(batch.records.size());
    for (const auto& rec : batch.records) counts.push_back(rec.pulls[arm_label - 1]);
    std::sort(counts.begin(), counts.end());

    TailCurve curve;
    curve.arm = arm_label;
    curve.grid = grid;
    curve.replications = batch.records.size();
    curve.points.reserve(grid.points.size());
    const double R = static_cast<double>(counts.size());
    for (double x : grid.points) {
        // strict event N_i(T) > x
        const auto it = std::upper_bound(counts.begin(), counts.end(), x);
        const auto exceed = static_cast<std::uint64_t>(counts.end() - it);
        const auto [lo, hi] = wilson_interval(exceed, counts.size());
        curve.points.push_back({x, static_cast<double>(exceed) / R, lo, hi, exceed});
    }
    return curve;
}

ExponentEstimate tail_exponent(const TailCurve& curve, std::uint64_t min_exceedances) {
    std::vector<double> lx, ly;
    for (const auto& pt : curve.points) {
        if (pt.exceedances < min_exceedances) continue;
        lx.push_back(std::log(pt.x));
        ly.push_back(std::log(pt.p_hat));
    }
    const std::size_t n = lx.size();
    if (n < 3)
        throw InsufficientData("tail exponent fit needs >= 3 grid points with >= " +
                               std::to_string(min_exceedances) + " exceedances; have " +
                               std::to_string(n));

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ly[i] - my - slope * (lx[i] - mx);
        ssr += resid * resid;
    }
    const double sigma2 = n > 2 ? ssr / static_cast<double>(n - 2) : 0.0;

    ExponentEstimate est;
    est.slope = slope;
    est.stderr_slope = std::sqrt(sigma2 / sxx);
    est.x_lo = std::exp(lx.front());
    est.x_hi = std::exp(lx.back());
    est.n_points = n;
    est.min_exceedances = min_exceedances;
    return est;
}

}  // namespace bandit
