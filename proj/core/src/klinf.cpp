#include "bandit/klinf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bandit/simplex_opt.hpp"

namespace bandit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Right endpoint of the dual domain is open; this proxy keeps every
// log argument strictly positive. See the boundary handling notes below.
constexpr double kBoundaryShrink = 1.0 - 1e-12;

double dual_objective(std::span<const double> xs, std::span<const double> ws, double x,
                      double lambda) {
    double v = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ws[i] == 0.0) continue;
        v += ws[i] * std::log1p(-lambda * (xs[i] - x));
    }
    return v;
}

// d/dlambda of the dual objective.
double dual_derivative(std::span<const double> xs, std::span<const double> ws, double x,
                       double lambda) {
    double g = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ws[i] == 0.0) continue;
        g += ws[i] * (x - xs[i]) / (1.0 - lambda * (xs[i] - x));
    }
    return g;
}

}  // namespace

namespace detail {

DualEval klinf_dual(std::span<const double> xs, std::span<const double> ws, double x,
                    double x_top) {
    double mean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) mean += ws[i] * xs[i];
    if (x <= mean) return {0.0, 0.0};
    if (x > x_top) return {kInf, kNaN};
    if (x == x_top) {
        // Convention at the right edge: condition all mass onto x_top.
        double top_mass = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (xs[i] == x_top) top_mass += ws[i];
        return {top_mass > 0.0 ? -std::log(top_mass) : kInf, kNaN};
    }

    const double lambda_hi = kBoundaryShrink / (x_top - x);

    // Locate the effective (positive-mass) extremes.
    std::size_t lo = 0;
    while (ws[lo] == 0.0) ++lo;
    std::size_t hi = xs.size() - 1;
    while (ws[hi] == 0.0) --hi;

    double lambda;
    if (lo == hi || xs[hi] <= x) {
        // All mass at or below x: the objective is nondecreasing in lambda.
        lambda = lambda_hi;
    } else if (hi == lo + 1) {
        // Two effective points straddling x: the stationarity condition is
        // linear in lambda, so solve it directly instead of bisecting.
        const double u = x - xs[lo];
        const double v = xs[hi] - x;
        lambda = std::min((ws[lo] * u - ws[hi] * v) / (u * v), lambda_hi);
    } else {
        double a = 0.0, b = lambda_hi;
        if (dual_derivative(xs, ws, x, b) >= 0.0) {
            lambda = b;
        } else {
            for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
                const double m = 0.5 * (a + b);
                if (dual_derivative(xs, ws, x, m) > 0.0)
                    a = m;
                else
                    b = m;
            }
            lambda = 0.5 * (a + b);
        }
    }
    const double value = dual_objective(xs, ws, x, lambda);
    return {value < 0.0 ? 0.0 : value, lambda};
}

}  // namespace detail

namespace {

// Reconstructs the primal optimizer q_i = p_i / (1 - lambda (x_i - x)) with
// any residual mass placed at x_top, then normalizes explicitly.
FiniteDist dual_minimizer(const FiniteDist& p, double x, double x_top, double lambda) {
    std::vector<double> pts = p.support();
    std::vector<double> w(pts.size());
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        w[i] = p.weights()[i] / (1.0 - lambda * (pts[i] - x));
        total += w[i];
    }
    const double residual = 1.0 - total;
    if (residual > 1e-14) {
        if (pts.back() == x_top) {
            w.back() += residual;
        } else {
            pts.push_back(x_top);
            w.push_back(residual);
        }
        total = 1.0;
    }
    for (auto& wi : w) wi = std::max(wi, 0.0) / total;
    return FiniteDist(std::move(pts), std::move(w));
}

KlinfResult finish_dual(const FiniteDist& p, double x, double x_top,
                        const detail::DualEval& ev) {
    KlinfResult r;
    r.value = ev.value;
    if (!std::isnan(ev.lambda)) {
        r.dual_lambda = ev.lambda;
        if (std::isfinite(ev.value)) r.minimizer = dual_minimizer(p, x, x_top, ev.lambda);
    } else if (x == x_top && std::isfinite(ev.value)) {
        r.minimizer = FiniteDist::point_mass(x_top);
    }
    return r;
}

}  // namespace

KlinfResult klinf_finite(const FiniteDist& p, double x, const FiniteAlphabet& alphabet) {
    for (double s : p.support())
        if (!std::binary_search(alphabet.points.begin(), alphabet.points.end(), s))
            throw InvalidQuery("distribution support is not contained in the alphabet");
    const double x_top = alphabet.points.back();
    return finish_dual(p, x, x_top, detail::klinf_dual(p.support(), p.weights(), x, x_top));
}

KlinfResult klinf_bounded(const FiniteDist& p, double x, double a, double b) {
    if (!(a < b)) throw InvalidQuery("bounded-support query requires a < b");
    if (p.min_support() < a || p.max_support() > b)
        throw InvalidQuery("distribution support is not contained in [a,b]");
    return finish_dual(p, x, b, detail::klinf_dual(p.support(), p.weights(), x, b));
}

KlinfResult klinf_moment(const FiniteDist& p, double x, double bound, double epsilon,
                         std::size_t resolution) {
    const MomentBounded cls(bound, epsilon);
    const double power = 1.0 + epsilon;
    if (p.abs_moment(power) > bound + 1e-12)
        throw InvalidQuery("distribution violates the moment bound");

    KlinfResult r;
    if (x <= p.mean()) {
        r.value = 0.0;
        r.dual_lambda = std::nullopt;
        r.minimizer = p;
        return r;
    }

    // Search grid: supp(p) plus a uniform grid over the reach of the moment
    // bound. Mass relevant to the projection is confined to this interval.
    const double reach = std::pow(bound, 1.0 / power);
    if (x > reach) throw InfeasibleQuery("target mean exceeds the grid reach of the moment bound");

    std::vector<double> grid = p.support();
    if (resolution >= 2) {
        for (std::size_t i = 0; i < resolution; ++i) {
            grid.push_back(-reach +
                           (2.0 * reach) * static_cast<double>(i) /
                               static_cast<double>(resolution - 1));
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    detail::KlProgram prog;
    prog.grid = grid;
    prog.ref.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto it = std::lower_bound(grid.begin(), grid.end(), p.support()[i]);
        prog.ref[static_cast<std::size_t>(it - grid.begin())] = p.weights()[i];
    }
    prog.mean_min = x;
    std::vector<double> moment_coef(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        moment_coef[i] = std::pow(std::abs(grid[i]), power);
    prog.moment = detail::KlProgram::Moment{std::move(moment_coef), bound};

    auto out = detail::minimize_kl(prog, detail::SolveOptions{});
    if (!out.feasible)
        throw InfeasibleQuery("no grid distribution satisfies mean and moment constraints");

    r.value = out.objective;
    if (std::isfinite(out.objective)) {
        std::vector<double> pts, w;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (out.q[i] > 1e-12) {
                pts.push_back(grid[i]);
                w.push_back(out.q[i]);
            }
        }
        double tot = 0.0;
        for (double wi : w) tot += wi;
        for (auto& wi : w) wi /= tot;
        r.minimizer = FiniteDist(std::move(pts), std::move(w));
    }
    return r;
}

KlinfResult klinf(const FiniteDist& p, double x, const ModelClass& cls) {
    return std::visit(
        [&](const auto& c) -> KlinfResult {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, FiniteAlphabet>) {
                return klinf_finite(p, x, c);
            } else if constexpr (std::is_same_v<T, BoundedSupport>) {
                return klinf_bounded(p, x, c.a, c.b);
            } else {
                return klinf_moment(p, x, c.bound, c.epsilon);
            }
        },
        cls);
}

double klinf_value(const FiniteDist& p, double x, const ModelClass& cls) {
    if (const auto* fa = std::get_if<FiniteAlphabet>(&cls)) {
        for (double s : p.support())
            if (!std::binary_search(fa->points.begin(), fa->points.end(), s))
                throw InvalidQuery("distribution support is not contained in the alphabet");
        return detail::klinf_dual(p.support(), p.weights(), x, fa->points.back()).value;
    }
    if (const auto* bs = std::get_if<BoundedSupport>(&cls)) {
        if (p.min_support() < bs->a || p.max_support() > bs->b)
            throw InvalidQuery("distribution support is not contained in [a,b]");
        return detail::klinf_dual(p.support(), p.weights(), x, bs->b).value;
    }
    return klinf(p, x, cls).value;
}

}  // namespace bandit
