#pragma once

#include <optional>
#include <span>

#include "bandit/dist.hpp"

namespace bandit {

/// Result of a KL_inf projection
///   KL_inf(p, x) = inf { KL(p, q) : q in class, m(q) >= x }.
struct KlinfResult {
    double value = 0.0;                    // nonnegative, +inf allowed
    std::optional<double> dual_lambda;     // maximizing dual variable, when the dual path ran
    std::optional<FiniteDist> minimizer;   // primal optimizer, when available
};

namespace detail {

/// Dual evaluation for the finite-alphabet / bounded-support classes:
///   max over lambda in [0, 1/(x_top - x)] of sum_i w_i log(1 - lambda (xs_i - x)).
/// xs must be strictly increasing with xs.back() <= x_top and w normalized.
/// Value-only hot path used by the index inversion; no allocation.
struct DualEval {
    double value;
    double lambda;  // NaN when the dual variable is not defined (x >= x_top paths)
};
DualEval klinf_dual(std::span<const double> xs, std::span<const double> ws, double x,
                    double x_top);

}  // namespace detail

/// KL_inf over the finite-alphabet class L_{[a,b],X}. Requires supp(p) to be
/// a subset of the alphabet. +inf for x above the top alphabet point;
/// -log p({x_s}) exactly at it; 0 at or below the mean.
KlinfResult klinf_finite(const FiniteDist& p, double x, const FiniteAlphabet& alphabet);

/// KL_inf over the bounded-support class L_{[a,b]}. Identical to the
/// finite-alphabet projection on the augmented alphabet supp(p) + {b}.
KlinfResult klinf_bounded(const FiniteDist& p, double x, double a, double b);

/// KL_inf over the moment class L_{B,eps}, defined as the finite-dimensional
/// convex program on supp(p) augmented with a uniform grid of `resolution`
/// points over [-B^{1/(1+eps)}, B^{1/(1+eps)}]. There is no closed dual for
/// this class here; the grid program is the definition.
/// Throws InvalidQuery when p violates the moment bound and InfeasibleQuery
/// when no grid distribution meets both constraints.
KlinfResult klinf_moment(const FiniteDist& p, double x, double bound, double epsilon,
                         std::size_t resolution = 201);

/// Dispatch on the model class (value and full-result forms).
KlinfResult klinf(const FiniteDist& p, double x, const ModelClass& cls);
double klinf_value(const FiniteDist& p, double x, const ModelClass& cls);

}  // namespace bandit
