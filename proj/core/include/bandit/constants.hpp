#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bandit/dist.hpp"

namespace bandit {

/// Result of the confusion-cost ratio infimum
///   inf over nu~ in the class, supp(nu~) within supp(nu_j), m(nu~) < mu_i of
///   KL(nu~, nu_j) / KL_inf(nu~, mu_i).
///
/// The open mean constraint is handled by slack: the program is solved with
/// m(nu~) <= mu_i - eps_m for each slack in `slack_trend`, and `value` is the
/// tightest (smallest-slack) result.
struct RatioResult {
    double value = 0.0;                     // >= 1 when finite; +inf when infeasible
    std::optional<FiniteDist> argmin;       // attaining distribution, when finite
    double slack = 0.0;                     // eps_m used for `value`
    std::vector<std::pair<double, double>> slack_trend;  // (eps_m, value) per slack
    std::string method;                     // "grid" or "refined"
};

struct RatioOptions {
    std::vector<double> slacks{1e-2, 1e-3, 1e-4};
    unsigned grid_per_coord = 200;  // simplex grid resolution for s <= 4
    bool force_simplex = false;     // run the general search even for s == 2
};

/// 1 / KL_inf(nu_a, mu_1): the asymptotic pulls-per-log-t constant of a
/// suboptimal arm. `arm_label` is 1-based; label 1 is the optimal arm.
double lai_robbins_constant(const BanditInstance& instance, std::size_t arm_label);

/// The per-arm ratio infimum. Nonconvex; solved by dense simplex grid search
/// over supp(nu_j) followed by local refinement (golden section for two-point
/// supports, Nelder-Mead otherwise). Heuristic for supports larger than 4.
RatioResult discrimination_ratio(const FiniteDist& nu_j, double mu_i, const ModelClass& cls,
                                 const RatioOptions& opt = {});

/// Theoretical tail slope for the i-th best arm (1-based rank, i >= 2):
/// minus the sum of the per-arm ratio infima over the i-1 better arms.
/// -inf when any ratio is infinite.
double tail_exponent_theory(const BanditInstance& instance, std::size_t arm_rank,
                            const RatioOptions& opt = {});

/// The class-generic upper-bound exponent -(i-1) for the i-th best arm.
double theorem3_exponent(std::size_t arm_rank);

/// Discrimination-equivalence check over a list of (nu, nu') pairs with
/// m(nu) > m(nu').
struct DiscriminationReport {
    struct Pair {
        double mu_target;     // m(nu')
        double ratio;         // ratio infimum for (nu, mu_target)
        bool within_tol;
    };
    std::vector<Pair> pairs;
    double tol = 0.0;
    bool equivalent = false;  // all ratios within tol of 1
    bool vacuous = false;     // no pairs supplied
};

DiscriminationReport is_discrimination_equivalent(
    const std::vector<std::pair<FiniteDist, FiniteDist>>& pairs, const ModelClass& cls,
    double tol, const RatioOptions& opt = {});

}  // namespace bandit
