#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace bandit::detail {

/// Euclidean projection onto the probability simplex (sort-based, exact).
void project_simplex(std::vector<double>& v);

/// min KL(ref, q) over the simplex on `grid`, subject to grid . q >= mean_min
/// and optionally moment.coef . q <= moment.limit. Solved by accelerated
/// projected gradient descent with Dykstra projections and multiple feasible
/// starts. This is the primal route: it never touches the dual machinery it
/// is used to cross-check.
struct KlProgram {
    std::vector<double> grid;  // sorted support points
    std::vector<double> ref;   // reference weights aligned to grid (zeros allowed)
    double mean_min = 0.0;
    struct Moment {
        std::vector<double> coef;  // |grid|^(1+eps)
        double limit = 0.0;
    };
    std::optional<Moment> moment;
};

struct SolveOptions {
    int max_iters = 80000;
    double rel_tol = 1e-14;
};

struct SolveOutcome {
    std::vector<double> q;
    double objective = 0.0;
    bool feasible = false;
    int iters = 0;
};

SolveOutcome minimize_kl(const KlProgram& prog, const SolveOptions& opt);

}  // namespace bandit::detail
