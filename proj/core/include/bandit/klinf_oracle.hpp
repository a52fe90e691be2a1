#pragma once

#include "bandit/dist.hpp"

namespace bandit {

/// Independent verification oracle for the KL_inf projection: minimizes
/// KL(p, q) by projected gradient descent on the simplex over a dense finite
/// grid of the class's support set, with the mean constraint m(q) >= x (and
/// the moment constraint where applicable).
///
/// For FiniteAlphabet the grid is the exact alphabet and the program is the
/// exact convex projection, so the result is within solver tolerance of the
/// true infimum. For the other classes the grid adds `resolution` uniform
/// points across the class's support interval.
///
/// This routine deliberately shares no code with the dual bisection in
/// klinf_finite / klinf_bounded; it exists to check them.
double klinf_oracle(const FiniteDist& p, double x, const ModelClass& cls,
                    std::size_t resolution = 101);

}  // namespace bandit
