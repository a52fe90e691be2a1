#include "bandit/klinf_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bandit/simplex_opt.hpp"

namespace bandit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double solve_on_grid(const FiniteDist& p, double x, std::vector<double> grid,
                     std::optional<detail::KlProgram::Moment> moment) {
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    detail::KlProgram prog;
    prog.ref.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto it = std::lower_bound(grid.begin(), grid.end(), p.support()[i]);
        prog.ref[static_cast<std::size_t>(it - grid.begin())] = p.weights()[i];
    }
    prog.grid = std::move(grid);
    prog.mean_min = x;
    prog.moment = std::move(moment);

    auto out = detail::minimize_kl(prog, detail::SolveOptions{});
    if (!out.feasible) throw InfeasibleQuery("oracle: empty feasible set on the grid");
    return out.objective;
}

}  // namespace

double klinf_oracle(const FiniteDist& p, double x, const ModelClass& cls,
                    std::size_t resolution) {
    return std::visit(
        [&](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, FiniteAlphabet>) {
                for (double s : p.support())
                    if (!std::binary_search(c.points.begin(), c.points.end(), s))
                        throw InvalidQuery("oracle: support not contained in the alphabet");
                if (x > c.points.back()) return kInf;
                return solve_on_grid(p, x, c.points, std::nullopt);
            } else if constexpr (std::is_same_v<T, BoundedSupport>) {
                if (p.min_support() < c.a || p.max_support() > c.b)
                    throw InvalidQuery("oracle: support not contained in [a,b]");
                if (x > c.b) return kInf;
                std::vector<double> grid = p.support();
                for (std::size_t i = 0; i < resolution; ++i)
                    grid.push_back(c.a + (c.b - c.a) * static_cast<double>(i) /
                                             static_cast<double>(resolution - 1));
                return solve_on_grid(p, x, std::move(grid), std::nullopt);
            } else {
                const double power = 1.0 + c.epsilon;
                if (p.abs_moment(power) > c.bound + 1e-12)
                    throw InvalidQuery("oracle: distribution violates the moment bound");
                const double reach = std::pow(c.bound, 1.0 / power);
                if (x > reach) throw InfeasibleQuery("oracle: target beyond grid reach");
                std::vector<double> grid = p.support();
                for (std::size_t i = 0; i < resolution; ++i)
                    grid.push_back(-reach + 2.0 * reach * static_cast<double>(i) /
                                                static_cast<double>(resolution - 1));
                std::sort(grid.begin(), grid.end());
                grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
                detail::KlProgram::Moment m;
                m.limit = c.bound;
                m.coef.resize(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i)
                    m.coef[i] = std::pow(std::abs(grid[i]), power);
                return solve_on_grid(p, x, std::move(grid), std::move(m));
            }
        },
        cls);
}

}  // namespace bandit
