#include "bandit/simplex_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bandit::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// a . q >= c halfspace. <= constraints are stored negated.
struct Halfspace {
    std::vector<double> a;
    double c;
};

// Projection onto simplex + halfspaces.
//
// With a single halfspace the projection is computed exactly: the KKT system
// reduces to P(v) = P_simplex(v + mu a) with mu >= 0 fixed by complementarity,
// and a . P_simplex(v + mu a) is nondecreasing in mu, so mu falls to a 1-D
// bisection. With two halfspaces we run Dykstra with a violation-aware exit,
// then restore exact simplex membership; minimize_kl re-verifies the final
// candidate.
class FeasibleSet {
public:
    FeasibleSet(std::size_t dim, std::vector<Halfspace> halfspaces)
        : dim_(dim), halfspaces_(std::move(halfspaces)) {}

    std::size_t num_halfspaces() const { return halfspaces_.size(); }

    void project(std::vector<double>& v) {
        if (halfspaces_.empty()) {
            project_simplex(v);
            return;
        }
        if (halfspaces_.size() == 1) {
            project_one_halfspace(v, halfspaces_[0]);
            return;
        }
        dykstra(v, 300);
        project_simplex(v);  // exact simplex membership at exit
    }

    /// High-accuracy variant for the final candidate.
    void project_hard(std::vector<double>& v) {
        if (halfspaces_.size() <= 1) {
            project(v);
            return;
        }
        dykstra(v, 20000);
        project_simplex(v);
    }

    double max_violation(const std::vector<double>& v) const {
        double worst = 0.0;
        double sum = 0.0;
        for (double x : v) {
            worst = std::max(worst, -x);
            sum += x;
        }
        worst = std::max(worst, std::abs(sum - 1.0));
        for (const auto& h : halfspaces_) worst = std::max(worst, h.c - dot(h.a, v));
        return worst;
    }

    bool contains(const std::vector<double>& v, double tol) const {
        return max_violation(v) <= tol;
    }

private:
    void project_one_halfspace(std::vector<double>& v, const Halfspace& h) {
        project_simplex(v);
        if (dot(h.a, v) >= h.c) return;
        // bracket mu: pushing along a raises a . P(v + mu a)
        const std::size_t top = static_cast<std::size_t>(
            std::max_element(h.a.begin(), h.a.end()) - h.a.begin());
        if (h.a[top] < h.c) return;  // even the best vertex cannot satisfy it
        std::vector<double>& w = scratch_;
        auto eval = [&](double mu) {
            w = v;
            for (std::size_t i = 0; i < dim_; ++i) w[i] += mu * h.a[i];
            project_simplex(w);
            return dot(h.a, w) - h.c;
        };
        double lo = 0.0, hi = 1.0;
        for (int k = 0; k < 90 && eval(hi) < 0.0; ++k) {
            lo = hi;
            hi *= 2.0;
        }
        for (int k = 0; k < 50 && (hi - lo) > 1e-14 * (1.0 + hi); ++k) {
            const double mid = 0.5 * (lo + hi);
            if (eval(mid) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        eval(hi);
        v = w;
    }

    void dykstra(std::vector<double>& v, int max_cycles) {
        corrections_.assign(halfspaces_.size() + 1, std::vector<double>(dim_, 0.0));
        std::vector<double>& before = scratch_;
        for (int cycle = 0; cycle < max_cycles; ++cycle) {
            for (std::size_t s = 0; s <= halfspaces_.size(); ++s) {
                auto& corr = corrections_[s];
                for (std::size_t i = 0; i < dim_; ++i) v[i] += corr[i];
                before = v;
                if (s == 0) {
                    project_simplex(v);
                } else {
                    const auto& h = halfspaces_[s - 1];
                    const double gap = h.c - dot(h.a, v);
                    if (gap > 0.0) {
                        const double t = gap / dot(h.a, h.a);
                        for (std::size_t i = 0; i < dim_; ++i) v[i] += t * h.a[i];
                    }
                }
                for (std::size_t i = 0; i < dim_; ++i) corr[i] = before[i] - v[i];
            }
            // exit on feasibility, not on step size: Dykstra can crawl while
            // still far from the intersection
            if (max_violation(v) < 1e-12) break;
        }
    }

    std::size_t dim_;
    std::vector<Halfspace> halfspaces_;
    std::vector<std::vector<double>> corrections_;
    std::vector<double> scratch_;
};

double objective(const std::vector<double>& ref, const std::vector<double>& q) {
    double v = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        if (ref[i] == 0.0) continue;
        if (q[i] <= 0.0) return kInf;
        v += ref[i] * std::log(ref[i] / q[i]);
    }
    return std::max(v, 0.0);
}

void gradient(const std::vector<double>& ref, const std::vector<double>& q,
              std::vector<double>& g) {
    for (std::size_t i = 0; i < ref.size(); ++i)
        g[i] = ref[i] == 0.0 ? 0.0 : -ref[i] / q[i];
}

// FISTA with backtracking and function-value restarts.
struct RunResult {
    std::vector<double> q;
    double objective = kInf;
    int iters = 0;
};

RunResult run_from(const std::vector<double>& ref, FeasibleSet& set, std::vector<double> q0,
                   int max_iters, double rel_tol) {
    const std::size_t n = ref.size();
    std::vector<double> q = std::move(q0);
    std::vector<double> q_prev = q;
    std::vector<double> y = q;
    std::vector<double> g(n), trial(n);

    double f_q = objective(ref, q);
    RunResult best;
    best.objective = f_q;
    best.q = q;

    double L = 4.0;
    double t = 1.0;
    int stable = 0;
    int it = 0;
    for (; it < max_iters; ++it) {
        bool y_ok = true;
        for (std::size_t i = 0; i < n; ++i)
            if (ref[i] > 0.0 && y[i] <= 0.0) { y_ok = false; break; }
        if (!y_ok) {
            y = q;
            t = 1.0;
            y_ok = true;
            for (std::size_t i = 0; i < n; ++i)
                if (ref[i] > 0.0 && y[i] <= 0.0) { y_ok = false; break; }
            // the iterate itself sits on a face with infinite objective;
            // no descent direction exists from here
            if (!y_ok) break;
        }
        gradient(ref, y, g);
        const double f_y = objective(ref, y);

        double f_trial;
        for (int bt = 0;; ++bt) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = y[i] - g[i] / L;
            set.project(trial);
            f_trial = objective(ref, trial);
            double lin = f_y, dist2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = trial[i] - y[i];
                lin += g[i] * d;
                dist2 += d * d;
            }
            if (f_trial <= lin + 0.5 * L * dist2 + 1e-16) break;
            L *= 2.0;
            if (bt > 60) break;
        }

        const double f_new = f_trial;
        // gradient-mapping restart: momentum is pointing uphill
        double restart_dot = 0.0, step_inf = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            restart_dot += (y[i] - trial[i]) * (trial[i] - q[i]);
            step_inf = std::max(step_inf, std::abs(trial[i] - y[i]));
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        if (f_new > f_q || restart_dot > 0.0) {
            t = 1.0;
            y = trial;
        } else {
            const double beta = (t - 1.0) / t_next;
            for (std::size_t i = 0; i < n; ++i)
                y[i] = trial[i] + beta * (trial[i] - q[i]);
            t = t_next;
        }
        q_prev.swap(q);
        q = trial;

        if (f_new < best.objective) {
            best.objective = f_new;
            best.q = q;
        }
        // stop on joint stationarity: flat objective and a vanishing
        // projected-gradient step
        if (std::abs(f_q - f_new) <= rel_tol * std::max(1.0, std::abs(f_new)) &&
            step_inf <= 1e-12)
            ++stable;
        else
            stable = 0;
        f_q = f_new;
        if (stable >= 10) break;
        // L never decays within a run: a backtracked estimate below the local
        // Lipschitz constant produces permanent limit cycles here.
    }
    best.iters = it;
    return best;
}

}  // namespace

void project_simplex(std::vector<double>& v) {
    static thread_local std::vector<double> u;
    u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double csum = 0.0, tau = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        csum += u[j];
        const double trial = (csum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - trial > 0.0) tau = trial;
    }
    for (auto& x : v) x = std::max(0.0, x - tau);
}

SolveOutcome minimize_kl(const KlProgram& prog, const SolveOptions& opt) {
    // The moment constraint is frequently inactive at the optimum. Solve the
    // mean-only relaxation first (it enjoys exact projections); if its
    // solution already satisfies the moment budget it solves the full
    // program.
    if (prog.moment) {
        KlProgram relaxed = prog;
        relaxed.moment.reset();
        auto out = minimize_kl(relaxed, opt);
        if (out.feasible) {
            double mom = 0.0;
            for (std::size_t i = 0; i < out.q.size(); ++i)
                mom += prog.moment->coef[i] * out.q[i];
            if (mom <= prog.moment->limit + 1e-12) return out;
        }
    }

    const std::size_t n = prog.grid.size();
    std::vector<Halfspace> hs;
    hs.push_back({prog.grid, prog.mean_min});
    if (prog.moment) {
        std::vector<double> neg(prog.moment->coef);
        for (auto& x : neg) x = -x;
        hs.push_back({std::move(neg), -prog.moment->limit});
    }
    FeasibleSet set(n, std::move(hs));

    // cost scales with dimension; large grids get a proportionally smaller
    // iteration budget, small exact-alphabet programs the full one
    const int max_iters = static_cast<int>(std::min<long long>(
        opt.max_iters, 2000 + 800000 / static_cast<long long>(n + 1)));

    // Feasible starting points: the reference itself, a mean-matching mix
    // with the top grid point, and uniform.
    std::vector<std::vector<double>> starts;
    starts.push_back(prog.ref);
    {
        const double top = prog.grid.back();
        const double m = dot(prog.grid, prog.ref);
        double theta = top > m ? (prog.mean_min - m) / (top - m) : 1.0;
        theta = std::clamp(theta + 0.05, 0.0, 1.0);
        std::vector<double> s(prog.ref);
        for (auto& x : s) x *= (1.0 - theta);
        s.back() += theta;
        starts.push_back(std::move(s));
    }
    starts.emplace_back(n, 1.0 / static_cast<double>(n));

    SolveOutcome best;
    best.objective = kInf;
    for (auto& s : starts) {
        set.project_hard(s);
        if (!set.contains(s, 1e-7)) continue;
        auto out = run_from(prog.ref, set, std::move(s), max_iters, opt.rel_tol);
        if (!best.feasible || out.objective < best.objective) {
            best.feasible = true;
            best.objective = out.objective;
            best.q = std::move(out.q);
            best.iters = out.iters;
        }
    }
    if (!best.feasible) return best;

    // Final verification: restore exact feasibility if the iterate drifted,
    // and report the objective at the restored point.
    if (!set.contains(best.q, 1e-9)) {
        set.project_hard(best.q);
        best.objective = objective(prog.ref, best.q);
    }
    return best;
}

}  // namespace bandit::detail
