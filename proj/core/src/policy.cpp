#include "bandit/policy.hpp"

#include <cmath>
#include <sstream>

namespace bandit {

namespace {

// Shared bisection body once the KL_inf evaluator for the class is fixed.
template <typename ValueFn>
double invert_index(double mean, double x_max, double budget, double lo_hint, ValueFn&& v) {
    if (budget == 0.0) return mean;
    if (v(x_max) <= budget) return x_max;

    double lo = mean;
    double hi = x_max;
    if (lo_hint > mean && v(lo_hint) <= budget) {
        // The hint is feasible; between rounds the index moves very little,
        // so an exponential forward search usually brackets the root in a
        // couple of evaluations.
        lo = lo_hint;
        double step = 1e-7 * (x_max - mean) + 1e-12;
        while (true) {
            const double cand = lo + step;
            if (cand >= hi) break;
            if (v(cand) <= budget) {
                lo = cand;
                step *= 8.0;
            } else {
                hi = cand;
                break;
            }
        }
    }
    for (int it = 0; it < 80 && (hi - lo) > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (v(mid) <= budget)
            lo = mid;
        else
            hi = mid;
    }
    // lo is the largest confirmed-feasible point, so the reported index
    // always satisfies KL_inf(emp, index) <= budget.
    return lo;
}

}  // namespace

ExplorationSchedule parse_schedule(const std::string& spec) {
    if (spec == "finite-support") return FiniteSupportSchedule{};
    const std::string prefix = "theorem1:";
    if (spec.rfind(prefix, 0) == 0) {
        double c1 = 0.0, c2 = 0.0;
        if (std::sscanf(spec.c_str() + prefix.size(), "C1=%lf,C2=%lf", &c1, &c2) == 2)
            return Theorem1Schedule(c1, c2);
    }
    throw ParseError("unrecognized schedule spec: \"" + spec +
                     "\" (expected \"finite-support\" or \"theorem1:C1=<v>,C2=<v>\")");
}

std::string describe(const ExplorationSchedule& s) {
    if (std::holds_alternative<FiniteSupportSchedule>(s)) return "finite-support";
    const auto& t1 = std::get<Theorem1Schedule>(s);
    std::ostringstream os;
    os << "theorem1:C1=" << t1.c1 << ",C2=" << t1.c2;
    return os.str();
}

double threshold(const ExplorationSchedule& s, std::uint64_t t, std::uint64_t n) {
    if (t < 3) throw DomainError("threshold requires t >= 3");
    const double lt = std::log(static_cast<double>(t));
    const double llt = std::log(lt);
    double f;
    if (std::holds_alternative<FiniteSupportSchedule>(s)) {
        f = lt + llt;
    } else {
        if (n < 1) throw DomainError("theorem1 threshold requires n >= 1");
        const auto& t1 = std::get<Theorem1Schedule>(s);
        f = lt + 2.0 * llt + t1.c1 * std::log1p(static_cast<double>(n)) + t1.c2;
    }
    return std::max(f, 0.0);
}

double index(const EmpiricalDist& emp, double budget, const ModelClass& cls, double lo_hint) {
    if (emp.count() < 1) throw DomainError("index requires at least one observation");
    if (!(budget >= 0.0)) throw DomainError("index requires a nonnegative budget");

    const double m = emp.mean();
    const double x_max = class_max_mean(cls);
    const FiniteDist d = emp.to_dist();
    return invert_index(m, x_max, budget, lo_hint,
                        [&](double x) { return klinf_value(d, x, cls); });
}

PolicyState::PolicyState(std::size_t num_arms, ExplorationSchedule schedule,
                         ModelClass model_class)
    : arms_(num_arms), schedule_(std::move(schedule)), model_class_(std::move(model_class)) {
    if (num_arms < 2) throw ValidationError("policy needs K >= 2 arms");
}

double PolicyState::arm_index(ArmState& a, std::uint64_t t_round) {
    const double budget =
        threshold(schedule_, t_round, a.pulls) / static_cast<double>(a.pulls);
    // A previous index for the same empirical state was computed at a
    // smaller budget, so it lower-bounds the current one (up to bisection
    // resolution).
    const double hint = (a.cache_valid && a.cache_pulls == a.pulls)
                            ? a.cache_index - 1e-10
                            : -std::numeric_limits<double>::infinity();

    const double m = a.emp.mean();
    const double x_max = class_max_mean(model_class_);
    double idx;
    if (!std::holds_alternative<MomentBounded>(model_class_)) {
        // Hot path for the dual-backed classes: evaluate on the empirical
        // arrays directly, with weights recomputed into a scratch buffer
        // (no allocation per round).
        static thread_local std::vector<double> w;
        w.resize(a.emp.values().size());
        const double inv_n = 1.0 / static_cast<double>(a.emp.count());
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = static_cast<double>(a.emp.counts()[i]) * inv_n;
        std::span<const double> xs(a.emp.values());
        std::span<const double> ws(w);
        idx = invert_index(m, x_max, budget, hint, [&](double x) {
            return detail::klinf_dual(xs, ws, x, x_max).value;
        });
    } else {
        idx = index(a.emp, budget, model_class_, hint);
    }
    a.cache_valid = true;
    a.cache_pulls = a.pulls;
    a.cache_index = idx;
    return idx;
}

std::size_t PolicyState::select_arm() {
    const std::uint64_t t_round = t_ + 1;
    if (t_round <= arms_.size()) return static_cast<std::size_t>(t_round - 1);

    std::size_t best = 0;
    double best_idx = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < arms_.size(); ++a) {
        const double idx = arm_index(arms_[a], t_round);
        if (idx > best_idx) {
            best_idx = idx;
            best = a;
        }
    }
    return best;
}

std::vector<double> PolicyState::current_indices() {
    const std::uint64_t t_round = t_ + 1;
    if (t_round <= arms_.size())
        throw DomainError("indices are undefined during the initialization rounds");
    std::vector<double> out(arms_.size());
    for (std::size_t a = 0; a < arms_.size(); ++a) out[a] = arm_index(arms_[a], t_round);
    return out;
}

void PolicyState::update(std::size_t arm, double reward) {
    auto& a = arms_.at(arm);
    a.emp.record(reward);
    a.pulls += 1;
    t_ += 1;
}

}  // namespace bandit
