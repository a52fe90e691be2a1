#include "bandit/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bandit {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

FiniteDist::FiniteDist(std::vector<double> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
    std::vector<std::string> issues;
    if (support_.empty()) issues.push_back("support must be nonempty");
    if (support_.size() != weights_.size())
        issues.push_back("support and weights must have equal length");
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (!std::isfinite(support_[i]))
            issues.push_back("support[" + std::to_string(i) + "] is not finite");
        if (i + 1 < support_.size() && !(support_[i] < support_[i + 1]))
            issues.push_back("support must be strictly increasing at position " +
                             std::to_string(i + 1));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] >= 0.0))
            issues.push_back("weights[" + std::to_string(i) + "] = " + fmt(weights_[i]) +
                             " is negative or NaN");
        sum += weights_[i];
    }
    if (issues.empty() && std::abs(sum - 1.0) > kWeightSumTol)
        issues.push_back("weights sum to " + fmt(sum) + ", outside tolerance 1e-12 of 1");
    if (!issues.empty()) throw ValidationError(std::move(issues));

    // Renormalize away the sub-tolerance residue so downstream arithmetic
    // sees an exact simplex point.
    if (sum != 1.0) {
        for (auto& w : weights_) w /= sum;
    }

    cum_.resize(weights_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        acc += weights_[i];
        cum_[i] = acc;
        mean_ += weights_[i] * support_[i];
    }
    cum_.back() = 1.0;
}

FiniteDist FiniteDist::point_mass(double x) { return FiniteDist({x}, {1.0}); }

FiniteDist FiniteDist::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("bernoulli parameter must lie in [0,1]");
    return FiniteDist({0.0, 1.0}, {1.0 - p, p});
}

double FiniteDist::mass_at(double x) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), x);
    if (it == support_.end() || *it != x) return 0.0;
    return weights_[static_cast<std::size_t>(it - support_.begin())];
}

double FiniteDist::abs_moment(double power) const {
    double m = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i)
        m += weights_[i] * std::pow(std::abs(support_[i]), power);
    return m;
}

double mean(const FiniteDist& d) { return d.mean(); }

double kl(const FiniteDist& p, const FiniteDist& q) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = p.weights()[i];
        if (pi == 0.0) continue;
        const double qi = q.mass_at(p.support()[i]);
        if (qi == 0.0) return std::numeric_limits<double>::infinity();
        total += pi * std::log(pi / qi);
    }
    // Rounding can push an exact-match comparison a hair negative.
    return total < 0.0 && total > -1e-15 ? 0.0 : total;
}

double sample(const FiniteDist& d, SplitMix64& rng) {
    const double u = rng.next_double();
    const auto& cum = d.cum_;
    for (std::size_t i = 0; i + 1 < cum.size(); ++i)
        if (u < cum[i]) return d.support_[i];
    return d.support_.back();
}

// ---------------------------------------------------------------------------

FiniteAlphabet::FiniteAlphabet(std::vector<double> pts) : points(std::move(pts)) {
    if (points.size() < 2) throw ValidationError("finite alphabet needs at least 2 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) throw ValidationError("alphabet points must be finite");
        if (i + 1 < points.size() && !(points[i] < points[i + 1]))
            throw ValidationError("alphabet points must be strictly increasing");
    }
}

BoundedSupport::BoundedSupport(double lo, double hi) : a(lo), b(hi) {
    if (!(std::isfinite(a) && std::isfinite(b) && a < b))
        throw ValidationError("bounded support requires finite a < b");
}

MomentBounded::MomentBounded(double b, double eps) : bound(b), epsilon(eps) {
    if (!(bound > 0.0)) throw ValidationError("moment bound B must be > 0");
    if (!(epsilon > 0.0)) throw ValidationError("moment epsilon must be > 0");
}

bool admits(const ModelClass& cls, const FiniteDist& d) {
    return std::visit(
        [&](const auto& c) -> bool {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, FiniteAlphabet>) {
                for (double x : d.support())
                    if (!std::binary_search(c.points.begin(), c.points.end(), x)) return false;
                return true;
            } else if constexpr (std::is_same_v<T, BoundedSupport>) {
                return d.min_support() >= c.a && d.max_support() <= c.b;
            } else {
                return d.abs_moment(1.0 + c.epsilon) <= c.bound + 1e-12;
            }
        },
        cls);
}

double class_max_mean(const ModelClass& cls) {
    return std::visit(
        [](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, FiniteAlphabet>) {
                return c.points.back();
            } else if constexpr (std::is_same_v<T, BoundedSupport>) {
                return c.b;
            } else {
                return std::pow(c.bound, 1.0 / (1.0 + c.epsilon));
            }
        },
        cls);
}

std::string describe(const ModelClass& cls) {
    return std::visit(
        [](const auto& c) -> std::string {
            using T = std::decay_t<decltype(c)>;
            std::ostringstream os;
            if constexpr (std::is_same_v<T, FiniteAlphabet>) {
                os << "finite:";
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    os << (i ? "," : "") << c.points[i];
            } else if constexpr (std::is_same_v<T, BoundedSupport>) {
                os << "bounded:" << c.a << "," << c.b;
            } else {
                os << "moment:B=" << c.bound << ",eps=" << c.epsilon;
            }
            return os.str();
        },
        cls);
}

// ---------------------------------------------------------------------------

BanditInstance::BanditInstance(std::vector<FiniteDist> arms, ModelClass model_class)
    : arms_(std::move(arms)), model_class_(std::move(model_class)) {
    std::vector<std::string> issues;
    if (arms_.size() < 2) issues.push_back("an instance needs K >= 2 arms");
    for (std::size_t a = 0; a < arms_.size(); ++a) {
        if (!admits(model_class_, arms_[a]))
            issues.push_back("arm " + std::to_string(a + 1) +
                             " is not admissible for class " + describe(model_class_));
        if (a + 1 < arms_.size()) {
            if (arms_[a].mean() == arms_[a + 1].mean())
                issues.push_back("arms " + std::to_string(a + 1) + " and " +
                                 std::to_string(a + 2) + " have tied means");
            else if (arms_[a].mean() < arms_[a + 1].mean())
                issues.push_back("arm means must be strictly decreasing (arm " +
                                 std::to_string(a + 1) + " vs " + std::to_string(a + 2) + ")");
        }
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

// ---------------------------------------------------------------------------

void EmpiricalDist::record(double y) {
    auto it = std::lower_bound(values_.begin(), values_.end(), y);
    if (it != values_.end() && *it == y) {
        counts_[static_cast<std::size_t>(it - values_.begin())] += 1;
    } else {
        const auto pos = it - values_.begin();
        values_.insert(it, y);
        counts_.insert(counts_.begin() + pos, 1);
    }
    n_ += 1;
}

double EmpiricalDist::mean() const {
    if (n_ == 0) throw DomainError("mean of empty empirical distribution");
    // Computed from counts, not a running sum, so any permutation of the
    // same observations yields the identical value.
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        s += static_cast<double>(counts_[i]) * values_[i];
    return s / static_cast<double>(n_);
}

FiniteDist EmpiricalDist::to_dist() const {
    if (n_ == 0) throw DomainError("cannot convert empty empirical distribution");
    std::vector<double> w(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
        w[i] = static_cast<double>(counts_[i]) / static_cast<double>(n_);
    return FiniteDist(values_, std::move(w));
}

}  // namespace bandit
