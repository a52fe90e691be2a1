#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bandit/errors.hpp"
#include "bandit/rng.hpp"

namespace bandit {

/// Absolute tolerance on the weight sum at construction. Sums within this
/// tolerance of 1 are renormalized; anything further off is rejected.
inline constexpr double kWeightSumTol = 1e-12;

/// A probability distribution with finite support: strictly increasing
/// support points and one nonnegative weight per point. Immutable after
/// construction and safe to share across threads.
class FiniteDist {
public:
    FiniteDist(std::vector<double> support, std::vector<double> weights);

    static FiniteDist point_mass(double x);
    /// Bernoulli(p) represented on {0, 1}. Degenerate p keeps both points
    /// with a zero weight so the alphabet stays {0, 1}.
    static FiniteDist bernoulli(double p);

    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return support_.size(); }

    double mean() const { return mean_; }
    double min_support() const { return support_.front(); }
    double max_support() const { return support_.back(); }

    /// Probability mass at x (exact support-point match), 0 otherwise.
    double mass_at(double x) const;

    /// E|X|^power.
    double abs_moment(double power) const;

    bool operator==(const FiniteDist& other) const = default;

private:
    std::vector<double> support_;
    std::vector<double> weights_;
    std::vector<double> cum_;  // cumulative weights for sampling
    double mean_ = 0.0;

    friend double sample(const FiniteDist&, SplitMix64&);
};

/// m(nu): the mean of the distribution.
double mean(const FiniteDist& d);

/// Plain KL divergence KL(p, q) between finitely supported distributions.
/// Returns +infinity when some p-support point carries zero q-mass;
/// 0*log(0) terms count as 0.
double kl(const FiniteDist& p, const FiniteDist& q);

/// One draw from d. Repeated calls on the same stream have marginal law d.
double sample(const FiniteDist& d, SplitMix64& rng);

// ---------------------------------------------------------------------------
// Reward model classes
// ---------------------------------------------------------------------------

/// Distributions supported on a known, fixed alphabet of s >= 2 points.
struct FiniteAlphabet {
    std::vector<double> points;  // strictly increasing
    explicit FiniteAlphabet(std::vector<double> pts);
};

/// Distributions supported on [a, b].
struct BoundedSupport {
    double a;
    double b;
    BoundedSupport(double lo, double hi);
};

/// Distributions with E|X|^(1+epsilon) <= bound.
struct MomentBounded {
    double bound;
    double epsilon;
    MomentBounded(double b, double eps);
};

using ModelClass = std::variant<FiniteAlphabet, BoundedSupport, MomentBounded>;

/// Whether d is a member of the class (support containment or moment bound).
bool admits(const ModelClass& cls, const FiniteDist& d);

/// Largest mean attainable by a class member; the right edge for index
/// inversion. For the moment class this is the reach of its search grid,
/// bound^(1/(1+epsilon)).
double class_max_mean(const ModelClass& cls);

std::string describe(const ModelClass& cls);

// ---------------------------------------------------------------------------
// Bandit instance
// ---------------------------------------------------------------------------

/// An ordered K-armed environment: arm 0 is optimal and means are strictly
/// decreasing, matching the convention mu_1 > mu_2 > ... > mu_K. Tied means
/// are rejected at construction.
class BanditInstance {
public:
    BanditInstance(std::vector<FiniteDist> arms, ModelClass model_class);

    std::size_t num_arms() const { return arms_.size(); }
    const FiniteDist& arm(std::size_t a) const { return arms_.at(a); }
    const std::vector<FiniteDist>& arms() const { return arms_; }
    const ModelClass& model_class() const { return model_class_; }

    double mean_of(std::size_t a) const { return arms_.at(a).mean(); }
    double best_mean() const { return arms_.front().mean(); }
    /// Suboptimality gap Delta_a = mu_1 - mu_a.
    double gap(std::size_t a) const { return best_mean() - mean_of(a); }

private:
    std::vector<FiniteDist> arms_;
    ModelClass model_class_;
};

// ---------------------------------------------------------------------------
// Empirical distribution
// ---------------------------------------------------------------------------

/// Count-based empirical distribution of observed rewards. Single-owner
/// mutable state; one instance per arm per episode.
class EmpiricalDist {
public:
    EmpiricalDist() = default;

    /// Adds one observation.
    void record(double y);

    std::uint64_t count() const { return n_; }
    double mean() const;

    /// Distinct observed values (sorted) and their counts.
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

    /// Lossless conversion to a FiniteDist with weights count/n. Requires
    /// n >= 1.
    FiniteDist to_dist() const;

    bool operator==(const EmpiricalDist& other) const = default;

private:
    std::vector<double> values_;          // sorted distinct observations
    std::vector<std::uint64_t> counts_;   // parallel to values_
    std::uint64_t n_ = 0;
};

}  // namespace bandit
