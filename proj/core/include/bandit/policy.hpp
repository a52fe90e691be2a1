#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "bandit/dist.hpp"
#include "bandit/klinf.hpp"

namespace bandit {

/// Per-arm exploration threshold f_a(t) = log t + 2 log log t + g(N_a(t))
/// with g(n) = c1 log(1+n) + c2.
struct Theorem1Schedule {
    double c1;
    double c2;
    Theorem1Schedule(double c1_, double c2_) : c1(c1_), c2(c2_) {
        if (!(c1 > 0.0) || !(c2 > 0.0))
            throw ValidationError("theorem1 schedule requires C1 > 0 and C2 > 0");
    }
};

/// Shared threshold f(t) = log t + log log t, the tight choice for
/// finitely-supported models.
struct FiniteSupportSchedule {};

using ExplorationSchedule = std::variant<Theorem1Schedule, FiniteSupportSchedule>;

/// Parses "theorem1:C1=<v>,C2=<v>" or "finite-support".
ExplorationSchedule parse_schedule(const std::string& spec);
std::string describe(const ExplorationSchedule& s);

/// Exploration budget numerator at round t with n prior pulls of the arm.
/// t < 3 is outside the schedule's domain (log log t <= 0 regime).
double threshold(const ExplorationSchedule& s, std::uint64_t t, std::uint64_t n);

/// The UCB index: sup { x : KL_inf(emp, x) <= budget }, found by bisection
/// over [m(emp), class max] using monotonicity of KL_inf in x.
///
/// `lo_hint` tightens the initial bracket; pass the index previously computed
/// for the same empirical distribution at a smaller budget. The hint cannot
/// change the result by more than the 1e-10 bisection resolution.
double index(const EmpiricalDist& emp, double budget, const ModelClass& cls,
             double lo_hint = -std::numeric_limits<double>::infinity());

/// One agent's mutable view of a K-armed game: empirical distributions, pull
/// counts, the round counter, and the warm-start cache for the index
/// bisection. Single-owner; one instance per episode.
class PolicyState {
public:
    PolicyState(std::size_t num_arms, ExplorationSchedule schedule, ModelClass model_class);

    /// The arm to pull in the next round (0-based). Rounds 1..K are forced
    /// round-robin; afterwards the argmax of the indices, ties to the
    /// smallest arm id.
    std::size_t select_arm();

    /// Records a reward for `arm` and advances the round counter.
    void update(std::size_t arm, double reward);

    std::uint64_t round() const { return t_; }
    std::size_t num_arms() const { return arms_.size(); }
    std::uint64_t pulls(std::size_t arm) const { return arms_.at(arm).pulls; }
    const EmpiricalDist& empirical(std::size_t arm) const { return arms_.at(arm).emp; }
    const ExplorationSchedule& schedule() const { return schedule_; }
    const ModelClass& model_class() const { return model_class_; }

    /// Indices all arms would be scored with right now (round t_+1).
    /// Requires the initialization phase to be complete.
    std::vector<double> current_indices();

private:
    struct ArmState {
        EmpiricalDist emp;
        std::uint64_t pulls = 0;
        // warm-start cache, keyed by the pull count the index was computed at
        std::uint64_t cache_pulls = 0;
        double cache_index = 0.0;
        bool cache_valid = false;
    };

    double arm_index(ArmState& a, std::uint64_t t_round);

    std::vector<ArmState> arms_;
    std::uint64_t t_ = 0;  // completed rounds
    ExplorationSchedule schedule_;
    ModelClass model_class_;
};

}  // namespace bandit
