#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bandit/dist.hpp"
#include "bandit/policy.hpp"

namespace bandit {

/// One simulated episode: final pull counts, realized pseudo-regret, and an
/// optional trajectory of pull counts at geometrically spaced checkpoints.
struct RunRecord {
    std::uint64_t rep_id = 0;
    std::uint64_t seed = 0;
    std::uint64_t horizon = 0;
    std::vector<std::uint64_t> pulls;  // N_a(T), index 0 = optimal arm
    double regret = 0.0;               // sum_a Delta_a N_a(T)

    struct Checkpoint {
        std::uint64_t t;
        std::vector<std::uint64_t> pulls;
    };
    std::vector<Checkpoint> trajectory;  // empty unless requested
};

/// A batch of independent replications of the same experiment.
struct BatchResult {
    std::string instance_desc;
    std::string schedule_desc;
    std::uint64_t horizon = 0;
    std::uint64_t base_seed = 0;
    std::vector<RunRecord> records;  // rep_id r at position r
    double wall_seconds = 0.0;
};

/// Checkpoint rounds ceil(K * 1.5^j) clipped to [1, T], deduplicated.
std::vector<std::uint64_t> checkpoint_rounds(std::size_t num_arms, std::uint64_t horizon);

/// Plays T rounds of the KL_inf-UCB interaction loop against `instance`,
/// drawing rewards from the chosen arm's distribution on a stream seeded
/// with `seed`. Bit-identical output for identical inputs.
RunRecord run_episode(const BanditInstance& instance, const ExplorationSchedule& schedule,
                      std::uint64_t horizon, std::uint64_t seed, bool with_trajectory = false);

/// R independent episodes with seeds derive_seed(base_seed, r), distributed
/// over `workers` threads. The result is a pure function of
/// (instance, schedule, horizon, R, base_seed): identical for any worker
/// count. Episode errors propagate with the replication id attached.
BatchResult run_batch(const BanditInstance& instance, const ExplorationSchedule& schedule,
                      std::uint64_t horizon, std::uint64_t replications,
                      std::uint64_t base_seed, unsigned workers,
                      bool with_trajectory = false);

}  // namespace bandit
