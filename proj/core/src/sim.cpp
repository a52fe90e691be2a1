#include "bandit/sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

namespace bandit {

std::vector<std::uint64_t> checkpoint_rounds(std::size_t num_arms, std::uint64_t horizon) {
    std::vector<std::uint64_t> out;
    double v = static_cast<double>(num_arms);
    while (true) {
        const auto t = static_cast<std::uint64_t>(std::ceil(v));
        if (t > horizon) break;
        if (out.empty() || out.back() != t) out.push_back(t);
        v *= 1.5;
    }
    return out;
}

RunRecord run_episode(const BanditInstance& instance, const ExplorationSchedule& schedule,
                      std::uint64_t horizon, std::uint64_t seed, bool with_trajectory) {
    const std::size_t K = instance.num_arms();
    if (horizon < K)
        throw ConfigError("horizon T=" + std::to_string(horizon) +
                          " is smaller than the number of arms K=" + std::to_string(K));

    PolicyState state(K, schedule, instance.model_class());
    SplitMix64 rng(seed);

    RunRecord rec;
    rec.seed = seed;
    rec.horizon = horizon;

    std::vector<std::uint64_t> cps;
    std::size_t next_cp = 0;
    if (with_trajectory) cps = checkpoint_rounds(K, horizon);

    for (std::uint64_t t = 1; t <= horizon; ++t) {
        const std::size_t arm = state.select_arm();
        const double reward = sample(instance.arm(arm), rng);
        state.update(arm, reward);
        if (with_trajectory && next_cp < cps.size() && t == cps[next_cp]) {
            RunRecord::Checkpoint cp;
            cp.t = t;
            cp.pulls.resize(K);
            for (std::size_t a = 0; a < K; ++a) cp.pulls[a] = state.pulls(a);
            rec.trajectory.push_back(std::move(cp));
            ++next_cp;
        }
    }

    rec.pulls.resize(K);
    double regret = 0.0;
    for (std::size_t a = 0; a < K; ++a) {
        rec.pulls[a] = state.pulls(a);
        regret += instance.gap(a) * static_cast<double>(rec.pulls[a]);
    }
    rec.regret = regret;
    return rec;
}

BatchResult run_batch(const BanditInstance& instance, const ExplorationSchedule& schedule,
                      std::uint64_t horizon, std::uint64_t replications,
                      std::uint64_t base_seed, unsigned workers, bool with_trajectory) {
    if (replications < 1) throw ConfigError("replication count must be >= 1");
    if (workers < 1) workers = 1;

    const auto t0 = std::chrono::steady_clock::now();

    BatchResult batch;
    batch.instance_desc = describe(instance.model_class());
    batch.schedule_desc = describe(schedule);
    batch.horizon = horizon;
    batch.base_seed = base_seed;
    batch.records.resize(replications);

    std::atomic<std::uint64_t> next{0};
    std::mutex err_mutex;
    std::string first_error;

    auto work = [&]() {
        while (true) {
            const std::uint64_t r = next.fetch_add(1);
            if (r >= replications) return;
            try {
                RunRecord rec = run_episode(instance, schedule, horizon,
                                            derive_seed(base_seed, r), with_trajectory);
                rec.rep_id = r;
                batch.records[r] = std::move(rec);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error.empty())
                    first_error = "replication " + std::to_string(r) + ": " + e.what();
            }
        }
    };

    if (workers == 1 || replications == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        const unsigned n = std::min<std::uint64_t>(workers, replications);
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (!first_error.empty()) throw ConfigError(first_error);

    batch.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return batch;
}

}  // namespace bandit
