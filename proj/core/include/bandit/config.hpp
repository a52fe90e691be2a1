#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bandit/dist.hpp"
#include "bandit/policy.hpp"

namespace bandit {

/// Parses "finite:x1,x2,..." | "bounded:a,b" | "moment:B=<v>,eps=<v>".
ModelClass parse_class_spec(const std::string& spec);

/// Parses the distribution literal {"support": [...], "weights": [...]} from
/// a JSON string or file.
FiniteDist parse_dist_json(const std::string& json_text);
FiniteDist load_dist_file(const std::string& path);

/// Parameters of a check-assumptions run; defaults follow the class's
/// canonical g(n) choice (C1=1,C2=1 for bounded/finite support, C1=2,C2=1
/// for the moment class).
struct AssumptionParams {
    std::optional<FiniteDist> dist;  // defaults to arm 1 of the instance
    std::string which = "both";      // "1" | "2" | "both"
    double g_c1 = 1.0;
    double g_c2 = 1.0;
    std::uint64_t n_max = 500;
    std::uint64_t paths = 100000;
    std::vector<double> x_grid{1.0, 2.0, 3.0, 4.0};
    double delta = 0.2;
    std::vector<std::uint64_t> n_grid{50, 100, 200};
    std::vector<double> d_grid{0.01, 0.02, 0.05};
};

/// A fully validated experiment description. Everything the subcommands need
/// is checked up front; nothing starts simulating on a half-valid config.
class ExperimentConfig {
public:
    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);

    const BanditInstance& instance() const { return *instance_; }
    const ExplorationSchedule& schedule() const { return schedule_; }
    std::uint64_t horizon() const { return horizon_; }
    std::uint64_t replications() const { return replications_; }
    std::uint64_t base_seed() const { return base_seed_; }
    double gamma() const { return gamma_; }
    std::size_t grid_points() const { return grid_points_; }
    std::uint64_t min_exceedances() const { return min_exceedances_; }
    const std::vector<std::size_t>& arms_to_analyze() const { return arms_; }
    unsigned workers() const { return workers_; }  // 0 = pick automatically
    const std::string& output_dir() const { return output_dir_; }
    bool trajectories() const { return trajectories_; }
    const AssumptionParams& assumptions() const { return assumptions_; }

    /// FNV-1a digest of the canonicalized effective config (sorted keys, no
    /// whitespace), as a fixed-width hex string.
    const std::string& hash() const { return hash_; }

private:
    ExperimentConfig() = default;

    std::optional<BanditInstance> instance_;
    ExplorationSchedule schedule_{FiniteSupportSchedule{}};
    std::uint64_t horizon_ = 0;
    std::uint64_t replications_ = 0;
    std::uint64_t base_seed_ = 0;
    double gamma_ = 0.5;
    std::size_t grid_points_ = 40;
    std::uint64_t min_exceedances_ = 50;
    std::vector<std::size_t> arms_;
    unsigned workers_ = 0;
    std::string output_dir_ = "out";
    bool trajectories_ = false;
    AssumptionParams assumptions_;
    std::string hash_;
};

}  // namespace bandit
