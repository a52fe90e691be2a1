#pragma once

#include <cstdint>
#include <string>

#include "bandit/sim.hpp"
#include "bandit/tails.hpp"

namespace bandit::io {

/// FNV-1a 64-bit digest as a 16-char lowercase hex string.
std::string fnv1a_hex(const std::string& data);

/// Provenance block written at the top of every output file. An empty
/// timestamp omits the generated_at line, which keeps outputs byte-identical
/// across reruns; comparisons otherwise ignore that one line.
struct Provenance {
    std::string config_hash;
    std::uint64_t base_seed = 0;
    std::string timestamp;  // ISO-8601 or empty
};

/// Batch CSV: header block, then one row per replication with columns
/// rep_id,seed,N_1..N_K,regret.
std::string batch_csv(const BatchResult& batch, const Provenance& prov);
void write_batch_csv(const std::string& path, const BatchResult& batch, const Provenance& prov);

/// Long-format trajectory CSV: rep_id,t,arm,count.
std::string trajectory_csv(const BatchResult& batch, const Provenance& prov);
void write_trajectory_csv(const std::string& path, const BatchResult& batch,
                          const Provenance& prov);

/// Reads a batch CSV back (records plus the horizon recorded in the header).
/// Returns the config hash found in the header via `hash_out` when non-null.
BatchResult read_batch_csv(const std::string& path, std::string* hash_out = nullptr);

/// Tail CSV: columns x,p_hat,ci_lo,ci_hi,exceedances.
std::string tail_csv(const TailCurve& curve, const Provenance& prov);
void write_tail_csv(const std::string& path, const TailCurve& curve, const Provenance& prov);

void write_text(const std::string& path, const std::string& content);

}  // namespace bandit::io
