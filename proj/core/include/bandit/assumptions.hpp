#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bandit/dist.hpp"

namespace bandit {

/// Empirical check of the time-uniform concentration inequality
///   P( exists n : n KL_inf(emp_n, m(d)) - g(n) >= x ) <= exp(-x),
/// with g(n) = c1 log(1+n) + c2, over sample paths of length n_max.
struct Assumption1Report {
    std::vector<double> x_grid;
    std::vector<double> frequency;   // empirical P(M >= x), per x
    std::vector<double> bound;       // exp(-x), per x
    double safety_factor = 1.5;
    bool verdict = false;            // every frequency <= safety_factor * bound
    std::uint64_t paths = 0;
    std::uint64_t n_max = 0;
    double g_c1 = 0.0, g_c2 = 0.0;
    // consistency audit of the dual fast path against the gradient oracle
    std::uint64_t audited = 0;
    double max_audit_gap = 0.0;
};

Assumption1Report check_assumption1(const FiniteDist& d, const ModelClass& cls, double g_c1,
                                    double g_c2, std::uint64_t n_max, std::uint64_t paths,
                                    std::vector<double> x_grid, std::uint64_t base_seed,
                                    unsigned workers = 1, double safety_factor = 1.5);

/// Empirical check of the lower-deviation inequality
///   P( KL_inf(emp_n, m+delta) <= KL_inf(d, m+delta) - dd ) <= exp(-n c dd^2),
/// over a grid of sample sizes n and deviations dd. c_hat is the fitted rate;
/// it is absent when no cell produced enough violations to fit (the bound is
/// then trivially satisfied at the tested scales).
struct Assumption2Report {
    std::vector<std::uint64_t> n_grid;
    std::vector<double> d_grid;
    // row-major [n][dd]
    std::vector<std::vector<double>> frequency;
    std::vector<std::vector<std::uint64_t>> violations;
    double delta = 0.0;
    double ref_klinf = 0.0;  // KL_inf(d, m+delta)
    std::uint64_t paths = 0;
    std::optional<double> c_hat;  // least-squares slope of -log freq on n*dd^2
    bool envelope_ok = false;     // c_hat present and > 0
    bool insufficient_data = false;
    std::uint64_t min_violations_for_fit = 20;
    // audit, as above
    std::uint64_t audited = 0;
    double max_audit_gap = 0.0;
};

Assumption2Report check_assumption2(const FiniteDist& d, const ModelClass& cls, double delta,
                                    std::vector<std::uint64_t> n_grid,
                                    std::vector<double> d_grid, std::uint64_t paths,
                                    std::uint64_t base_seed, unsigned workers = 1);

/// Finite-sample Sanov envelope (n+1)^s exp(-n rate): an upper bound on the
/// probability that an empirical distribution over an s-letter alphabet
/// lands in a set whose KL rate is at least `rate`. Used as a test oracle.
double sanov_bound(std::size_t alphabet_size, std::uint64_t n, double rate);

}  // namespace bandit
