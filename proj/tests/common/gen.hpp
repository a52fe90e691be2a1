#pragma once

// Randomized-input generators shared by the unit property tests and the
// acceptance suite.

#include <algorithm>
#include <cmath>
#include <vector>

#include "bandit/dist.hpp"
#include "bandit/rng.hpp"

namespace testgen {

/// Closed-form Bernoulli KL divergence, used throughout as an independent
/// oracle for two-point problems.
inline double bern_kl(double p, double q) {
    double v = 0.0;
    if (p > 0.0) v += p * std::log(p / q);
    if (p < 1.0) v += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return v;
}

/// Strictly increasing alphabet of `s` points in [0,1] with 0 and 1 included
/// and a minimum gap, so dual problems stay well separated.
inline std::vector<double> random_alphabet(bandit::SplitMix64& rng, std::size_t s) {
    std::vector<double> pts{0.0, 1.0};
    while (pts.size() < s) {
        const double cand = 0.02 + 0.96 * rng.next_double();
        bool ok = true;
        for (double p : pts)
            if (std::abs(p - cand) < 0.02) ok = false;
        if (ok) pts.push_back(cand);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

/// Random weights over `s` points with every weight at least `floor`.
inline std::vector<double> random_weights(bandit::SplitMix64& rng, std::size_t s,
                                          double floor = 0.02) {
    std::vector<double> w(s);
    double sum = 0.0;
    for (auto& x : w) {
        x = floor + rng.next_double();
        sum += x;
    }
    for (auto& x : w) x /= sum;
    return w;
}

inline bandit::FiniteDist random_dist_on(bandit::SplitMix64& rng,
                                         const std::vector<double>& alphabet,
                                         double floor = 0.02) {
    return bandit::FiniteDist(alphabet, random_weights(rng, alphabet.size(), floor));
}

/// Target mean strictly between m(p) and the alphabet top, away from both
/// ends by the given relative margins.
inline double random_target(bandit::SplitMix64& rng, double mean, double top,
                            double lo_margin = 0.02, double hi_margin = 0.05) {
    const double span = top - mean;
    return mean + span * (lo_margin + (1.0 - lo_margin - hi_margin) * rng.next_double());
}

}  // namespace testgen
