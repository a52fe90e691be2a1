#include <doctest.h>

#include <cmath>

#include "bandit/constants.hpp"
#include "gen.hpp"

using namespace bandit;

namespace {
const ModelClass kBinary = FiniteAlphabet({0.0, 1.0});

BanditInstance binary_instance(std::vector<double> means) {
    std::vector<FiniteDist> arms;
    for (double m : means) arms.push_back(FiniteDist::bernoulli(m));
    return BanditInstance(std::move(arms), std::get<FiniteAlphabet>(kBinary));
}
}  // namespace

TEST_CASE("lai-robbins constants") {
    const auto inst = binary_instance({0.5, 0.3});
    CHECK(lai_robbins_constant(inst, 2) ==
          doctest::Approx(1.0 / testgen::bern_kl(0.3, 0.5)).epsilon(1e-10));

    const auto inst2 = BanditInstance(
        {FiniteDist::bernoulli(0.5), FiniteDist::point_mass(0.0)},
        std::get<FiniteAlphabet>(kBinary));
    CHECK(lai_robbins_constant(inst2, 2) ==
          doctest::Approx(1.4426950408889634).epsilon(1e-9));  // 1/log 2

    // solver stress: a sliver of a gap gives a very large but finite constant
    const auto sliver = BanditInstance(
        {FiniteDist::bernoulli(0.3 + 1e-9), FiniteDist::bernoulli(0.3)},
        std::get<FiniteAlphabet>(kBinary));
    const double huge = lai_robbins_constant(sliver, 2);
    CHECK(std::isfinite(huge));
    CHECK(huge > 1e12);

    CHECK_THROWS_AS(lai_robbins_constant(inst, 1), InvalidQuery);
}

TEST_CASE("discrimination ratio: point mass at the top is infeasible") {
    const auto r = discrimination_ratio(FiniteDist::point_mass(1.0), 0.5, kBinary);
    CHECK(std::isinf(r.value));
    CHECK_FALSE(r.argmin.has_value());
    for (const auto& [eps, v] : r.slack_trend) CHECK(std::isinf(v));
}

TEST_CASE("discrimination ratio: Bernoulli pair is not discrimination equivalent") {
    const auto r = discrimination_ratio(FiniteDist::bernoulli(0.7), 0.3, kBinary);
    CHECK(std::isfinite(r.value));
    CHECK(r.value > 1.01);
    // infimum attained at the point mass at 0: log(1/0.3) / log(1/0.7)
    CHECK(r.value == doctest::Approx(3.375546347692839).epsilon(1e-6));
    REQUIRE(r.argmin.has_value());
    CHECK(r.argmin->mean() < 0.3);
    CHECK(r.slack_trend.size() == 3);
    CHECK(r.slack == doctest::Approx(1e-4));
    CHECK(r.method == "refined");

    CHECK_THROWS_AS(discrimination_ratio(FiniteDist::bernoulli(0.3), 0.5, kBinary),
                    InvalidQuery);
}

TEST_CASE("discrimination ratio is at least 1 on random feasible queries") {
    SplitMix64 rng(4242);
    int done = 0;
    while (done < 60) {
        const auto alphabet = testgen::random_alphabet(rng, 2 + done % 2);
        const auto nu_j = testgen::random_dist_on(rng, alphabet);
        // feasible target: above the bottom support point, below the mean
        const double lo = alphabet.front();
        if (nu_j.mean() - lo < 0.05) continue;
        const double mu = lo + (0.02 + 0.9 * rng.next_double()) * (nu_j.mean() - lo - 0.01);
        const auto r = discrimination_ratio(nu_j, mu, FiniteAlphabet(alphabet));
        if (std::isfinite(r.value)) CHECK(r.value >= 1.0 - 1e-8);
        ++done;
    }
}

TEST_CASE("general simplex search matches the 1-D specialization on pairs") {
    SplitMix64 rng(515);
    RatioOptions forced;
    forced.force_simplex = true;
    for (int c = 0; c < 12; ++c) {
        const double p = 0.35 + 0.6 * rng.next_double();
        const double mu = 0.05 + (p - 0.15) * rng.next_double();
        if (mu >= p - 0.05) continue;
        const auto direct = discrimination_ratio(FiniteDist::bernoulli(p), mu, kBinary);
        const auto general = discrimination_ratio(FiniteDist::bernoulli(p), mu, kBinary, forced);
        if (std::isinf(direct.value)) {
            CHECK(std::isinf(general.value));
        } else {
            CHECK(general.value == doctest::Approx(direct.value).epsilon(1e-4));
        }
    }
}

TEST_CASE("slack refinement never increases the reported value") {
    const auto r = discrimination_ratio(FiniteDist::bernoulli(0.7), 0.3, kBinary);
    // trend values are finite and the 1e-4 figure is the reported one
    CHECK(r.slack_trend.back().second == r.value);
}

TEST_CASE("theoretical tail exponents") {
    CHECK(theorem3_exponent(2) == -1.0);
    CHECK(theorem3_exponent(3) == -2.0);
    CHECK(theorem3_exponent(5) == -4.0);
    CHECK_THROWS_AS(theorem3_exponent(1), InvalidQuery);

    const auto inst = binary_instance({0.7, 0.3});
    CHECK(tail_exponent_theory(inst, 2) == doctest::Approx(-3.375546347692839).epsilon(1e-6));

    // an optimal arm at a point mass makes the ratio infinite
    const auto inst2 = BanditInstance(
        {FiniteDist::point_mass(1.0), FiniteDist::bernoulli(0.3)},
        std::get<FiniteAlphabet>(kBinary));
    CHECK(tail_exponent_theory(inst2, 2) == -std::numeric_limits<double>::infinity());

    // three arms: the slope is the sum of two ratios, each at least 1
    const auto inst3 = binary_instance({0.7, 0.5, 0.3});
    const double e3 = tail_exponent_theory(inst3, 3);
    CHECK(e3 <= -2.0);
    CHECK(e3 == doctest::Approx(-(3.375546347692839 + 1.9433582098747317)).epsilon(1e-5));

    // nonincreasing in the rank
    CHECK(tail_exponent_theory(inst3, 3) <= tail_exponent_theory(inst3, 2));
}

TEST_CASE("discrimination equivalence verdicts") {
    const auto report = is_discrimination_equivalent(
        {{FiniteDist::bernoulli(0.7), FiniteDist::bernoulli(0.3)}}, kBinary, 0.05);
    CHECK_FALSE(report.equivalent);
    CHECK(report.pairs.size() == 1);
    CHECK(report.pairs[0].ratio > 1.05);

    const auto infinite = is_discrimination_equivalent(
        {{FiniteDist::point_mass(1.0), FiniteDist::bernoulli(0.3)}}, kBinary, 0.05);
    CHECK_FALSE(infinite.equivalent);
    CHECK(std::isinf(infinite.pairs[0].ratio));

    const auto empty = is_discrimination_equivalent({}, kBinary, 0.05);
    CHECK(empty.equivalent);
    CHECK(empty.vacuous);
}
