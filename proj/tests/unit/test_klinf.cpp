#include <doctest.h>

#include <cmath>

#include "bandit/klinf.hpp"
#include "bandit/klinf_oracle.hpp"
#include "gen.hpp"
#include "properties.hpp"

using namespace bandit;

namespace {
const FiniteAlphabet kBinary({0.0, 1.0});
}

TEST_CASE("klinf_finite: Bernoulli cases against the closed form") {
    const auto p = FiniteDist::bernoulli(0.3);

    auto r = klinf_finite(p, 0.5, kBinary);
    CHECK(r.value == doctest::Approx(testgen::bern_kl(0.3, 0.5)).epsilon(1e-10));
    CHECK(r.value == doctest::Approx(0.08228287850505178));
    REQUIRE(r.minimizer.has_value());
    CHECK(r.minimizer->mass_at(1.0) == doctest::Approx(0.5).epsilon(1e-9));

    // x at or below the mean
    CHECK(klinf_finite(FiniteDist::bernoulli(0.5), 0.4, kBinary).value == 0.0);
    // x beyond the alphabet top
    CHECK(std::isinf(klinf_finite(p, 1.2, kBinary).value));
}

TEST_CASE("klinf_finite: point mass at 0 needs log 2 to reach 0.5") {
    const auto d0 = FiniteDist::point_mass(0.0);
    const auto r = klinf_finite(d0, 0.5, kBinary);
    CHECK(r.value == doctest::Approx(0.6931471805599453).epsilon(1e-9));
    REQUIRE(r.minimizer.has_value());
    CHECK(r.minimizer->mass_at(1.0) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("klinf_finite: right-edge convention and support validation") {
    const auto p = FiniteDist::bernoulli(0.3);
    // at x exactly the top point: condition on the top mass
    CHECK(klinf_finite(p, 1.0, kBinary).value == doctest::Approx(-std::log(0.3)));
    CHECK(std::isinf(klinf_finite(FiniteDist::point_mass(0.0), 1.0, kBinary).value));
    CHECK_THROWS_AS(klinf_finite(FiniteDist({0.0, 0.5}, {0.5, 0.5}), 0.6, kBinary),
                    InvalidQuery);
}

TEST_CASE("klinf_bounded: matches the augmented-alphabet projection") {
    const auto p = FiniteDist::bernoulli(0.3);
    CHECK(klinf_bounded(p, 0.5, 0.0, 1.0).value ==
          doctest::Approx(testgen::bern_kl(0.3, 0.5)).epsilon(1e-10));

    const FiniteDist u({0.0, 0.5, 1.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(klinf_bounded(u, 0.5, 0.0, 1.0).value == 0.0);

    // half the mass must move to b=1
    const auto r = klinf_bounded(FiniteDist::point_mass(0.5), 0.75, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(0.6931471805599453).epsilon(1e-9));
    REQUIRE(r.minimizer.has_value());
    CHECK(r.minimizer->mass_at(0.5) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.minimizer->mass_at(1.0) == doctest::Approx(0.5).epsilon(1e-6));

    // right edge: -log p({b}), +inf without mass at b
    CHECK(klinf_bounded(p, 1.0, 0.0, 1.0).value == doctest::Approx(-std::log(0.3)));
    CHECK(std::isinf(klinf_bounded(FiniteDist::point_mass(0.5), 1.0, 0.0, 1.0).value));
    CHECK(std::isinf(klinf_bounded(p, 1.5, 0.0, 1.0).value));
    CHECK_THROWS_AS(klinf_bounded(p, 0.5, 0.25, 1.0), InvalidQuery);
}

TEST_CASE("klinf_moment: grid program behavior") {
    const auto p = FiniteDist::bernoulli(0.3);

    CHECK(klinf_moment(p, 0.2, 1.0, 1.0).value == 0.0);

    // support within [0,1] and B=1: the moment constraint is inactive, so the
    // value matches the bounded-support projection within grid resolution
    const auto r = klinf_moment(p, 0.5, 1.0, 1.0, 201);
    CHECK(std::abs(r.value - testgen::bern_kl(0.3, 0.5)) < 1e-3);

    // target beyond the grid reach B^{1/(1+eps)} = 1
    CHECK_THROWS_AS(klinf_moment(p, 1.5, 1.0, 1.0), InfeasibleQuery);
    // moment bound violated by p itself
    CHECK_THROWS_AS(klinf_moment(FiniteDist::point_mass(2.0), 0.5, 1.0, 1.0), InvalidQuery);

    // monotone nonincreasing in B
    const double v_small = klinf_moment(p, 0.5, 1.0, 1.0, 101).value;
    const double v_large = klinf_moment(p, 0.5, 4.0, 1.0, 101).value;
    CHECK(v_large <= v_small + 1e-4);
}

TEST_CASE("klinf_oracle: analytic cases") {
    const auto p = FiniteDist::bernoulli(0.3);
    CHECK(klinf_oracle(p, 0.2, ModelClass(kBinary)) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(klinf_oracle(FiniteDist::point_mass(0.0), 0.5, ModelClass(kBinary)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-7));
    CHECK(klinf_oracle(p, 0.5, ModelClass(kBinary)) ==
          doctest::Approx(testgen::bern_kl(0.3, 0.5)).epsilon(1e-7));
}

TEST_CASE("klinf_oracle agrees with the dual bisection on random queries") {
    SplitMix64 rng(20240817);
    int done = 0;
    while (done < 60) {
        const std::size_t s = 2 + static_cast<std::size_t>(rng.next_double() * 5.0);
        const auto alphabet = testgen::random_alphabet(rng, s);
        const auto p = testgen::random_dist_on(rng, alphabet);
        const double x = testgen::random_target(rng, p.mean(), alphabet.back());
        const FiniteAlphabet fa(alphabet);
        const double dual = klinf_finite(p, x, fa).value;
        const double oracle = klinf_oracle(p, x, ModelClass(fa));
        CHECK(std::abs(dual - oracle) <= 1e-6);
        ++done;
    }
}

TEST_CASE("klinf invariants over randomized inputs") {
    for (const auto& res : props::klinf_suite(501, 200)) {
        INFO(res.name, ": ", res.detail);
        CHECK(res.ok());
    }
}
