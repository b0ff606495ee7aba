#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cavnet/channel_models.hpp"
#include "cavnet/units.hpp"

using namespace cavnet;

TEST_CASE("gamma_cavity closed forms") {
    ChannelModel strong;
    strong.regime = ChannelModel::Regime::Strong;
    strong.sigma = 0.5;
    CHECK(gamma_cavity(strong, 1e4, 1e5) ==
          doctest::Approx(1.0 - std::exp(-0.05)).epsilon(1e-12));
    CHECK(gamma_cavity(strong, 1e4, 1e5) == doctest::Approx(0.048771).epsilon(1e-4));

    ChannelModel weak;
    weak.regime = ChannelModel::Regime::Weak;
    CHECK(gamma_cavity(weak, 3.0, 3.0) == doctest::Approx(10.0 / 11.0).epsilon(1e-12));

    // noiseless limit
    CHECK(gamma_cavity(strong, 1e-9, 1.0) == doctest::Approx(0.0).epsilon(1e-8));

    CHECK_THROWS_AS(gamma_cavity(strong, 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(gamma_cavity(strong, 1.0, -1.0), ValidationError);

    // ratio-only dependence: any consistent unit convention
    CHECK(gamma_cavity(strong, 2e4, 2e5) == gamma_cavity(strong, 1e4, 1e5));
}

TEST_CASE("gamma_cavity monotonicity on a grid") {
    ChannelModel strong;
    strong.regime = ChannelModel::Regime::Strong;
    ChannelModel weak;
    weak.regime = ChannelModel::Regime::Weak;
    for (const auto& model : {strong, weak}) {
        for (int i = 0; i < 20; ++i) {
            for (int j = 0; j < 20; ++j) {
                const double kappa = std::pow(10.0, 3.0 + i * 0.15);
                const double g = std::pow(10.0, 4.0 + j * 0.15);
                const double base = gamma_cavity(model, kappa, g);
                CHECK(base >= 0.0);
                CHECK(base < 1.0);
                CHECK(gamma_cavity(model, kappa * 1.3, g) > base);
                CHECK(gamma_cavity(model, kappa, g * 1.3) < base);
            }
        }
    }
}

TEST_CASE("strong model first-order expansion at small ratio") {
    ChannelModel strong;
    strong.regime = ChannelModel::Regime::Strong;
    strong.sigma = 0.5;
    for (double ratio : {1e-4, 1e-3, 1e-2}) {
        const double g = 1e6;
        const double exact = gamma_cavity(strong, ratio * g, g);
        const double linear = strong.sigma * ratio;
        CHECK(std::abs(exact - linear) / linear <= 0.01);
    }
}

TEST_CASE("relaxation and dephasing factors") {
    CHECK(relaxation_factor(291.99, 0.0, 5.0) == 1.0);
    CHECK(relaxation_factor(291.99, 1.0, 5.0) == doctest::Approx(0.983018).epsilon(1e-5));
    CHECK(relaxation_factor(100.0, 100.0 / 5.0, 5.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(relaxation_factor(0.0, 1.0, 5.0), ValidationError);

    CHECK(dephasing_factor(183.9, 0.0, 6.0) == 1.0);
    CHECK(dephasing_factor(183.9, 1.0, 6.0) == doctest::Approx(0.967901).epsilon(1e-5));
    double prev = 1.0;
    for (double t = 0.5; t < 10.0; t += 0.5) {
        const double f = dephasing_factor(183.9, t, 6.0);
        CHECK(f <= prev);
        prev = f;
    }

    // multiplicative composition over consecutive intervals
    for (double t1 : {0.3, 1.7, 4.0})
        for (double t2 : {0.1, 2.2}) {
            CHECK(relaxation_factor(291.99, t1 + t2, 5.0) ==
                  doctest::Approx(relaxation_factor(291.99, t1, 5.0) *
                                  relaxation_factor(291.99, t2, 5.0))
                      .epsilon(1e-14));
        }
}

TEST_CASE("cooperativity") {
    const double c = cooperativity(kTwoPi * 5.8, kTwoPi * 0.34, kTwoPi * 6.0);
    CHECK(c == doctest::Approx(16.49).epsilon(1e-3));
    CHECK(cooperativity(2.0 * kTwoPi * 5.8, kTwoPi * 0.34, kTwoPi * 6.0) ==
          doctest::Approx(4.0 * c).epsilon(1e-12));
    // scale invariance: MHz vs rad/us
    CHECK(cooperativity(5.8, 0.34, 6.0) == doctest::Approx(c).epsilon(1e-12));
    CHECK_THROWS_AS(cooperativity(1.0, 0.0, 1.0), ValidationError);
}

TEST_CASE("latency model") {
    LatencyModel model;
    CHECK(latency_ns(model, 1e5, 250.0) == doctest::Approx(3162.279).epsilon(1e-6));
    CHECK(latency_ns(model, 1e5, 1e4) == doctest::Approx(3162.328).epsilon(1e-6));
    CHECK(latency_ns(model, 1e5, 1e4) - latency_ns(model, 1e5, 0.0) ==
          doctest::Approx(0.05).epsilon(1e-9));
    CHECK(latency_seconds(model, 1e5, 0.0) ==
          doctest::Approx(std::pow(1e5, -1.1)).epsilon(1e-14));
    CHECK_THROWS_AS(latency_ns(model, 0.0, 100.0), ValidationError);

    // deterministic pure function
    CHECK(latency_ns(model, 12345.0, 777.0) == latency_ns(model, 12345.0, 777.0));
}

TEST_CASE("power fit evaluation") {
    const PowerFit ent{1.471, 0.054, -0.894};
    CHECK(eval_power_fit(ent, 16.49) == doctest::Approx(0.8174).epsilon(1e-4));
    const PowerFit flat{1.0, 0.0, 0.0};
    CHECK(eval_power_fit(flat, 123.0) == doctest::Approx(1.0).epsilon(1e-14));
    const PowerFit rnd{0.981, 0.054, -0.263};
    CHECK(eval_power_fit(rnd, 1.0) == doctest::Approx(0.718).epsilon(1e-12));
    CHECK_THROWS_AS(eval_power_fit(ent, 0.0), ValidationError);
}
