#include <doctest.h>

#include <cmath>
#include <vector>

#include "switchcast/logspace.hpp"
#include "switchcast/rng.hpp"
#include "switchcast/switch_engine.hpp"

using namespace switchcast;

namespace {

// Arbitrary but reproducible per-strategy log predictives in [log .05, log .95].
std::vector<double> random_losses(CounterRng& rng, int k) {
    std::vector<double> lp(k);
    for (auto& v : lp) v = std::log(0.05 + 0.9 * rng.next_unit());
    return lp;
}

} // namespace

TEST_CASE("initial weights split the strategy prior by theta") {
    auto config = SwitchPriorConfig::defaults(2, 0.5);
    config.model_prior = ModelPrior::uniform(2);
    auto w = switch_init(config);
    REQUIRE(w.active() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(w.wa[i] == doctest::Approx(std::log(0.25)).epsilon(1e-14));
        CHECK(w.wb[i] == doctest::Approx(std::log(0.25)).epsilon(1e-14));
    }
    CHECK(w.loglik == doctest::Approx(0.0).epsilon(1e-14)); // total prior mass 1
}

TEST_CASE("posterior before any outcome is the strategy prior") {
    auto config = SwitchPriorConfig::defaults(2, 0.5);
    auto post = posterior_next(switch_init(config));
    // normalized harmonic weights over {1,2}: (1/2)/(2/3) and (1/6)/(2/3)
    CHECK(post[0] == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(post[1] == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("theta = 0 freezes the start: the mixture reduces to strategy averaging") {
    auto config = SwitchPriorConfig::defaults(3, 0.0);
    auto rng = CounterRng::seeded(17);
    auto w = switch_init(config);
    for (int i = 0; i < 3; ++i) CHECK(is_log_zero(w.wa[i]));

    std::vector<double> cum(3, 0.0);
    for (int step = 0; step < 50; ++step) {
        auto lp = random_losses(rng, 3);
        for (int i = 0; i < 3; ++i) cum[i] += lp[i];
        switch_step(w, lp, config);

        double expect = kLogZero;
        for (int k = 1; k <= 3; ++k)
            expect = log_add(expect, std::log(config.model_prior(k)) + cum[k - 1]);
        REQUIRE(marginal_loglik(w) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("a lone strategy passes through unchanged") {
    auto config = SwitchPriorConfig::defaults(1, 0.5);
    auto rng = CounterRng::seeded(23);
    auto w = switch_init(config);
    double cum = 0.0;
    for (int step = 0; step < 200; ++step) {
        double lp = std::log(0.05 + 0.9 * rng.next_unit());
        cum += lp;
        switch_step(w, std::vector<double>{lp}, config);
        REQUIRE(marginal_loglik(w) == doctest::Approx(cum).epsilon(1e-12));
        REQUIRE(posterior_next(w)[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("identical strategies keep a uniform posterior") {
    auto config = SwitchPriorConfig::defaults(2, 0.4);
    config.model_prior = ModelPrior::uniform(2);
    auto rng = CounterRng::seeded(31);
    auto w = switch_init(config);
    for (int step = 0; step < 100; ++step) {
        double lp = std::log(0.05 + 0.9 * rng.next_unit());
        switch_step(w, std::vector<double>{lp, lp}, config);
        auto post = posterior_next(w);
        REQUIRE(post[0] == doctest::Approx(0.5).epsilon(1e-12));
        REQUIRE(post[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("the share update conserves mass when the strategy set is constant") {
    auto config = SwitchPriorConfig::defaults(3, 0.3);
    auto rng = CounterRng::seeded(47);
    auto w = switch_init(config);
    for (int step = 0; step < 300; ++step) {
        switch_step(w, random_losses(rng, 3), config);
        REQUIRE(w.loglik == doctest::Approx(w.post_loss_loglik).epsilon(1e-12));
    }
}

TEST_CASE("posterior is a distribution at every step") {
    auto config = SwitchPriorConfig::defaults(4, 0.6);
    auto rng = CounterRng::seeded(53);
    auto w = switch_init(config);
    for (int step = 0; step < 100; ++step) {
        switch_step(w, random_losses(rng, 4), config);
        auto post = posterior_next(w);
        double total = 0.0;
        for (double p : post) {
            REQUIRE(p >= 0.0);
            total += p;
        }
        REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("growing strategy sets admit newcomers through the switch pool only") {
    auto config = SwitchPriorConfig::defaults(3, 0.5);
    config.kset_schedule = KsetSchedule::power_growth(3, 0.5);
    auto rng = CounterRng::seeded(61);
    auto w = switch_init(config);
    REQUIRE(w.active() == 1);

    std::vector<int> expected_sizes = {2, 2, 2, 3, 3}; // |K_{n+1}| after outcome n
    for (int step = 0; step < 5; ++step) {
        switch_step(w, random_losses(rng, w.active()), config);
        REQUIRE(w.active() == expected_sizes[step]);
        auto post = posterior_next(w);
        double total = 0.0;
        for (double p : post) total += p;
        REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(std::isfinite(marginal_loglik(w)));
    }
}

TEST_CASE("select_model prefers the smallest index on ties") {
    CHECK(select_model(std::vector<double>{0.5, 0.5}) == 1);
    CHECK(select_model(std::vector<double>{0.2, 0.8}) == 2);
    CHECK(select_model(std::vector<double>{0.4, 0.4, 0.2}) == 1);
    CHECK(select_model(std::vector<double>{0.1, 0.2, 0.7}) == 3);
    CHECK_THROWS_AS(select_model(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("defensive errors") {
    auto config = SwitchPriorConfig::defaults(2, 0.5);
    auto w = switch_init(config);
    CHECK_THROWS_AS(switch_step(w, std::vector<double>{-0.1}, config), std::invalid_argument);

    SwitchWeights dead;
    dead.wa = {kLogZero};
    dead.wb = {kLogZero};
    CHECK_THROWS_AS(posterior_next(dead), std::runtime_error);
}

TEST_CASE("running average of predictive snapshots") {
    PredictiveDistribution a;
    a.probs = {0.25, 0.75};
    PredictiveDistribution b;
    b.probs = {0.5, 0.5};
    std::vector<PredictiveDistribution> snaps = {a, b};

    CHECK(cesaro_predict(std::vector<PredictiveDistribution>{a}, 1) ==
          doctest::Approx(0.75).epsilon(1e-15));
    CHECK(cesaro_predict(snaps, 0) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(cesaro_predict(snaps, 1) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(cesaro_predict(snaps, 0) + cesaro_predict(snaps, 1) ==
          doctest::Approx(1.0).epsilon(1e-15));

    PredictiveDistribution h1;
    h1.kind = PredictiveDistribution::Kind::histogram;
    h1.bins = 2;
    h1.densities = {1.5, 0.5};
    PredictiveDistribution h2;
    h2.kind = PredictiveDistribution::Kind::histogram;
    h2.bins = 2;
    h2.densities = {1.0, 1.0};
    std::vector<PredictiveDistribution> hsnaps = {h1, h2};
    CHECK(cesaro_predict(hsnaps, 0.25) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(cesaro_predict(hsnaps, 0.75) == doctest::Approx(0.75).epsilon(1e-15));

    std::vector<PredictiveDistribution> mixed = {a, h1};
    CHECK_THROWS_AS(cesaro_predict(mixed, 0), std::invalid_argument);
    CHECK_THROWS_AS(cesaro_predict(std::vector<PredictiveDistribution>{}, 0),
                    std::invalid_argument);
}
