#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "switchcast/predictors.hpp"
#include "switchcast/rng.hpp"

using namespace switchcast;

namespace {

std::vector<int> random_bits(CounterRng& rng, int n, double p1 = 0.5) {
    std::vector<int> xs(n);
    for (auto& x : xs) x = rng.next_unit() < p1 ? 1 : 0;
    return xs;
}

} // namespace

TEST_CASE("Laplace rule on frozen count tables") {
    BernoulliState s;
    CHECK(bernoulli_laplace_p1(s) == doctest::Approx(0.5).epsilon(1e-15));

    s = BernoulliState{0, 2}; // two ones
    CHECK(bernoulli_laplace_p1(s) == doctest::Approx(3.0 / 4.0).epsilon(1e-15));

    s = BernoulliState{2, 0}; // two zeros
    CHECK(bernoulli_laplace_p1(s) == doctest::Approx(1.0 / 4.0).epsilon(1e-15));

    auto pred = bernoulli_laplace_predict(BernoulliState{3, 1});
    REQUIRE(pred.kind == PredictiveDistribution::Kind::finite);
    REQUIRE(pred.probs.size() == 2);
    CHECK(pred.probs[0] + pred.probs[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pred.probs[1] == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("Bernoulli sequential marginal on a frozen sequence") {
    // P(0) * P(1 | one zero seen) = 1/2 * 1/3 = 1/6 for the string "01".
    BernoulliState fresh;
    CHECK(strategy_log_marginal(fresh, std::vector<int>{0, 1}) ==
          doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-14));
    // "10" has the same marginal: order must not matter.
    CHECK(strategy_log_marginal(fresh, std::vector<int>{1, 0}) ==
          doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-14));
}

TEST_CASE("Bernoulli closed-form marginal values") {
    CHECK(bernoulli_exact_marginal(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(bernoulli_exact_marginal(1, 1) == doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-13));
    CHECK(bernoulli_exact_marginal(0, 2) == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-13));
    CHECK(bernoulli_exact_marginal(2, 0) == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("sequential product equals closed form for every binary string up to n=10") {
    for (int n = 0; n <= 10; ++n) {
        for (std::uint64_t bitsv = 0; bitsv < (1ull << n); ++bitsv) {
            std::vector<int> xs(n);
            std::uint64_t n1 = 0;
            for (int i = 0; i < n; ++i) {
                xs[i] = static_cast<int>((bitsv >> i) & 1);
                n1 += xs[i];
            }
            BernoulliState fresh;
            double seq = strategy_log_marginal(fresh, xs);
            double exact = bernoulli_exact_marginal(n - n1, n1);
            REQUIRE(seq == doctest::Approx(exact).epsilon(1e-10));
        }
    }
}

TEST_CASE("Markov warm-up is uniform and counts start after it") {
    MarkovState s(1, 2);
    CHECK(s.predict_symbol(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.predict_symbol(1) == doctest::Approx(0.5).epsilon(1e-15));

    // 0,0,0,0,1,0 gives transitions 0->0 x3, 0->1 x1, 1->0 x1 and leaves the
    // context at 0, so P(1|0) = (1+1)/(4+2) = 1/3.
    for (int sym : {0, 0, 0, 0, 1, 0}) s.observe(sym);
    CHECK(s.predict_symbol(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(s.predict_symbol(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("Markov unseen context falls back to uniform") {
    MarkovState s(1, 256);
    s.observe(65);
    s.observe(66); // context is now 66, never seen on the left of a transition
    CHECK(s.predict_symbol(0) == doctest::Approx(1.0 / 256.0).epsilon(1e-15));
    CHECK(s.predict_symbol(255) == doctest::Approx(1.0 / 256.0).epsilon(1e-15));
}

TEST_CASE("order-0 Markov chain is the Laplace estimator") {
    auto rng = CounterRng::seeded(314159);
    for (int trial = 0; trial < 100; ++trial) {
        auto child = rng.split(trial);
        auto xs = random_bits(child, 1 + static_cast<int>(child.next_below(40)));
        BernoulliState bern;
        MarkovState markov(0, 2);
        double a = strategy_log_marginal(bern, xs);
        double b = strategy_log_marginal(markov, xs);
        REQUIRE(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("Markov predictive distributions are normalized") {
    auto rng = CounterRng::seeded(777);
    MarkovState s(2, 3);
    for (int i = 0; i < 200; ++i) {
        auto pred = markov_dirichlet_predict(s);
        REQUIRE(pred.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
        s.observe(static_cast<int>(rng.next_below(3)));
    }
}

TEST_CASE("histogram density on frozen states") {
    HistogramState empty(2);
    CHECK(empty.predict_density(0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(empty.predict_density(0.9) == doctest::Approx(1.0).epsilon(1e-15));

    // k=4 after observing 0.1, 0.2, 0.9: bins hold (2,0,0,1).
    HistogramState s(4);
    s.observe(0.1);
    s.observe(0.2);
    s.observe(0.9);
    CHECK(s.bin_count(0) == 2);
    CHECK(s.bin_count(3) == 1);
    CHECK(s.predict_density(0.05) == doctest::Approx((3.0 / 7.0) * 4.0).epsilon(1e-14));
    CHECK(s.predict_density(0.55) == doctest::Approx((1.0 / 7.0) * 4.0).epsilon(1e-14));

    // One bin: the density is 1 forever, whatever lands in it.
    HistogramState flat(1);
    for (double x : {0.0, 0.2, 0.99, 0.5}) {
        CHECK(flat.predict_density(x) == doctest::Approx(1.0).epsilon(1e-15));
        flat.observe(x);
    }

    CHECK_THROWS_AS((void)s.predict_density(-0.1), std::domain_error);
    CHECK_THROWS_AS((void)s.predict_density(1.1), std::domain_error);
    CHECK_THROWS_AS(s.observe(2.0), std::domain_error);
}

TEST_CASE("bin index edge handling") {
    CHECK(HistogramState::bin_index(0.0, 4) == 0);
    CHECK(HistogramState::bin_index(0.25, 4) == 0);  // right-closed bins
    CHECK(HistogramState::bin_index(0.2500001, 4) == 1);
    CHECK(HistogramState::bin_index(1.0, 4) == 3);
    CHECK(HistogramState::bin_index(0.5, 2) == 0);
    CHECK(HistogramState::bin_index(1.0, 1) == 0);
}

TEST_CASE("histogram predictive density integrates to one") {
    auto rng = CounterRng::seeded(88);
    HistogramState s(6);
    for (int i = 0; i < 100; ++i) {
        auto pred = histogram_predict(s);
        REQUIRE(pred.kind == PredictiveDistribution::Kind::histogram);
        REQUIRE(pred.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
        s.observe(rng.next_unit());
    }
}

TEST_CASE("histogram sequential marginal equals the closed form") {
    auto rng = CounterRng::seeded(4242);
    for (int k = 1; k <= 4; ++k) {
        for (int n = 0; n <= 8; ++n) {
            auto child = rng.split(static_cast<std::uint64_t>(k * 100 + n));
            std::vector<double> xs(n);
            for (auto& x : xs) x = child.next_unit();

            HistogramState fresh(k);
            double seq = strategy_log_marginal(fresh, xs);

            std::vector<std::uint64_t> counts(k, 0);
            for (double x : xs) counts[HistogramState::bin_index(x, k)]++;
            double exact = histogram_exact_marginal(counts);
            REQUIRE(seq == doctest::Approx(exact).epsilon(1e-10));
        }
    }
}

TEST_CASE("exchangeable marginals are permutation invariant") {
    auto rng = CounterRng::seeded(9001);
    std::vector<double> xs(12);
    for (auto& x : xs) x = rng.next_unit();
    std::vector<int> bits = random_bits(rng, 12);

    HistogramState hfresh(5);
    BernoulliState bfresh;
    double href = strategy_log_marginal(hfresh, xs);
    double bref = strategy_log_marginal(bfresh, bits);

    for (int perm = 0; perm < 20; ++perm) {
        auto child = rng.split(100 + perm);
        auto xs2 = xs;
        auto bits2 = bits;
        for (std::size_t i = xs2.size(); i > 1; --i) {
            std::swap(xs2[i - 1], xs2[child.next_below(i)]);
            std::swap(bits2[i - 1], bits2[child.next_below(i)]);
        }
        REQUIRE(strategy_log_marginal(hfresh, xs2) == doctest::Approx(href).epsilon(1e-10));
        REQUIRE(strategy_log_marginal(bfresh, bits2) == doctest::Approx(bref).epsilon(1e-10));
    }
}
