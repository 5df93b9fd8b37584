#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "switchcast/experiments.hpp"
#include "switchcast/rng.hpp"

using namespace switchcast;

namespace {

std::vector<std::uint8_t> synthetic_text(int n) {
    // Nontrivial byte stream with strong order-1 structure.
    auto rng = CounterRng::seeded(1001);
    std::vector<std::uint8_t> bytes(n);
    std::uint8_t prev = 'a';
    for (auto& b : bytes) {
        b = rng.next_unit() < 0.8 ? static_cast<std::uint8_t>('a' + (prev - 'a' + 1) % 4)
                                  : static_cast<std::uint8_t>('a' + rng.next_below(4));
        prev = b;
    }
    return bytes;
}

} // namespace

TEST_CASE("evaluation grids") {
    auto g = geometric_grid(100);
    REQUIRE(!g.empty());
    CHECK(g.front() == 1);
    CHECK(g.back() == 100);
    for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(g[i] > g[i - 1]);

    auto s = stride_grid(250, 100);
    REQUIRE(s == std::vector<std::uint64_t>{100, 200, 250});
    auto exact = stride_grid(200, 100);
    REQUIRE(exact == std::vector<std::uint64_t>{100, 200});
}

TEST_CASE("fresh invariant records are clean and merge by worst case") {
    RunInvariants a;
    CHECK(a.clean());
    RunInvariants b;
    b.hedge_vs_best_margin_bits = -0.5;
    CHECK(!b.clean());
    b.hedge_vs_best_margin_bits = 0.25;
    b.max_posterior_sum_err = 2e-10;
    CHECK(b.clean());
    a.merge(b);
    CHECK(a.hedge_vs_best_margin_bits == doctest::Approx(0.25));
    CHECK(a.max_posterior_sum_err == doctest::Approx(2e-10));
}

TEST_CASE("catch-up run with one strategy reduces to that strategy") {
    auto bytes = synthetic_text(3000);
    CatchupConfig cfg;
    cfg.track_conservation = true;
    auto res = run_catchup(bytes, {1}, cfg);
    REQUIRE(!res.rows.empty());
    CHECK(res.rows.back().n == 3000);
    for (const auto& row : res.rows) {
        REQUIRE(row.sw_bits == doctest::Approx(row.codelen_bits[0]).epsilon(1e-10));
        REQUIRE(row.posterior[0] == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(row.selected_order == 1);
    }
    CHECK(res.invariants.clean());
}

TEST_CASE("catch-up run invariants hold on structured text") {
    auto bytes = synthetic_text(4000);
    CatchupConfig cfg;
    cfg.track_conservation = true;
    auto res = run_catchup(bytes, {0, 1, 2}, cfg);
    CHECK(res.invariants.clean());

    for (const auto& row : res.rows) {
        // code lengths accumulate: every curve is positive and the mixture
        // stays within the additive bounds of its components
        REQUIRE(row.sw_bits > 0.0);
        REQUIRE(row.bma_bits > 0.0);
        double best = row.codelen_bits[0];
        for (double c : row.codelen_bits) best = std::min(best, c);
        REQUIRE(row.bma_bits <= best + 10.0); // prior penalty is a few bits at most
        REQUIRE(row.selected_order >= 0);
        REQUIRE(row.selected_order <= 2);
    }

    // curves are nondecreasing in n
    for (std::size_t i = 1; i < res.rows.size(); ++i) {
        REQUIRE(res.rows[i].sw_bits >= res.rows[i - 1].sw_bits);
        REQUIRE(res.rows[i].bma_bits >= res.rows[i - 1].bma_bits);
    }

    // the order-1 structure should be found by the end
    CHECK(res.rows.back().selected_order == 1);
}

TEST_CASE("catch-up stride grid and input validation") {
    auto bytes = synthetic_text(1000);
    CatchupConfig cfg;
    cfg.stride = 250;
    auto res = run_catchup(bytes, {0, 1}, cfg);
    REQUIRE(res.rows.size() == 4);
    CHECK(res.rows[0].n == 250);
    CHECK(res.rows[3].n == 1000);

    CHECK_THROWS_AS(run_catchup({}, {0, 1}, CatchupConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(run_catchup(bytes, {}, CatchupConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(run_catchup(bytes, {1, 1}, CatchupConfig{}), std::invalid_argument);
}

TEST_CASE("estimator labels") {
    CHECK(estimator_label(Estimator::sw, 4) == "switch");
    CHECK(estimator_label(Estimator::bma, 4) == "bma");
    CHECK(estimator_label(Estimator::cuberoot, 4) == "cuberoot");
    CHECK(estimator_label(Estimator::fixed_k, 4) == "fixed4");
}

TEST_CASE("one-bin histogram codes the uniform source with zero redundancy") {
    HistsimConfig cfg;
    cfg.fixed_k = 1;
    cfg.estimators = {Estimator::fixed_k};
    auto res = run_histsim(SourceDensity::uniform(), 400, 3, cfg, 99);
    REQUIRE(res.curves.size() == 1);
    CHECK(res.curves[0].estimator == "fixed1");
    CHECK(res.curves[0].replicates == 3);
    for (double m : res.curves[0].mean_bits) REQUIRE(m == doctest::Approx(0.0).epsilon(1e-10));
    for (double s : res.curves[0].se_bits) REQUIRE(s == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("histogram risk run carries its invariants and posterior traces") {
    HistsimConfig cfg;
    auto res = run_histsim(SourceDensity::uniform(), 2000, 4, cfg, 2024);
    CHECK(res.invariants.clean());
    REQUIRE(res.curves.size() == 3);
    REQUIRE(res.post_k1.size() == 4);
    for (const auto& trace : res.post_k1) {
        REQUIRE(trace.size() == res.grid.size());
        for (double p : trace) {
            REQUIRE(p >= 0.0);
            REQUIRE(p <= 1.0 + 1e-12);
        }
        // on uniform data the mixture should lean toward the single bin by the end
        REQUIRE(trace.back() > 0.5);
    }
    for (const auto& curve : res.curves) {
        REQUIRE(curve.grid == res.grid);
        REQUIRE(curve.mean_bits.size() == res.grid.size());
        REQUIRE(curve.se_bits.size() == res.grid.size());
    }
}

TEST_CASE("histogram risk runs are reproducible and scheduler-independent") {
    HistsimConfig cfg;
    cfg.workers = 1;
    auto a = run_histsim(SourceDensity::linear(0.5, 1.0), 600, 4, cfg, 7);
    cfg.workers = 3;
    auto b = run_histsim(SourceDensity::linear(0.5, 1.0), 600, 4, cfg, 7);
    auto c = run_histsim(SourceDensity::linear(0.5, 1.0), 600, 4, cfg, 8);

    REQUIRE(a.curves.size() == b.curves.size());
    bool any_diff_c = false;
    for (std::size_t i = 0; i < a.curves.size(); ++i) {
        REQUIRE(a.curves[i].mean_bits == b.curves[i].mean_bits); // bitwise
        if (a.curves[i].mean_bits != c.curves[i].mean_bits) any_diff_c = true;
    }
    CHECK(any_diff_c);
}

TEST_CASE("binary source specs") {
    auto b = BinarySourceSpec::bernoulli(0.7);
    CHECK(b.p1 == doctest::Approx(0.7));
    CHECK(!b.order1);

    auto m = BinarySourceSpec::markov1(0.9, 0.2, 0.5);
    CHECK(m.order1);
    CHECK(m.p1_given0 == doctest::Approx(0.9));
    CHECK(m.p1_given1 == doctest::Approx(0.2));
}

TEST_CASE("consistency run finds an order-1 chain") {
    ConsistencyConfig cfg;
    cfg.report_tail = 50;
    auto res = run_consistency(BinarySourceSpec::markov1(0.9, 0.2), 5000, 2, cfg, 11);
    CHECK(res.invariants.clean());
    REQUIRE(!res.rows.empty());

    // rows for both streams, tail rows contiguous up to n
    std::vector<std::uint64_t> finals;
    for (const auto& row : res.rows) {
        REQUIRE(row.posterior.size() == 2);
        if (row.n == 5000) {
            finals.push_back(row.seed_index);
            REQUIRE(row.selected_order == 1);
            REQUIRE(row.posterior[1] > 0.9);
        }
    }
    REQUIRE(finals == std::vector<std::uint64_t>{0, 1});

    std::uint64_t tail_rows = 0;
    for (const auto& row : res.rows)
        if (row.seed_index == 0 && row.n > 5000 - 50) ++tail_rows;
    CHECK(tail_rows == 50);
}

TEST_CASE("redundancy measured by realized lift and by summed divergence agrees") {
    auto exact = cross_check_redundancy(SourceDensity::uniform(), 1, 500, 5, 42);
    CHECK(exact.mean_realized_bits == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(exact.mean_kl_bits == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(exact.agree);

    auto lin = cross_check_redundancy(SourceDensity::linear(0.5, 1.0), 4, 200, 20, 43);
    CHECK(lin.mean_realized_bits > 0.0);
    CHECK(lin.mean_kl_bits > 0.0);
    CHECK(lin.pooled_se_bits > 0.0);
    CHECK(lin.agree);
}
