#include "switchcast/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "switchcast/baselines.hpp"
#include "switchcast/logspace.hpp"
#include "switchcast/predictors.hpp"
#include "switchcast/switch_engine.hpp"

namespace switchcast {

std::vector<std::uint64_t> geometric_grid(std::uint64_t n_max, double ratio) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (!(ratio > 1.0)) throw std::invalid_argument("grid ratio must be > 1");
    std::vector<std::uint64_t> grid;
    double v = 1.0;
    while (true) {
        auto n = static_cast<std::uint64_t>(std::ceil(v));
        if (n >= n_max) break;
        if (grid.empty() || n > grid.back()) grid.push_back(n);
        v *= ratio;
    }
    grid.push_back(n_max);
    return grid;
}

std::vector<std::uint64_t> stride_grid(std::uint64_t n_max, std::uint64_t stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    std::vector<std::uint64_t> grid;
    for (std::uint64_t n = stride; n < n_max; n += stride) grid.push_back(n);
    grid.push_back(n_max);
    return grid;
}

bool RunInvariants::clean(double tol_bits) const {
    return hedge_vs_best_margin_bits >= -tol_bits && hedge_vs_all_margin_bits >= -tol_bits &&
           hedge_vs_bma_margin_bits >= -tol_bits && bma_band_margin_bits >= -tol_bits &&
           max_posterior_sum_err <= 1e-9 && max_conservation_rel_err <= 1e-12;
}

void RunInvariants::merge(const RunInvariants& other) {
    hedge_vs_best_margin_bits = std::min(hedge_vs_best_margin_bits, other.hedge_vs_best_margin_bits);
    hedge_vs_all_margin_bits = std::min(hedge_vs_all_margin_bits, other.hedge_vs_all_margin_bits);
    hedge_vs_bma_margin_bits = std::min(hedge_vs_bma_margin_bits, other.hedge_vs_bma_margin_bits);
    bma_band_margin_bits = std::min(bma_band_margin_bits, other.bma_band_margin_bits);
    max_posterior_sum_err = std::max(max_posterior_sum_err, other.max_posterior_sum_err);
    max_conservation_rel_err = std::max(max_conservation_rel_err, other.max_conservation_rel_err);
}

namespace {

// Margins of the mixture-bound chain and the posterior sanity checks on one
// emitted row. codelen entries and sw/bma are cumulative bits.
void record_row_invariants(RunInvariants& inv, const SwitchPriorConfig& prior,
                           std::span<const double> strategy_bits, double bma_bits, double sw_bits,
                           std::span<const double> posterior) {
    double m1_bits = -std::log2(1.0 - prior.theta); // -log2 pi_m(1)
    int best = 0;
    for (int i = 1; i < static_cast<int>(strategy_bits.size()); ++i)
        if (strategy_bits[i] < strategy_bits[best]) best = i;
    double band = m1_bits - std::log2(prior.model_prior(best + 1));
    inv.hedge_vs_best_margin_bits =
        std::min(inv.hedge_vs_best_margin_bits, strategy_bits[best] + band - sw_bits);
    for (int i = 0; i < static_cast<int>(strategy_bits.size()); ++i) {
        double bound = strategy_bits[i] + m1_bits - std::log2(prior.model_prior(i + 1));
        inv.hedge_vs_all_margin_bits = std::min(inv.hedge_vs_all_margin_bits, bound - sw_bits);
    }
    inv.hedge_vs_bma_margin_bits =
        std::min(inv.hedge_vs_bma_margin_bits, bma_bits + m1_bits - sw_bits);
    double lo = bma_bits - strategy_bits[best];
    double hi = -std::log2(prior.model_prior(best + 1)) - lo;
    inv.bma_band_margin_bits = std::min({inv.bma_band_margin_bits, lo, hi});
    double sum = 0.0;
    for (double p : posterior) sum += p;
    inv.max_posterior_sum_err = std::max(inv.max_posterior_sum_err, std::abs(sum - 1.0));
}

double sample_stderr(std::span<const double> xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / (static_cast<double>(xs.size() - 1) * static_cast<double>(xs.size())));
}

// Runs fn(r) for r in [0, total) across `workers` threads; each index is
// handled by exactly one thread, so fn must only touch per-index slots.
template <typename Fn>
void parallel_replicates(std::uint64_t total, int workers, Fn&& fn) {
    int w = std::max(1, workers);
    if (w == 1 || total <= 1) {
        for (std::uint64_t r = 0; r < total; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int t = 0; t < w; ++t)
        pool.emplace_back([&, t] {
            for (std::uint64_t r = t; r < total; r += static_cast<std::uint64_t>(w)) fn(r);
        });
    for (std::thread& th : pool) th.join();
}

} // namespace

// ---------------------------------------------------------------------------

CatchupResult run_catchup(const std::vector<std::uint8_t>& bytes, const std::vector<int>& orders,
                          const CatchupConfig& config) {
    if (bytes.empty()) throw std::invalid_argument("corpus is empty");
    if (orders.empty()) throw std::invalid_argument("order list is empty");
    for (std::size_t i = 0; i < orders.size(); ++i)
        for (std::size_t j = i + 1; j < orders.size(); ++j)
            if (orders[i] == orders[j]) throw std::invalid_argument("orders must be distinct");

    std::uint64_t n_max = bytes.size();
    std::vector<std::uint64_t> grid =
        config.stride > 0 ? stride_grid(n_max, config.stride) : geometric_grid(n_max);

    int m = static_cast<int>(orders.size());
    SwitchPriorConfig prior = SwitchPriorConfig::defaults(m, config.theta);
    std::vector<MarkovState> bank;
    bank.reserve(m);
    for (int r : orders) bank.emplace_back(r, 256);
    BmaState bma = bma_init(prior.model_prior);
    SwitchWeights sw = switch_init(prior);

    CatchupResult res;
    res.orders = orders;
    res.rows.reserve(grid.size());
    std::vector<double> lp(m), cum_nats(m, 0.0);
    double bma_nats = 0.0;
    std::size_t next_grid = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        int x = bytes[n - 1];
        for (int i = 0; i < m; ++i) {
            lp[i] = std::log(bank[i].predict_symbol(x));
            bank[i].observe(x);
            cum_nats[i] += lp[i];
        }
        bma_nats += bma_step(bma, lp);
        switch_step(sw, lp, prior);
        if (config.track_conservation) {
            double rel = std::abs(sw.loglik - sw.post_loss_loglik) /
                         std::max(1.0, std::abs(sw.post_loss_loglik));
            res.invariants.max_conservation_rel_err =
                std::max(res.invariants.max_conservation_rel_err, rel);
        }
        if (next_grid < grid.size() && n == grid[next_grid]) {
            ++next_grid;
            CatchupRow row;
            row.n = n;
            row.codelen_bits.resize(m);
            for (int i = 0; i < m; ++i) row.codelen_bits[i] = codelen_bits(cum_nats[i]);
            row.bma_bits = codelen_bits(bma_nats);
            row.sw_bits = codelen_bits(sw.loglik);
            row.posterior = posterior_next(sw);
            row.selected_order = orders[select_model(row.posterior) - 1];
            record_row_invariants(res.invariants, prior, row.codelen_bits, row.bma_bits,
                                  row.sw_bits, row.posterior);
            res.rows.push_back(std::move(row));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------

std::string estimator_label(Estimator e, int fixed_k) {
    switch (e) {
        case Estimator::sw: return "switch";
        case Estimator::bma: return "bma";
        case Estimator::cuberoot: return "cuberoot";
        case Estimator::fixed_k: return "fixed" + std::to_string(fixed_k);
    }
    return "?";
}

HistsimResult run_histsim(const SourceDensity& density, std::uint64_t n_max,
                          std::uint64_t replicates, const HistsimConfig& config,
                          std::uint64_t seed) {
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    int k_max = config.k_max > 0
                    ? config.k_max
                    : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_max))));
    if (config.fixed_k < 1 || config.fixed_k > k_max)
        throw std::invalid_argument("fixed_k must lie in 1..k_max");

    SwitchPriorConfig prior = SwitchPriorConfig::defaults(k_max, config.theta);
    if (config.tau > 0.0) prior.kset_schedule = KsetSchedule::power_growth(k_max, config.tau);

    std::vector<std::uint64_t> grid = geometric_grid(n_max);
    std::size_t g = grid.size();
    std::size_t n_est = config.estimators.size();
    CounterRng root = CounterRng::seeded(seed);

    // [estimator][replicate][grid]
    std::vector<std::vector<std::vector<double>>> red(
        n_est, std::vector<std::vector<double>>(replicates, std::vector<double>(g)));
    std::vector<std::vector<double>> post_k1(replicates, std::vector<double>(g, 0.0));
    std::vector<RunInvariants> inv(replicates);

    bool want_sw = false, want_bma = false;
    for (Estimator e : config.estimators) {
        if (e == Estimator::sw) want_sw = true;
        if (e == Estimator::bma) want_bma = true;
    }

    parallel_replicates(replicates, config.workers, [&](std::uint64_t r) {
        CounterRng rng = root.split(r);
        std::vector<HistogramState> bank;
        bank.reserve(k_max);
        for (int k = 1; k <= k_max; ++k) bank.emplace_back(k);
        SwitchWeights sw = switch_init(prior);
        BmaState bma = bma_init(prior.model_prior);
        std::vector<double> lp(k_max);
        std::vector<double> cum_nats(k_max, 0.0);
        double src_nats = 0.0, bma_nats = 0.0, cuberoot_nats = 0.0;
        std::size_t next_grid = 0;
        for (std::uint64_t i = 1; i <= n_max; ++i) {
            double x = sample_source(density, rng);
            src_nats += std::log(density.pdf(x));
            int active = prior.kset_schedule.size_at(i);
            for (int k = 0; k < k_max; ++k) {
                lp[k] = std::log(bank[k].predict_density(x));
                cum_nats[k] += lp[k];
            }
            if (want_sw) switch_step(sw, {lp.data(), static_cast<std::size_t>(active)}, prior);
            if (want_bma) bma_nats += bma_step(bma, lp);
            // the cube-root criterion picks bins from the sample size seen so
            // far: outcome i is predicted with ceil((i-1)^(1/3)) bins
            cuberoot_nats += lp[cuberoot_criterion(i - 1) - 1];
            for (int k = 0; k < k_max; ++k) bank[k].observe(x);

            if (next_grid < grid.size() && i == grid[next_grid]) {
                std::vector<double> posterior;
                if (want_sw) {
                    posterior = posterior_next(sw);
                    post_k1[r][next_grid] = posterior[0];
                }
                double src_bits = nats_to_bits(src_nats);
                for (std::size_t e = 0; e < n_est; ++e) {
                    double est_bits = 0.0;
                    switch (config.estimators[e]) {
                        case Estimator::sw: est_bits = nats_to_bits(sw.loglik); break;
                        case Estimator::bma: est_bits = nats_to_bits(bma_nats); break;
                        case Estimator::cuberoot: est_bits = nats_to_bits(cuberoot_nats); break;
                        case Estimator::fixed_k:
                            est_bits = nats_to_bits(cum_nats[config.fixed_k - 1]);
                            break;
                    }
                    red[e][r][next_grid] = src_bits - est_bits;
                }
                if (want_sw && want_bma) {
                    std::vector<double> strat_bits(k_max);
                    for (int k = 0; k < k_max; ++k) strat_bits[k] = codelen_bits(cum_nats[k]);
                    record_row_invariants(inv[r], prior, strat_bits, codelen_bits(bma_nats),
                                          codelen_bits(sw.loglik), posterior);
                }
                ++next_grid;
            }
        }
    });

    HistsimResult res;
    res.grid = grid;
    res.post_k1 = std::move(post_k1);
    for (std::uint64_t r = 0; r < replicates; ++r) res.invariants.merge(inv[r]);
    for (std::size_t e = 0; e < n_est; ++e) {
        RiskCurve curve;
        curve.estimator = estimator_label(config.estimators[e], config.fixed_k);
        curve.grid = grid;
        curve.replicates = static_cast<int>(replicates);
        curve.mean_bits.resize(g);
        curve.se_bits.resize(g);
        std::vector<double> col(replicates);
        for (std::size_t gi = 0; gi < g; ++gi) {
            for (std::uint64_t r = 0; r < replicates; ++r) col[r] = red[e][r][gi];
            double mean = 0.0;
            for (double v : col) mean += v;
            mean /= static_cast<double>(replicates);
            curve.mean_bits[gi] = mean;
            curve.se_bits[gi] = sample_stderr(col, mean);
        }
        res.curves.push_back(std::move(curve));
    }
    return res;
}

// ---------------------------------------------------------------------------

BinarySourceSpec BinarySourceSpec::bernoulli(double p1) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("p1 must be in [0,1]");
    BinarySourceSpec s;
    s.p1 = p1;
    return s;
}

BinarySourceSpec BinarySourceSpec::markov1(double p1_given0, double p1_given1, double first_p1) {
    BinarySourceSpec s;
    s.order1 = true;
    s.p1 = first_p1;
    s.p1_given0 = p1_given0;
    s.p1_given1 = p1_given1;
    return s;
}

ConsistencyResult run_consistency(const BinarySourceSpec& source, std::uint64_t n,
                                  std::uint64_t n_seeds, const ConsistencyConfig& config,
                                  std::uint64_t seed) {
    if (n < 1 || n_seeds < 1) throw std::invalid_argument("n and seed count must be >= 1");
    int m = static_cast<int>(config.orders.size());
    if (m < 1) throw std::invalid_argument("order list is empty");
    SwitchPriorConfig prior = SwitchPriorConfig::defaults(m, config.theta);
    std::vector<std::uint64_t> grid = geometric_grid(n);
    CounterRng root = CounterRng::seeded(seed);

    std::vector<std::vector<ConsistencyRow>> rows(n_seeds);
    std::vector<RunInvariants> inv(n_seeds);
    parallel_replicates(n_seeds, config.workers, [&](std::uint64_t s) {
        CounterRng rng = root.split(s);
        std::vector<MarkovState> bank;
        for (int r : config.orders) bank.emplace_back(r, 2);
        SwitchWeights sw = switch_init(prior);
        BmaState bma = bma_init(prior.model_prior);
        std::vector<double> lp(m), cum_nats(m, 0.0);
        double bma_nats = 0.0;
        std::size_t next_grid = 0;
        int prev = -1;
        for (std::uint64_t i = 1; i <= n; ++i) {
            double p1 = source.p1;
            if (source.order1 && prev >= 0) p1 = prev == 1 ? source.p1_given1 : source.p1_given0;
            int x = rng.next_unit() < p1 ? 1 : 0;
            prev = x;
            for (int k = 0; k < m; ++k) {
                lp[k] = std::log(bank[k].predict_symbol(x));
                bank[k].observe(x);
                cum_nats[k] += lp[k];
            }
            bma_nats += bma_step(bma, lp);
            switch_step(sw, lp, prior);
            bool on_grid = next_grid < grid.size() && i == grid[next_grid];
            if (on_grid) ++next_grid;
            bool in_tail = i + config.report_tail > n;
            if (on_grid || in_tail) {
                ConsistencyRow row;
                row.seed_index = s;
                row.n = i;
                row.posterior = posterior_next(sw);
                row.selected_order = config.orders[select_model(row.posterior) - 1];
                std::vector<double> strat_bits(m);
                for (int k = 0; k < m; ++k) strat_bits[k] = codelen_bits(cum_nats[k]);
                record_row_invariants(inv[s], prior, strat_bits, codelen_bits(bma_nats),
                                      codelen_bits(sw.loglik), row.posterior);
                rows[s].push_back(std::move(row));
            }
        }
    });

    ConsistencyResult res;
    res.orders = config.orders;
    for (std::uint64_t s = 0; s < n_seeds; ++s) {
        res.invariants.merge(inv[s]);
        for (ConsistencyRow& row : rows[s]) res.rows.push_back(std::move(row));
    }
    return res;
}

// ---------------------------------------------------------------------------

CrossCheckResult cross_check_redundancy(const SourceDensity& density, int fixed_k, std::uint64_t n,
                                        std::uint64_t replicates, std::uint64_t seed) {
    if (fixed_k < 1) throw std::invalid_argument("fixed_k must be >= 1");
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    CounterRng root = CounterRng::seeded(seed);
    std::vector<double> realized(replicates), kl(replicates);
    for (std::uint64_t r = 0; r < replicates; ++r) {
        CounterRng rng = root.split(r);
        HistogramState state(fixed_k);
        double red_bits = 0.0, kl_bits = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            kl_bits += exact_step_kl_bits(density, state.predict());
            double x = sample_source(density, rng);
            red_bits += std::log2(density.pdf(x)) - std::log2(state.predict_density(x));
            state.observe(x);
        }
        realized[r] = red_bits;
        kl[r] = kl_bits;
    }
    CrossCheckResult res;
    double mr = 0.0, mk = 0.0;
    for (std::uint64_t r = 0; r < replicates; ++r) {
        mr += realized[r];
        mk += kl[r];
    }
    mr /= static_cast<double>(replicates);
    mk /= static_cast<double>(replicates);
    res.mean_realized_bits = mr;
    res.mean_kl_bits = mk;
    res.se_realized_bits = sample_stderr(realized, mr);
    res.se_kl_bits = sample_stderr(kl, mk);
    res.pooled_se_bits =
        std::sqrt(res.se_realized_bits * res.se_realized_bits + res.se_kl_bits * res.se_kl_bits);
    res.agree = std::abs(mr - mk) <= 3.0 * res.pooled_se_bits;
    return res;
}

} // namespace switchcast
