#include "switchcast/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "switchcast/logspace.hpp"
#include "switchcast/predictors.hpp"
#include "switchcast/switch_engine.hpp"

namespace switchcast {

BmaState bma_init(const ModelPrior& prior) {
    BmaState s;
    s.logw.resize(prior.k_max());
    for (int k = 1; k <= prior.k_max(); ++k) s.logw[k - 1] = std::log(prior(k));
    return s;
}

double bma_step(BmaState& state, std::span<const double> log_predictives) {
    if (static_cast<int>(log_predictives.size()) != state.models())
        throw std::invalid_argument("log predictive count does not match model count");
    double before = log_sum_exp(state.logw);
    if (is_log_zero(before)) throw std::runtime_error("all BMA weights are zero");
    for (int i = 0; i < state.models(); ++i) state.logw[i] += log_predictives[i];
    ++state.n;
    return log_sum_exp(state.logw) - before;
}

double bma_loglik(const BmaState& state) { return log_sum_exp(state.logw); }

std::vector<double> bma_posterior(const BmaState& state) {
    double total = bma_loglik(state);
    if (is_log_zero(total)) throw std::runtime_error("all BMA weights are zero");
    std::vector<double> post(state.models());
    for (int i = 0; i < state.models(); ++i) post[i] = std::exp(state.logw[i] - total);
    return post;
}

int cuberoot_criterion(std::uint64_t n) {
    if (n <= 1) return 1;
    std::uint64_t k = 1;
    while (k * k * k < n) ++k;
    return static_cast<int>(k);
}

HypercompressionResult no_hypercompression_check(const std::vector<int>& orders, std::uint64_t n,
                                                 std::uint64_t trials, double margin_bits,
                                                 const SwitchPriorConfig& config, CounterRng rng,
                                                 bool swap_roles) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::uint64_t wins = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        CounterRng stream = rng.split(trial);
        std::vector<MarkovState> bank;
        for (int r : orders) bank.emplace_back(r, 2);
        BmaState bma = bma_init(config.model_prior);
        SwitchWeights sw = switch_init(config);
        double bma_ll = 0.0;
        std::vector<double> lp(bank.size());
        for (std::uint64_t i = 0; i < n; ++i) {
            // one-step mixture predictive of the sampling distribution
            std::vector<double> post = swap_roles ? posterior_next(sw) : bma_posterior(bma);
            double p1 = 0.0;
            for (std::size_t j = 0; j < bank.size(); ++j)
                p1 += post[j] * bank[j].predict_symbol(1);
            int x = stream.next_unit() < p1 ? 1 : 0;
            for (std::size_t j = 0; j < bank.size(); ++j) {
                lp[j] = std::log(bank[j].predict_symbol(x));
                bank[j].observe(x);
            }
            bma_ll += bma_step(bma, lp);
            switch_step(sw, lp, config);
        }
        double sw_bits = codelen_bits(sw.loglik);
        double bma_bits = codelen_bits(bma_ll);
        double rival_gain = swap_roles ? sw_bits - bma_bits : bma_bits - sw_bits;
        if (rival_gain >= margin_bits) ++wins;
    }
    HypercompressionResult res;
    res.trials = trials;
    res.frequency = static_cast<double>(wins) / static_cast<double>(trials);
    res.bound = std::pow(2.0, -margin_bits);
    res.stderr_ = std::sqrt(res.frequency * (1.0 - res.frequency) / static_cast<double>(trials));
    res.pass = res.frequency <= res.bound + 3.0 * res.stderr_;
    return res;
}

} // namespace switchcast
