#pragma once

// Bayesian model averaging over the same strategy bank and model prior as
// the switch engine, the data-independent cube-root histogram bin criterion,
// and a Monte Carlo check of the no-hypercompression inequality (one
// distribution beats another by a margin of b bits with probability at most
// 2^-b under the latter).

#include <cstdint>
#include <span>
#include <vector>

#include "switchcast/prior.hpp"
#include "switchcast/rng.hpp"

namespace switchcast {

struct BmaState {
    std::vector<double> logw; // log pi_k(k) + log p_k(x^n), index k-1
    std::uint64_t n = 0;

    int models() const { return static_cast<int>(logw.size()); }
};

BmaState bma_init(const ModelPrior& prior);

// Consume one outcome; returns log p_bma(x_n | x^{n-1}), the posterior-
// weighted mixture of the per-model predictives.
double bma_step(BmaState& state, std::span<const double> log_predictives);

// log p_bma(x^n)
double bma_loglik(const BmaState& state);

std::vector<double> bma_posterior(const BmaState& state);

// Smallest bin count k with k^3 >= n (so exactly ceil(n^(1/3)), computed in
// integers because pow() misrounds perfect cubes); n = 0 yields 1.
int cuberoot_criterion(std::uint64_t n);

struct HypercompressionResult {
    double frequency;   // fraction of trials where the rival won by >= margin
    double bound;       // 2^-margin
    double stderr_;     // binomial standard error of the frequency
    bool pass;          // frequency <= bound + 3 * stderr
    std::uint64_t trials;
};

// Samples `trials` binary sequences of length n ancestrally from the BMA
// mixture over Markov strategies of the given orders, then measures how
// often the switch distribution codes a sequence at least margin_bits
// shorter than the BMA that generated it. swap_roles samples from the
// switch distribution and tests BMA instead.
HypercompressionResult no_hypercompression_check(const std::vector<int>& orders, std::uint64_t n,
                                                 std::uint64_t trials, double margin_bits,
                                                 const SwitchPriorConfig& config, CounterRng rng,
                                                 bool swap_roles = false);

} // namespace switchcast
