#pragma once

// Forward computation of the switch distribution. Each active strategy k
// carries two log-space weights: wa (a later switch away from k is still
// possible) and wb (switching is over, k predicts forever). After n outcomes
//
//   exp(wa_k) = p_sw(x^n, more switches possible, next strategy = k)
//   exp(wb_k) = p_sw(x^n, frozen on k)
//
// so the marginal and the posterior on the next-step strategy fall out of
// sums. Work per outcome is linear in the number of active strategies; the
// engine never looks at outcomes, only at per-strategy log predictives, so
// any strategy family plugs in.

#include <cstdint>
#include <span>
#include <vector>

#include "switchcast/predictors.hpp"
#include "switchcast/prior.hpp"

namespace switchcast {

struct SwitchWeights {
    std::vector<double> wa; // log weights, index k-1, k in K_{n+1}
    std::vector<double> wb;
    std::uint64_t n = 0;    // outcomes consumed
    double loglik = 0.0;    // log p_sw(x^n), refreshed every step
    // log total mass right after the last loss update, before the share
    // update redistributed it; equals loglik whenever the strategy set is
    // constant and pi_k sums to 1 (the share step conserves mass).
    double post_loss_loglik = 0.0;

    int active() const { return static_cast<int>(wa.size()); }
};

// Weights over K_1 before any outcome: wa_k = pi_k(k) theta,
// wb_k = pi_k(k) (1-theta).
SwitchWeights switch_init(const SwitchPriorConfig& config);

// Consume one outcome given log predictives for every k in K_n (in index
// order). Loss update, then hazard-weighted share update; strategies
// entering in K_{n+1} receive only the pooled share terms.
void switch_step(SwitchWeights& weights, std::span<const double> log_predictives,
                 const SwitchPriorConfig& config);

// log p_sw(x^n) = log sum_k (exp(wa_k) + exp(wb_k)).
double marginal_loglik(const SwitchWeights& weights);

// Posterior on the strategy used for the next outcome,
// entry k-1 = (exp(wa_k)+exp(wb_k)) / p_sw(x^n). Throws if every weight is
// the log-zero sentinel.
std::vector<double> posterior_next(const SwitchWeights& weights);

// Argmax of the posterior; ties go to the smallest index. Returns a 1-based
// strategy index.
int select_model(std::span<const double> posterior);

// Per-step records retained by experiment drivers.
struct SwitchReport {
    std::vector<std::uint64_t> ns;
    std::vector<double> logliks;
    std::vector<std::vector<double>> posteriors;
    std::vector<int> selected;
};

// Average of the retained one-step predictive distributions of the switch
// run at prefixes x^0..x^{n-1}, evaluated at one outcome: the n-th
// prediction of the Cesaro-averaged switch strategy. All snapshots must
// share a shape (same alphabet, or same bin count).
double cesaro_predict(std::span<const PredictiveDistribution> snapshots, int symbol);
double cesaro_predict(std::span<const PredictiveDistribution> snapshots, double x);

} // namespace switchcast
