#pragma once

// Brute-force ground truth for tiny instances. Two independent routes to
// p_sw(x^N):
//
//   1. enumerate every path of the prior process xi_n = (S_n, M_n, K_n) and
//      sum prior(path) * likelihood(path);
//   2. enumerate switch plans ((t_1,k_1),...,(t_j,k_j)) truncated to the
//      horizon, weighting each class by its exact prior mass (the mass of
//      all full plans whose switches before N agree), with the "no further
//      switch before N" remainder supplied by the analytic pi_t tail.
//
// Both are exponential in N and exist only to certify the linear-time
// engine, so they refuse instances beyond small hard caps.

#include <cstdint>
#include <vector>

#include "switchcast/prior.hpp"

namespace switchcast {

inline constexpr int kOracleMaxLen = 8;  // longest enumerated path
inline constexpr int kOracleMaxK = 4;    // largest strategy set

struct PathStep {
    int s; // 1 iff a switch happened entering this step (S_1 = 1)
    int m; // 1 once switching is over
    int k; // active strategy, 1-based
};
using PriorPath = std::vector<PathStep>;

struct SwitchParameter {
    // (t_i, k_i): strategy k_i runs on outcomes t_i+1 .. t_{i+1}; t_1 = 0,
    // strictly increasing switch times.
    std::vector<std::pair<std::uint64_t, int>> blocks;
};

// Per-outcome log predictives: table[n-1][k-1] = log p_k(x_n | x^{n-1}).
using LossTable = std::vector<std::vector<double>>;

// All valid xi-paths of length N (N steps, transitions between them).
// Throws when N or the strategy-set size exceeds the caps.
std::vector<PriorPath> enumerate_paths(int N, const SwitchPriorConfig& config);

// log prior mass of one path: the xi_1 factor times the conditional factors.
// Invalid transitions yield the log-zero sentinel.
double path_prior_log(const PriorPath& path, const SwitchPriorConfig& config);

// log of the total prior mass of all length-N extensions of `prefix`
// (prefix itself contributes its own prior). Used to check that the
// conditional factors are exactly the one-step ratios of the path measure.
double path_extension_log_mass(const PriorPath& prefix, int N, const SwitchPriorConfig& config);

struct BruteForceResult {
    double log_marginal; // log p_sw(x^N)
    // masses over the strategy for outcome N+1, index k-1:
    std::vector<double> log_wa; // switching still possible
    std::vector<double> log_wb; // frozen
};

// Route 1: exact path sum. Handles up to kOracleMaxLen-1 outcomes.
BruteForceResult brute_force_switch(const LossTable& table, const SwitchPriorConfig& config);

// log-likelihood of the outcomes under one concrete switch plan.
double q_s_loglik(const SwitchParameter& s, const LossTable& table);

// Route 2: truncated-plan enumeration with analytic tail masses.
double splan_marginal(const LossTable& table, const SwitchPriorConfig& config);

// Log predictive table for binary data under Markov strategies of the given
// orders (alphabet size 2): glue shared by the equivalence tests.
LossTable binary_markov_loss_table(const std::vector<int>& xs, const std::vector<int>& orders);

} // namespace switchcast
