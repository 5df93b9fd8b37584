#pragma once

// Priors driving the switch process: pi_t on switch times (with an analytic
// tail so the per-step hazard pi_t(T=n | T>=n) is exact), pi_k on strategy
// indices, the geometric pi_m(m) = theta^(m-1)(1-theta) on the number of
// strategy blocks, and the schedule of active strategy sets K_n.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace switchcast {

// A prior on positive integers given by its pmf and its exact tail
// P(T >= n). The tail is supplied analytically, never summed numerically.
struct TimePrior {
    std::function<double(std::uint64_t)> mass; // pi_t(t), t >= 1
    std::function<double(std::uint64_t)> tail; // P(T >= t), t >= 1
    std::string label;

    // pi_t(t) = 1/(t(t+1)); telescoping tail P(T >= n) = 1/n.
    static TimePrior harmonic_pair();
    // pi_t(t) = (1-rho) rho^(t-1); tail rho^(n-1); hazard constant 1-rho.
    static TimePrior geometric(double rho);
};

// pi_k over strategy indices 1..k_max, proportional to a base weight and
// normalized so the prior process has total mass exactly 1.
struct ModelPrior {
    std::vector<double> w; // w[k-1] = pi_k(k), normalized over 1..k_max

    int k_max() const { return static_cast<int>(w.size()); }
    double operator()(int k) const { return w[k - 1]; }

    // base weight 1/(k(k+1)), normalized over 1..k_max
    static ModelPrior harmonic_pair(int k_max);
    static ModelPrior uniform(int k_max);
};

// Active strategy sets K_n = {1..size(n)}, nondecreasing in n.
struct KsetSchedule {
    std::function<int(std::uint64_t)> size_at; // |K_n| for outcome index n >= 1
    int k_max = 0;                             // size of the largest set

    static KsetSchedule constant(int k_max);
    // |K_n| = min(k_max, ceil(n^tau)), the growth schedule for experiments
    // whose strategy count must outpace a root of the sample size.
    static KsetSchedule power_growth(int k_max, double tau);
};

struct SwitchPriorConfig {
    double theta = 0.5; // in [0,1)
    ModelPrior model_prior;
    TimePrior switch_time_prior;
    KsetSchedule kset_schedule;

    static SwitchPriorConfig defaults(int k_max, double theta = 0.5);
};

// pi_t(T = n | T >= n), exact from mass and tail. Throws if the tail has
// been exhausted (a prior without full support was configured).
double hazard(const SwitchPriorConfig& config, std::uint64_t n);

} // namespace switchcast
