#include "switchcast/prior.hpp"

#include <cmath>

namespace switchcast {

TimePrior TimePrior::harmonic_pair() {
    TimePrior p;
    p.mass = [](std::uint64_t t) {
        double td = static_cast<double>(t);
        return 1.0 / (td * (td + 1.0));
    };
    p.tail = [](std::uint64_t t) { return 1.0 / static_cast<double>(t); };
    p.label = "harmonic";
    return p;
}

TimePrior TimePrior::geometric(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("geometric rho must be in (0,1)");
    TimePrior p;
    p.mass = [rho](std::uint64_t t) { return (1.0 - rho) * std::pow(rho, static_cast<double>(t - 1)); };
    p.tail = [rho](std::uint64_t t) { return std::pow(rho, static_cast<double>(t - 1)); };
    p.label = "geometric";
    return p;
}

ModelPrior ModelPrior::harmonic_pair(int k_max) {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    ModelPrior p;
    p.w.resize(k_max);
    double total = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        p.w[k - 1] = 1.0 / (static_cast<double>(k) * (k + 1.0));
        total += p.w[k - 1];
    }
    for (double& v : p.w) v /= total;
    return p;
}

ModelPrior ModelPrior::uniform(int k_max) {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    ModelPrior p;
    p.w.assign(k_max, 1.0 / k_max);
    return p;
}

KsetSchedule KsetSchedule::constant(int k_max) {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    KsetSchedule s;
    s.size_at = [k_max](std::uint64_t) { return k_max; };
    s.k_max = k_max;
    return s;
}

KsetSchedule KsetSchedule::power_growth(int k_max, double tau) {
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
    KsetSchedule s;
    s.size_at = [k_max, tau](std::uint64_t n) {
        // pow can land a hair above an exact integer (pow(8, 1./3) ==
        // 2.0000000000000004); the slack keeps ceil from overshooting there.
        double want = std::ceil(std::pow(static_cast<double>(n), tau) - 1e-9);
        if (want < 1.0) want = 1.0;
        if (want > static_cast<double>(k_max)) return k_max;
        return static_cast<int>(want);
    };
    s.k_max = k_max;
    return s;
}

SwitchPriorConfig SwitchPriorConfig::defaults(int k_max, double theta) {
    if (!(theta >= 0.0 && theta < 1.0)) throw std::invalid_argument("theta must be in [0,1)");
    SwitchPriorConfig c;
    c.theta = theta;
    c.model_prior = ModelPrior::harmonic_pair(k_max);
    c.switch_time_prior = TimePrior::harmonic_pair();
    c.kset_schedule = KsetSchedule::constant(k_max);
    return c;
}

double hazard(const SwitchPriorConfig& config, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("hazard index must be >= 1");
    double tail = config.switch_time_prior.tail(n);
    if (!(tail > 0.0)) throw std::runtime_error("switch-time prior tail exhausted at n");
    return config.switch_time_prior.mass(n) / tail;
}

} // namespace switchcast
