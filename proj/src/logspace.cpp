#include "switchcast/logspace.hpp"

#include <algorithm>

namespace switchcast {

double log_sum_exp(std::span<const double> lxs) {
    double m = kLogZero;
    for (double lx : lxs) m = std::max(m, lx);
    if (is_log_zero(m)) return kLogZero;
    double acc = 0.0;
    for (double lx : lxs)
        if (!is_log_zero(lx)) acc += std::exp(lx - m);
    return m + std::log(acc);
}

} // namespace switchcast
