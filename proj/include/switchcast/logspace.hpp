#pragma once

// Natural-log probability arithmetic. Zero probability is represented by
// -infinity, which passes through every combinator below without poisoning
// finite terms. User-facing code lengths are in bits; the conversion lives
// here so the base switch happens in exactly one place.

#include <cmath>
#include <limits>
#include <span>

namespace switchcast {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline bool is_log_zero(double lx) { return std::isinf(lx) && lx < 0; }

// log(exp(la) + exp(lb)), max-guarded.
inline double log_add(double la, double lb) {
    if (is_log_zero(la)) return lb;
    if (is_log_zero(lb)) return la;
    if (la < lb) std::swap(la, lb);
    return la + std::log1p(std::exp(lb - la));
}

double log_sum_exp(std::span<const double> lxs);

inline double nats_to_bits(double nats) { return nats / M_LN2; }
inline double bits_to_nats(double bits) { return bits * M_LN2; }

// -log2 p, the code length in bits of a log-space probability.
inline double codelen_bits(double log_p) { return -nats_to_bits(log_p); }

} // namespace switchcast
