#include "switchcast/predictors.hpp"

#include <cmath>

namespace switchcast {

Alphabet Alphabet::finite(int size) {
    if (size < 1) throw std::invalid_argument("alphabet size must be >= 1");
    return Alphabet{Kind::finite, size};
}

Alphabet Alphabet::unit_interval() { return Alphabet{Kind::unit_interval, 0}; }

double PredictiveDistribution::total_mass() const {
    double acc = 0.0;
    if (kind == Kind::finite) {
        for (double p : probs) acc += p;
    } else {
        for (double d : densities) acc += d / bins;
    }
    return acc;
}

// ---------------------------------------------------------------------------

void BernoulliState::observe(int symbol) {
    if (symbol == 0)
        ++n0;
    else if (symbol == 1)
        ++n1;
    else
        throw std::invalid_argument("Bernoulli outcome must be 0 or 1");
}

double bernoulli_laplace_p1(const BernoulliState& s) {
    return (static_cast<double>(s.n1) + 1.0) / (static_cast<double>(s.total()) + 2.0);
}

PredictiveDistribution bernoulli_laplace_predict(const BernoulliState& s) {
    PredictiveDistribution d;
    double p1 = bernoulli_laplace_p1(s);
    d.probs = {1.0 - p1, p1};
    return d;
}

double bernoulli_exact_marginal(std::uint64_t n0, std::uint64_t n1) {
    return std::lgamma(static_cast<double>(n1) + 1.0) + std::lgamma(static_cast<double>(n0) + 1.0) -
           std::lgamma(static_cast<double>(n0 + n1) + 2.0);
}

// ---------------------------------------------------------------------------

MarkovState::MarkovState(int order, int alphabet_size) : order_(order), alphabet_(alphabet_size) {
    if (order < 0) throw std::invalid_argument("Markov order must be >= 0");
    if (alphabet_size < 1) throw std::invalid_argument("alphabet size must be >= 1");
    for (int i = 0; i < order_; ++i) {
        if (key_mod_ > (~0ull) / static_cast<std::uint64_t>(alphabet_))
            throw std::invalid_argument("context key does not fit in 64 bits");
        key_mod_ *= static_cast<std::uint64_t>(alphabet_);
    }
}

const MarkovState::ContextCounts* MarkovState::find_context() const {
    auto it = counts_.find(context_key_);
    return it == counts_.end() ? nullptr : &it->second;
}

double MarkovState::predict_symbol(int symbol) const {
    if (symbol < 0 || symbol >= alphabet_) throw std::invalid_argument("symbol out of range");
    double a = static_cast<double>(alphabet_);
    if (seen_ < static_cast<std::uint64_t>(order_)) return 1.0 / a;
    const ContextCounts* ctx = find_context();
    if (ctx == nullptr) return 1.0 / a;
    return (static_cast<double>(ctx->c[symbol]) + 1.0) / (static_cast<double>(ctx->total) + a);
}

PredictiveDistribution MarkovState::predict() const {
    PredictiveDistribution d;
    d.probs.resize(alphabet_);
    double a = static_cast<double>(alphabet_);
    const ContextCounts* ctx =
        seen_ < static_cast<std::uint64_t>(order_) ? nullptr : find_context();
    if (ctx == nullptr) {
        for (int s = 0; s < alphabet_; ++s) d.probs[s] = 1.0 / a;
    } else {
        double denom = static_cast<double>(ctx->total) + a;
        for (int s = 0; s < alphabet_; ++s)
            d.probs[s] = (static_cast<double>(ctx->c[s]) + 1.0) / denom;
    }
    return d;
}

void MarkovState::observe(int symbol) {
    if (symbol < 0 || symbol >= alphabet_) throw std::invalid_argument("symbol out of range");
    if (seen_ >= static_cast<std::uint64_t>(order_)) {
        ContextCounts& ctx = counts_[context_key_];
        if (ctx.c.empty()) ctx.c.assign(alphabet_, 0);
        ++ctx.c[symbol];
        ++ctx.total;
    }
    ++seen_;
    if (order_ > 0)
        context_key_ =
            (context_key_ * static_cast<std::uint64_t>(alphabet_) + static_cast<std::uint64_t>(symbol)) %
            key_mod_;
}

PredictiveDistribution markov_dirichlet_predict(const MarkovState& s) { return s.predict(); }

// ---------------------------------------------------------------------------

HistogramState::HistogramState(int bins) {
    if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
    counts_.assign(bins, 0);
}

int HistogramState::bin_index(double x, int k) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("histogram outcome outside [0,1]");
    if (x <= 0.0) return 0;
    int idx = static_cast<int>(std::ceil(x * k)) - 1;
    if (idx < 0) idx = 0;
    if (idx >= k) idx = k - 1;
    return idx;
}

double HistogramState::predict_density(double x) const {
    int k = bins();
    int b = bin_index(x, k);
    return (static_cast<double>(counts_[b]) + 1.0) / (static_cast<double>(n_) + k) * k;
}

PredictiveDistribution HistogramState::predict() const {
    PredictiveDistribution d;
    d.kind = PredictiveDistribution::Kind::histogram;
    int k = bins();
    d.bins = k;
    d.densities.resize(k);
    double denom = static_cast<double>(n_) + k;
    for (int b = 0; b < k; ++b)
        d.densities[b] = (static_cast<double>(counts_[b]) + 1.0) / denom * k;
    return d;
}

void HistogramState::observe(double x) {
    ++counts_[bin_index(x, bins())];
    ++n_;
}

PredictiveDistribution histogram_predict(const HistogramState& s) { return s.predict(); }

// ---------------------------------------------------------------------------

double strategy_log_marginal(const BernoulliState& fresh, const std::vector<int>& xs) {
    BernoulliState s = fresh;
    double acc = 0.0;
    for (int x : xs) {
        double p1 = bernoulli_laplace_p1(s);
        acc += std::log(x == 1 ? p1 : 1.0 - p1);
        s.observe(x);
    }
    return acc;
}

double strategy_log_marginal(const MarkovState& fresh, const std::vector<int>& xs) {
    MarkovState s = fresh;
    double acc = 0.0;
    for (int x : xs) {
        acc += std::log(s.predict_symbol(x));
        s.observe(x);
    }
    return acc;
}

double strategy_log_marginal(const HistogramState& fresh, const std::vector<double>& xs) {
    HistogramState s = fresh;
    double acc = 0.0;
    for (double x : xs) {
        acc += std::log(s.predict_density(x));
        s.observe(x);
    }
    return acc;
}

double histogram_exact_marginal(const std::vector<std::uint64_t>& bin_counts) {
    auto k = static_cast<double>(bin_counts.size());
    double n = 0.0;
    double acc = 0.0;
    for (std::uint64_t c : bin_counts) {
        acc += std::lgamma(static_cast<double>(c) + 1.0);
        n += static_cast<double>(c);
    }
    acc += std::lgamma(k) - std::lgamma(n + k);
    return acc + n * std::log(k);
}

} // namespace switchcast
