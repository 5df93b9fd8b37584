#pragma once

// Sequential prediction strategies with add-one (Dirichlet(1,...,1)) smoothing:
// Bernoulli-Laplace, finite-alphabet Markov chains of a fixed order, and
// equal-width histogram density estimators on [0,1]. States are values that
// hold sufficient statistics only; every predict operation is pure.

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace switchcast {

struct Alphabet {
    enum class Kind { finite, unit_interval };
    Kind kind = Kind::finite;
    int size = 2; // finite only; symbols are 0..size-1

    static Alphabet finite(int size);
    static Alphabet unit_interval();
};

// One-step predictive: a pmf over a finite alphabet, or a k-bin piecewise
// constant density on [0,1] (bin width 1/k, so (1/k)*sum(densities) = 1).
struct PredictiveDistribution {
    enum class Kind { finite, histogram };
    Kind kind = Kind::finite;
    std::vector<double> probs;     // finite
    std::vector<double> densities; // histogram, one entry per bin
    int bins = 0;                  // histogram

    double total_mass() const;
};

// ---------------------------------------------------------------------------

struct BernoulliState {
    std::uint64_t n0 = 0;
    std::uint64_t n1 = 0;

    void observe(int symbol);
    std::uint64_t total() const { return n0 + n1; }
};

double bernoulli_laplace_p1(const BernoulliState& s);
PredictiveDistribution bernoulli_laplace_predict(const BernoulliState& s);

// log( n1! n0! / (n0+n1+1)! ), the Beta(1,1) marginal of a binary string with
// the given counts, via lgamma. Independent closed form used to certify the
// sequential chain-rule marginal.
double bernoulli_exact_marginal(std::uint64_t n0, std::uint64_t n1);

// ---------------------------------------------------------------------------

// Markov chain of order r over alphabet size A, one add-one cell per
// (context, symbol). The first r symbols of a sequence are predicted
// uniformly (1/A each); contexts never span that warm-up boundary choice,
// they simply begin once r symbols are available.
class MarkovState {
  public:
    MarkovState(int order, int alphabet_size);

    int order() const { return order_; }
    int alphabet_size() const { return alphabet_; }
    std::uint64_t observed() const { return seen_; }

    // P(symbol | current context); uniform during warm-up.
    double predict_symbol(int symbol) const;
    PredictiveDistribution predict() const;

    void observe(int symbol);

  private:
    struct ContextCounts {
        std::vector<std::uint32_t> c;
        std::uint64_t total = 0;
    };

    const ContextCounts* find_context() const;

    int order_;
    int alphabet_;
    std::uint64_t seen_ = 0;
    std::uint64_t context_key_ = 0; // last `order_` symbols, base-A packed
    std::uint64_t key_mod_ = 1;     // A^order
    std::unordered_map<std::uint64_t, ContextCounts> counts_;
};

PredictiveDistribution markov_dirichlet_predict(const MarkovState& s);

// ---------------------------------------------------------------------------

// k equal-width bins on [0,1]: [0,1/k], then left-open right-closed.
// Predictive density of x is ((n_bin(x)+1)/(n+k)) * k.
class HistogramState {
  public:
    explicit HistogramState(int bins);

    int bins() const { return static_cast<int>(counts_.size()); }
    std::uint64_t observed() const { return n_; }
    std::uint64_t bin_count(int b) const { return counts_[b]; }

    double predict_density(double x) const;
    PredictiveDistribution predict() const;

    void observe(double x);

    static int bin_index(double x, int k);

  private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t n_ = 0;
};

PredictiveDistribution histogram_predict(const HistogramState& s);

// ---------------------------------------------------------------------------

// Accumulated log p(x_i | x^{i-1}) over a whole sequence (natural log).
// For these families the sequential product equals the Bayes marginal.
double strategy_log_marginal(const BernoulliState& fresh, const std::vector<int>& xs);
double strategy_log_marginal(const MarkovState& fresh, const std::vector<int>& xs);
double strategy_log_marginal(const HistogramState& fresh, const std::vector<double>& xs);

// Closed-form histogram marginal for cross-checking: the Dirichlet(1,...,1)
// multinomial marginal over bin identities plus n*log(k) for the in-bin
// uniform density factor.
double histogram_exact_marginal(const std::vector<std::uint64_t>& bin_counts);

} // namespace switchcast
