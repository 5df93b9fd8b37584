#include "switchcast/switch_engine.hpp"

#include <cmath>
#include <stdexcept>

#include "switchcast/logspace.hpp"

namespace switchcast {

SwitchWeights switch_init(const SwitchPriorConfig& config) {
    if (!(config.theta >= 0.0 && config.theta < 1.0))
        throw std::invalid_argument("theta must be in [0,1)");
    int k1 = config.kset_schedule.size_at(1);
    if (k1 < 1) throw std::invalid_argument("K_1 must be nonempty");
    SwitchWeights w;
    w.wa.resize(k1);
    w.wb.resize(k1);
    double ltheta = config.theta > 0.0 ? std::log(config.theta) : kLogZero;
    double lfrozen = std::log1p(-config.theta);
    for (int k = 1; k <= k1; ++k) {
        double lpk = std::log(config.model_prior(k));
        w.wa[k - 1] = lpk + ltheta;
        w.wb[k - 1] = lpk + lfrozen;
    }
    w.loglik = marginal_loglik(w);
    w.post_loss_loglik = w.loglik;
    return w;
}

void switch_step(SwitchWeights& weights, std::span<const double> log_predictives,
                 const SwitchPriorConfig& config) {
    std::uint64_t n = weights.n + 1;
    int kn = weights.active();
    if (static_cast<int>(log_predictives.size()) != kn)
        throw std::invalid_argument("log predictive count does not match |K_n|");

    // loss update
    for (int i = 0; i < kn; ++i) {
        weights.wa[i] += log_predictives[i];
        weights.wb[i] += log_predictives[i];
    }

    double lse_wa = log_sum_exp(weights.wa);
    weights.post_loss_loglik = log_add(lse_wa, log_sum_exp(weights.wb));

    // share update
    double hz = hazard(config, n);
    double lstay = std::log1p(-hz);
    double lpool = std::log(hz) + lse_wa;
    double ltheta = config.theta > 0.0 ? std::log(config.theta) : kLogZero;
    double lfrozen = std::log1p(-config.theta);

    int knext = config.kset_schedule.size_at(n + 1);
    if (knext < kn) throw std::logic_error("strategy sets must be nondecreasing");
    weights.wa.resize(knext, kLogZero);
    weights.wb.resize(knext, kLogZero);
    for (int k = 1; k <= knext; ++k) {
        double lshare = lpool + std::log(config.model_prior(k));
        int i = k - 1;
        if (k <= kn) {
            weights.wa[i] = log_add(weights.wa[i] + lstay, lshare + ltheta);
            weights.wb[i] = log_add(weights.wb[i], lshare + lfrozen);
        } else {
            weights.wa[i] = lshare + ltheta;
            weights.wb[i] = lshare + lfrozen;
        }
    }
    weights.n = n;
    weights.loglik = marginal_loglik(weights);
}

double marginal_loglik(const SwitchWeights& weights) {
    double acc = kLogZero;
    for (int i = 0; i < weights.active(); ++i)
        acc = log_add(acc, log_add(weights.wa[i], weights.wb[i]));
    return acc;
}

std::vector<double> posterior_next(const SwitchWeights& weights) {
    double total = marginal_loglik(weights);
    if (is_log_zero(total)) throw std::runtime_error("posterior undefined: all weights are zero");
    std::vector<double> post(weights.active());
    for (int i = 0; i < weights.active(); ++i)
        post[i] = std::exp(log_add(weights.wa[i], weights.wb[i]) - total);
    return post;
}

int select_model(std::span<const double> posterior) {
    if (posterior.empty()) throw std::invalid_argument("empty posterior");
    int best = 0;
    for (int i = 1; i < static_cast<int>(posterior.size()); ++i)
        if (posterior[i] > posterior[best]) best = i;
    return best + 1;
}

namespace {

template <typename Eval>
double cesaro_average(std::span<const PredictiveDistribution> snapshots, Eval&& eval) {
    if (snapshots.empty()) throw std::invalid_argument("no predictive snapshots");
    double acc = 0.0;
    for (const PredictiveDistribution& d : snapshots) acc += eval(d);
    return acc / static_cast<double>(snapshots.size());
}

} // namespace

double cesaro_predict(std::span<const PredictiveDistribution> snapshots, int symbol) {
    return cesaro_average(snapshots, [&](const PredictiveDistribution& d) {
        if (d.kind != PredictiveDistribution::Kind::finite ||
            symbol >= static_cast<int>(d.probs.size()))
            throw std::invalid_argument("incompatible predictive snapshot");
        return d.probs[symbol];
    });
}

double cesaro_predict(std::span<const PredictiveDistribution> snapshots, double x) {
    int bins = snapshots.empty() ? 0 : snapshots.front().bins;
    return cesaro_average(snapshots, [&](const PredictiveDistribution& d) {
        if (d.kind != PredictiveDistribution::Kind::histogram || d.bins != bins)
            throw std::invalid_argument("incompatible predictive snapshot");
        return d.densities[HistogramState::bin_index(x, d.bins)];
    });
}

} // namespace switchcast
