#include "switchcast/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "switchcast/logspace.hpp"
#include "switchcast/predictors.hpp"

namespace switchcast {

namespace {

void check_caps(int len, const SwitchPriorConfig& config) {
    if (len > kOracleMaxLen) throw std::invalid_argument("oracle cap exceeded: path length > 8");
    if (config.kset_schedule.k_max > kOracleMaxK)
        throw std::invalid_argument("oracle cap exceeded: more than 4 strategies");
}

// Conditional prior factor for xi_n -> xi_{n+1}; n is the 1-based index of
// the step being left. Returns 0 for invalid transitions.
double transition_factor(const PathStep& from, const PathStep& to, std::uint64_t n,
                         const SwitchPriorConfig& config) {
    if (from.m == 1) { // frozen: forced self-transition
        if (to.s == 0 && to.m == 1 && to.k == from.k) return 1.0;
        return 0.0;
    }
    double hz = hazard(config, n);
    if (to.s == 0) { // no switch: stay unfrozen on the same strategy
        if (to.m == 0 && to.k == from.k) return 1.0 - hz;
        return 0.0;
    }
    // switch at time n; the new strategy freezes with probability 1-theta
    double base = hz * config.model_prior(to.k);
    return to.m == 0 ? base * config.theta : base * (1.0 - config.theta);
}

double first_step_mass(const PathStep& step, const SwitchPriorConfig& config) {
    if (step.s != 1) return 0.0;
    double base = config.model_prior(step.k);
    return step.m == 0 ? base * config.theta : base * (1.0 - config.theta);
}

} // namespace

std::vector<PriorPath> enumerate_paths(int N, const SwitchPriorConfig& config) {
    if (N < 1) throw std::invalid_argument("path length must be >= 1");
    check_caps(N, config);
    std::vector<PriorPath> out;
    PriorPath cur;
    auto rec = [&](auto&& self, int n) -> void {
        if (n > N) {
            out.push_back(cur);
            return;
        }
        int kn = config.kset_schedule.size_at(n);
        if (n == 1) {
            for (int m = 0; m <= 1; ++m)
                for (int k = 1; k <= kn; ++k) {
                    cur.push_back({1, m, k});
                    self(self, n + 1);
                    cur.pop_back();
                }
            return;
        }
        const PathStep& prev = cur.back();
        if (prev.m == 1) {
            cur.push_back({0, 1, prev.k});
            self(self, n + 1);
            cur.pop_back();
            return;
        }
        cur.push_back({0, 0, prev.k});
        self(self, n + 1);
        cur.pop_back();
        for (int m = 0; m <= 1; ++m)
            for (int k = 1; k <= kn; ++k) {
                cur.push_back({1, m, k});
                self(self, n + 1);
                cur.pop_back();
            }
    };
    rec(rec, 1);
    return out;
}

double path_prior_log(const PriorPath& path, const SwitchPriorConfig& config) {
    if (path.empty()) throw std::invalid_argument("empty path");
    check_caps(static_cast<int>(path.size()), config);
    double mass = first_step_mass(path.front(), config);
    for (std::size_t i = 1; i < path.size(); ++i)
        mass *= transition_factor(path[i - 1], path[i], i, config);
    return mass > 0.0 ? std::log(mass) : kLogZero;
}

double path_extension_log_mass(const PriorPath& prefix, int N, const SwitchPriorConfig& config) {
    if (prefix.empty() || static_cast<int>(prefix.size()) > N)
        throw std::invalid_argument("prefix must be nonempty and no longer than N");
    check_caps(N, config);
    double own = std::exp(path_prior_log(prefix, config));
    double total = 0.0;
    auto rec = [&](auto&& self, const PathStep& last, int n, double mass) -> void {
        if (n == N) {
            total += mass;
            return;
        }
        int knext = config.kset_schedule.size_at(n + 1);
        PathStep stay{0, last.m, last.k};
        double f = transition_factor(last, stay, n, config);
        if (f > 0.0) self(self, stay, n + 1, mass * f);
        if (last.m == 0)
            for (int m = 0; m <= 1; ++m)
                for (int k = 1; k <= knext; ++k) {
                    PathStep sw{1, m, k};
                    self(self, sw, n + 1, mass * transition_factor(last, sw, n, config));
                }
    };
    rec(rec, prefix.back(), static_cast<int>(prefix.size()), own);
    return total > 0.0 ? std::log(total) : kLogZero;
}

BruteForceResult brute_force_switch(const LossTable& table, const SwitchPriorConfig& config) {
    int N = static_cast<int>(table.size());
    check_caps(N + 1, config);
    int k_end = config.kset_schedule.size_at(N + 1);
    std::vector<double> wa(k_end, 0.0), wb(k_end, 0.0);

    // DFS over xi_1..xi_{N+1}; mass carries prior factors and the predictive
    // factors of all outcomes already emitted.
    auto rec = [&](auto&& self, PathStep at, int n, double mass) -> void {
        if (n == N + 1) {
            (at.m == 0 ? wa : wb)[at.k - 1] += mass;
            return;
        }
        mass *= std::exp(table[n - 1][at.k - 1]); // outcome n under strategy K_n
        int knext = config.kset_schedule.size_at(n + 1);
        PathStep stay{0, at.m, at.k};
        double f = transition_factor(at, stay, n, config);
        if (f > 0.0) self(self, stay, n + 1, mass * f);
        if (at.m == 0)
            for (int m = 0; m <= 1; ++m)
                for (int k = 1; k <= knext; ++k) {
                    PathStep sw{1, m, k};
                    self(self, sw, n + 1, mass * transition_factor(at, sw, n, config));
                }
    };
    int k1 = config.kset_schedule.size_at(1);
    for (int m = 0; m <= 1; ++m)
        for (int k = 1; k <= k1; ++k) {
            PathStep start{1, m, k};
            rec(rec, start, 1, first_step_mass(start, config));
        }

    BruteForceResult res;
    res.log_wa.resize(k_end);
    res.log_wb.resize(k_end);
    double total = 0.0;
    for (int i = 0; i < k_end; ++i) {
        res.log_wa[i] = wa[i] > 0.0 ? std::log(wa[i]) : kLogZero;
        res.log_wb[i] = wb[i] > 0.0 ? std::log(wb[i]) : kLogZero;
        total += wa[i] + wb[i];
    }
    res.log_marginal = total > 0.0 ? std::log(total) : kLogZero;
    return res;
}

double q_s_loglik(const SwitchParameter& s, const LossTable& table) {
    if (s.blocks.empty() || s.blocks.front().first != 0)
        throw std::invalid_argument("switch plan must start with t_1 = 0");
    std::uint64_t N = table.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < s.blocks.size(); ++i) {
        if (i + 1 < s.blocks.size() && s.blocks[i + 1].first <= s.blocks[i].first)
            throw std::invalid_argument("switch times must be strictly increasing");
        std::uint64_t lo = s.blocks[i].first + 1;
        std::uint64_t hi = i + 1 < s.blocks.size() ? s.blocks[i + 1].first : N;
        int k = s.blocks[i].second;
        for (std::uint64_t n = lo; n <= hi && n <= N; ++n) acc += table[n - 1][k - 1];
    }
    return acc;
}

double splan_marginal(const LossTable& table, const SwitchPriorConfig& config) {
    int N = static_cast<int>(table.size());
    check_caps(N + 1, config);
    if (N == 0) return 0.0;
    const TimePrior& pt = config.switch_time_prior;
    double theta = config.theta;
    double total = 0.0;

    // plan: switches so far; mass: pi_k and conditional pi_t factors of the
    // prefix; the theta bookkeeping and the no-more-switches-before-N tail
    // are appended when the plan is scored.
    SwitchParameter plan;
    auto score = [&](double prefix_mass) {
        std::size_t j = plan.blocks.size();
        std::uint64_t tj = plan.blocks.back().first;
        double tail_ratio = pt.tail(static_cast<std::uint64_t>(N)) / pt.tail(tj + 1);
        double cls = prefix_mass * std::pow(theta, static_cast<double>(j - 1)) *
                     ((1.0 - theta) + theta * tail_ratio);
        total += cls * std::exp(q_s_loglik(plan, table));
    };
    auto rec = [&](auto&& self, double mass) -> void {
        score(mass);
        std::uint64_t tj = plan.blocks.back().first;
        for (std::uint64_t t = tj + 1; t < static_cast<std::uint64_t>(N); ++t)
            for (int k = 1; k <= config.kset_schedule.size_at(t + 1); ++k) {
                plan.blocks.emplace_back(t, k);
                self(self, mass * (pt.mass(t) / pt.tail(tj + 1)) * config.model_prior(k));
                plan.blocks.pop_back();
            }
    };
    for (int k = 1; k <= config.kset_schedule.size_at(1); ++k) {
        plan.blocks.emplace_back(0, k);
        rec(rec, config.model_prior(k));
        plan.blocks.pop_back();
    }
    return total > 0.0 ? std::log(total) : kLogZero;
}

LossTable binary_markov_loss_table(const std::vector<int>& xs, const std::vector<int>& orders) {
    std::vector<MarkovState> bank;
    bank.reserve(orders.size());
    for (int r : orders) bank.emplace_back(r, 2);
    LossTable table(xs.size(), std::vector<double>(orders.size()));
    for (std::size_t n = 0; n < xs.size(); ++n)
        for (std::size_t i = 0; i < bank.size(); ++i) {
            table[n][i] = std::log(bank[i].predict_symbol(xs[n]));
            bank[i].observe(xs[n]);
        }
    return table;
}

} // namespace switchcast
