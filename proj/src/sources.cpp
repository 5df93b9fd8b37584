#include "switchcast/sources.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace switchcast {

namespace {

// 64-node Gauss-Legendre rule on [-1,1]; nodes come in +/- pairs so only the
// positive half is stored. Computed once by Newton iteration on P_64.
struct GaussLegendre64 {
    double x[32];
    double w[32];
    GaussLegendre64() {
        for (int i = 0; i < 32; ++i) {
            double guess = std::cos(M_PI * (i + 0.75) / (64 + 0.5));
            double t = guess;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= 64; ++k) {
                    double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                double dp = 64.0 * (t * p1 - p0) / (t * t - 1.0);
                double step = p1 / dp;
                t -= step;
                if (std::abs(step) < 1e-16) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= 64; ++k) {
                double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            double dp = 64.0 * (t * p1 - p0) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

const GaussLegendre64& gl64() {
    static const GaussLegendre64 table;
    return table;
}

template <typename F>
double integrate(double lo, double hi, F&& f) {
    const GaussLegendre64& g = gl64();
    double mid = 0.5 * (lo + hi);
    double half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < 32; ++i)
        acc += g.w[i] * (f(mid + half * g.x[i]) + f(mid - half * g.x[i]));
    return acc * half;
}

void require_unit(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("outcome outside [0,1]");
}

} // namespace

SourceDensity SourceDensity::uniform() { return SourceDensity(); }

SourceDensity SourceDensity::linear(double a, double b) {
    if (std::abs(a + b / 2.0 - 1.0) > 1e-12)
        throw std::invalid_argument("linear density must integrate to 1 (a + b/2 = 1)");
    if (a < 0.0 || a + b < 0.0) throw std::invalid_argument("linear density must be nonnegative");
    SourceDensity d;
    d.kind_ = Kind::linear;
    d.a_ = a;
    d.b_ = b;
    d.c0_ = std::min(a, a + b);
    d.c1_ = std::max(a, a + b);
    d.c2_ = std::abs(b);
    std::ostringstream label;
    label << "linear:" << a << "," << b;
    d.label_ = label.str();
    return d;
}

SourceDensity SourceDensity::piecewise(std::vector<double> edges, std::vector<double> values) {
    if (edges.size() < 2 || values.size() + 1 != edges.size())
        throw std::invalid_argument("piecewise density needs m+1 edges for m values");
    if (edges.front() != 0.0 || edges.back() != 1.0)
        throw std::invalid_argument("piecewise edges must span [0,1]");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1])) throw std::invalid_argument("edges must increase");
    double mass = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) throw std::invalid_argument("density values must be nonnegative");
        mass += values[i] * (edges[i + 1] - edges[i]);
    }
    if (!(mass > 0.0)) throw std::invalid_argument("density must have positive mass");
    SourceDensity d;
    d.kind_ = Kind::piecewise;
    d.edges_ = std::move(edges);
    d.vals_ = std::move(values);
    for (double& v : d.vals_) v /= mass;
    d.cum_.resize(d.edges_.size());
    d.cum_[0] = 0.0;
    for (std::size_t i = 0; i < d.vals_.size(); ++i)
        d.cum_[i + 1] = d.cum_[i] + d.vals_[i] * (d.edges_[i + 1] - d.edges_[i]);
    d.cum_.back() = 1.0;
    d.c0_ = *std::min_element(d.vals_.begin(), d.vals_.end());
    d.c1_ = *std::max_element(d.vals_.begin(), d.vals_.end());
    d.c2_ = 0.0;
    std::ostringstream label;
    label << "piecewise:" << d.vals_.size();
    d.label_ = label.str();
    return d;
}

double SourceDensity::pdf(double x) const {
    require_unit(x);
    switch (kind_) {
        case Kind::uniform: return 1.0;
        case Kind::linear: return a_ + b_ * x;
        case Kind::piecewise: {
            auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
            std::size_t i = it == edges_.begin() ? 0 : (it - edges_.begin()) - 1;
            if (i >= vals_.size()) i = vals_.size() - 1;
            return vals_[i];
        }
    }
    return 1.0;
}

double SourceDensity::cdf(double x) const {
    require_unit(x);
    switch (kind_) {
        case Kind::uniform: return x;
        case Kind::linear: return a_ * x + 0.5 * b_ * x * x;
        case Kind::piecewise: {
            auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
            std::size_t i = it == edges_.begin() ? 0 : (it - edges_.begin()) - 1;
            if (i >= vals_.size()) i = vals_.size() - 1;
            return cum_[i] + vals_[i] * (x - edges_[i]);
        }
    }
    return x;
}

double SourceDensity::inv_cdf(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile argument outside [0,1]");
    switch (kind_) {
        case Kind::uniform: return u;
        case Kind::linear: {
            if (b_ == 0.0) return u;
            // positive root of (b/2) x^2 + a x - u = 0, written to avoid
            // cancellation for small b
            double disc = std::sqrt(a_ * a_ + 2.0 * b_ * u);
            double x = 2.0 * u / (a_ + disc);
            return std::clamp(x, 0.0, 1.0);
        }
        case Kind::piecewise: {
            auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
            std::size_t i = it == cum_.begin() ? 0 : (it - cum_.begin()) - 1;
            if (i >= vals_.size()) i = vals_.size() - 1;
            if (vals_[i] <= 0.0) return edges_[i + 1];
            double x = edges_[i] + (u - cum_[i]) / vals_[i];
            return std::clamp(x, 0.0, 1.0);
        }
    }
    return u;
}

double SourceDensity::neg_entropy_bits() const {
    auto f = [&](double x) {
        double p = pdf(x);
        return p > 0.0 ? p * std::log2(p) : 0.0;
    };
    switch (kind_) {
        case Kind::uniform: return 0.0;
        case Kind::linear: return integrate(0.0, 1.0, f);
        case Kind::piecewise: {
            double acc = 0.0;
            for (std::size_t i = 0; i < vals_.size(); ++i)
                acc += integrate(edges_[i], edges_[i + 1], f);
            return acc;
        }
    }
    return 0.0;
}

double sample_source(const SourceDensity& density, CounterRng& rng) {
    return density.inv_cdf(rng.next_unit());
}

double exact_step_kl_bits(const SourceDensity& density, const PredictiveDistribution& predictive) {
    if (predictive.kind != PredictiveDistribution::Kind::histogram)
        throw std::invalid_argument("exact KL needs a histogram predictive");
    int k = predictive.bins;
    double acc = density.neg_entropy_bits();
    for (int b = 0; b < k; ++b) {
        double lo = static_cast<double>(b) / k;
        double hi = static_cast<double>(b + 1) / k;
        double mass = density.cdf(hi) - density.cdf(lo);
        double dens = predictive.densities[b];
        if (dens <= 0.0) {
            if (mass > 0.0) throw std::runtime_error("predictive assigns zero to a charged bin");
            continue;
        }
        acc -= mass * std::log2(dens);
    }
    return acc;
}

SourceDensity parse_density(const std::string& text) {
    if (text == "uniform") return SourceDensity::uniform();
    auto parse_list = [](const std::string& body) {
        std::vector<double> out;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(std::stod(item));
        return out;
    };
    if (text.rfind("linear:", 0) == 0) {
        std::vector<double> ab = parse_list(text.substr(7));
        if (ab.size() != 2) throw std::invalid_argument("linear density needs two parameters a,b");
        return SourceDensity::linear(ab[0], ab[1]);
    }
    if (text.rfind("piecewise:", 0) == 0) {
        std::string body = text.substr(10);
        std::size_t bar = body.find('|');
        if (bar == std::string::npos)
            throw std::invalid_argument("piecewise density needs edges|values");
        return SourceDensity::piecewise(parse_list(body.substr(0, bar)),
                                        parse_list(body.substr(bar + 1)));
    }
    throw std::invalid_argument("unknown density: " + text);
}

} // namespace switchcast
