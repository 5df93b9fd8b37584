#pragma once

// Data-generating densities on [0,1] with closed-form CDF and inverse CDF,
// inverse-transform sampling, and the exact KL divergence (in bits) from a
// source to a histogram predictive. The densities are bounded away from 0
// and infinity with a bounded derivative, the class for which the histogram
// risk statements hold.

#include <string>
#include <vector>

#include "switchcast/predictors.hpp"
#include "switchcast/rng.hpp"

namespace switchcast {

class SourceDensity {
  public:
    enum class Kind { uniform, linear, piecewise };

    static SourceDensity uniform();
    // density a + b*x; requires a >= 0, a + b >= 0, a + b/2 = 1
    static SourceDensity linear(double a, double b);
    // piecewise constant on consecutive [edges[i], edges[i+1]] pieces;
    // values are renormalized to integrate to 1
    static SourceDensity piecewise(std::vector<double> edges, std::vector<double> values);

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }

    double pdf(double x) const;
    double cdf(double x) const;
    double inv_cdf(double u) const;

    double min_density() const { return c0_; }  // c0
    double max_density() const { return c1_; }  // c1
    double derivative_bound() const { return c2_; }

    // integral of pdf * log2(pdf), by 64-node Gauss-Legendre quadrature per
    // smooth piece
    double neg_entropy_bits() const;

  private:
    SourceDensity() = default;

    Kind kind_ = Kind::uniform;
    std::string label_ = "uniform";
    double a_ = 1.0, b_ = 0.0;          // linear
    std::vector<double> edges_, vals_;  // piecewise
    std::vector<double> cum_;           // piecewise CDF at edges
    double c0_ = 1.0, c1_ = 1.0, c2_ = 0.0;
};

double sample_source(const SourceDensity& density, CounterRng& rng);

// D(p* || phat) in bits for a k-bin histogram predictive: the negative
// entropy term minus sum over bins of P*(bin) * log2(density of the bin).
double exact_step_kl_bits(const SourceDensity& density, const PredictiveDistribution& predictive);

// "uniform" | "linear:a,b" | "piecewise:e0,e1,..,em|v1,..,vm"
SourceDensity parse_density(const std::string& text);

} // namespace switchcast
