#pragma once

// Experiment drivers: the catch-up curve on text, the histogram
// cumulative-risk comparison, the model-selection consistency run, and the
// two-estimator redundancy cross-check. All randomness flows from one seed
// through per-replicate counter streams, so results are independent of
// worker scheduling; every driver checks the mixture-bound and posterior
// invariants on the rows it emits.

#include <cstdint>
#include <string>
#include <vector>

#include "switchcast/prior.hpp"
#include "switchcast/rng.hpp"
#include "switchcast/sources.hpp"

namespace switchcast {

// n = ceil(1.2^j), deduplicated, plus n_max itself.
std::vector<std::uint64_t> geometric_grid(std::uint64_t n_max, double ratio = 1.2);
std::vector<std::uint64_t> stride_grid(std::uint64_t n_max, std::uint64_t stride);

// Worst margins seen while emitting rows; all margins must be >= 0 (up to
// rounding slack) for a run to be declared clean.
struct RunInvariants {
    // min over rows of (best strategy bits + bound) - switch bits, where
    // bound = -log2 pi_m(1) - log2 pi_k(k*)
    double hedge_vs_best_margin_bits = 1e300;
    // min over rows and k of (pi-weighted strategy bits) - switch bits
    double hedge_vs_all_margin_bits = 1e300;
    // min over rows of (bma bits + -log2 pi_m(1)) - switch bits
    double hedge_vs_bma_margin_bits = 1e300;
    // min over rows of both ends of the BMA dominance band
    double bma_band_margin_bits = 1e300;
    double max_posterior_sum_err = 0.0;
    double max_conservation_rel_err = 0.0;

    bool clean(double tol_bits = 1e-6) const;
    void merge(const RunInvariants& other);
};

// ---------------------------------------------------------------------------
// catch-up on a byte sequence

struct CatchupConfig {
    double theta = 0.5;
    std::uint64_t stride = 0; // 0: geometric grid
    bool track_conservation = false;
};

struct CatchupRow {
    std::uint64_t n;
    std::vector<double> codelen_bits; // one per order, order list order
    double bma_bits;
    double sw_bits;
    std::vector<double> posterior; // on next-step strategy, per order
    int selected_order;
};

struct CatchupResult {
    std::vector<int> orders;
    std::vector<CatchupRow> rows;
    RunInvariants invariants;
};

CatchupResult run_catchup(const std::vector<std::uint8_t>& bytes, const std::vector<int>& orders,
                          const CatchupConfig& config);

// ---------------------------------------------------------------------------
// histogram risk curves

enum class Estimator { sw, bma, cuberoot, fixed_k };

std::string estimator_label(Estimator e, int fixed_k);

struct HistsimConfig {
    double theta = 0.5;
    int k_max = 0;      // 0: ceil(sqrt(n_max))
    double tau = 0.0;   // 0: constant strategy set, else |K_n| = ceil(n^tau)
    int fixed_k = 4;
    std::vector<Estimator> estimators = {Estimator::sw, Estimator::bma, Estimator::cuberoot};
    int workers = 1;
};

struct RiskCurve {
    std::string estimator;
    std::vector<std::uint64_t> grid;
    std::vector<double> mean_bits; // mean cumulative redundancy across replicates
    std::vector<double> se_bits;
    int replicates;
};

struct HistsimResult {
    std::vector<std::uint64_t> grid;
    std::vector<RiskCurve> curves;
    // switch posterior mass on the 1-bin strategy, [replicate][grid index]
    std::vector<std::vector<double>> post_k1;
    RunInvariants invariants;
};

HistsimResult run_histsim(const SourceDensity& density, std::uint64_t n_max,
                          std::uint64_t replicates, const HistsimConfig& config,
                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// consistency of posterior model selection

struct BinarySourceSpec {
    // iid Bernoulli(p1) by default; with order1 set, a two-state chain with
    // P(1 | prev=0) = p1_given0 and P(1 | prev=1) = p1_given1 (first symbol
    // from Bernoulli(p1)).
    double p1 = 0.5;
    bool order1 = false;
    double p1_given0 = 0.5;
    double p1_given1 = 0.5;

    static BinarySourceSpec bernoulli(double p1);
    static BinarySourceSpec markov1(double p1_given0, double p1_given1, double first_p1 = 0.5);
};

struct ConsistencyConfig {
    double theta = 0.5;
    std::vector<int> orders = {0, 1};
    std::uint64_t report_tail = 100; // every step this close to n is emitted
    int workers = 1;
};

struct ConsistencyRow {
    std::uint64_t seed_index; // RNG stream index under the root seed
    std::uint64_t n;
    std::vector<double> posterior; // per order
    int selected_order;
};

struct ConsistencyResult {
    std::vector<int> orders;
    std::vector<ConsistencyRow> rows;
    RunInvariants invariants;
};

ConsistencyResult run_consistency(const BinarySourceSpec& source, std::uint64_t n,
                                  std::uint64_t n_seeds, const ConsistencyConfig& config,
                                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// redundancy measured two ways

struct CrossCheckResult {
    double mean_realized_bits; // mean over replicates of log2 p*(x^n)/phat(x^n)
    double se_realized_bits;
    double mean_kl_bits;       // mean of summed per-step exact KL along the path
    double se_kl_bits;
    double pooled_se_bits;     // sqrt(se_r^2 + se_kl^2)
    bool agree;                // |difference| <= 3 * pooled SE
};

CrossCheckResult cross_check_redundancy(const SourceDensity& density, int fixed_k, std::uint64_t n,
                                        std::uint64_t replicates, std::uint64_t seed);

} // namespace switchcast
