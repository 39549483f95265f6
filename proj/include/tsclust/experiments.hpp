#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsclust/core.hpp"

namespace tsclust {

/// Regime-switching synthetic panel: per step one standard normal common
/// factor per cluster plus independent per-series noise, with the planted
/// partition redrawn uniformly at regime changes.
struct SynthConfig {
    int n = 3;
    int steps = 5000;
    double noise_sd = 0.1;
    double regime_change_prob = 0.002;
    std::uint64_t seed = 1;
    void validate() const;
};

struct SynthResult {
    SeriesPanel panel;
    ClusterTimeline truth;
};

SynthResult gen_synthetic(const SynthConfig& cfg);

/// Pair-counting Rand index in [0,1]; 1 for n < 2.
double rand_index(const Partition& a, const Partition& b);

/// Adjusted Rand index (expected-index correction); 1 when the correction
/// denominator vanishes (both partitions trivial and equal).
double adjusted_rand(const Partition& a, const Partition& b);

struct EvalRow {
    int k = 0;
    bool exact = false;
    double ri = 0.0;
    double ari = 0.0;
    std::string pred;
    std::string truth;
};

struct EvalReport {
    double per_step_exact_match = 0.0;
    double rand = 0.0;
    double adjusted = 0.0;
    double stability = 0.0;  // fraction of consecutive prediction steps unchanged
    std::vector<EvalRow> rows;
};

/// Per-step metrics over the time intersection of the two timelines;
/// stability is computed on the prediction's full step range alone.
EvalReport evaluate_timeline(const ClusterTimeline& pred, const ClusterTimeline& truth);

/// Exact-match rate excluding the `horizon` steps starting at each truth
/// regime change (the change step itself plus horizon-1 following).
double exact_match_excluding_post_change(const ClusterTimeline& pred,
                                         const ClusterTimeline& truth, int horizon);

/// Inverse-volatility weights over trailing-window composite assets: block
/// composite = equal-weighted member mean, block weight proportional to
/// 1/stdev of the composite over the trailing w steps, split equally within
/// the block. Weights sum to 1.
std::vector<double> inverse_vol_weights(const SeriesPanel& panel, const Partition& p, int window);

} // namespace tsclust
