#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tsclust/core.hpp"
#include "tsclust/exp_model.hpp"

namespace tsclust {

/// Three-variable factor over a triangle's edge indicators: 0 exactly when
/// two of the three are set (an open wedge), 1 otherwise.
int triangle_potential(bool c_ij, bool c_ik, bool c_jk);

/// Priors are clamped to [kPriorEpsilon, 1 - kPriorEpsilon] inside the
/// triangular scores so log sums stay finite; exact zeros are expressed via
/// the forbidden mechanism of exact_map_constrained instead.
inline constexpr double kPriorEpsilon = 1e-12;

/// Sum over pairs of the class log density log(rate) - rate * s plus the
/// clamped class log prior, the class being co-membership in p. The
/// triangular factors contribute nothing on valid partitions, and the
/// normalizer Z(S) cancels in every comparison.
double log_posterior_unnorm(const Partition& p, const SimilarityMatrix& s,
                            const ExpModelParams& params);

/// Two-class posterior edge probability from one pair's similarity and
/// parameters, computed in log space.
double edge_posterior(double s_ij, double rate1, double rate0, double prior1);

/// Symmetric per-pair probabilities p-hat in [0,1].
class EdgeProbabilities {
public:
    EdgeProbabilities() = default;  // empty placeholder
    explicit EdgeProbabilities(int n);
    int n() const { return n_; }
    double at(int i, int j) const { return p_[checked_index(i, j)]; }
    void set(int i, int j, double v);

private:
    int checked_index(int i, int j) const;
    int n_ = 0;
    std::vector<double> p_;
};

/// edge_posterior applied to every pair of an observed similarity matrix.
EdgeProbabilities edge_posteriors(const SimilarityMatrix& s, const ExpModelParams& params);

struct MapResult {
    Partition partition;
    double log_score = 0.0;
    std::uint64_t n_evaluated = 0;
};

/// Exhaustive MAP over all Bell(n) valid clusterings; ties broken by
/// enumeration order (first wins). n above the enumeration guard raises
/// CapacityError directing callers to MCMC.
MapResult exact_map(const SimilarityMatrix& s, const ExpModelParams& params);

/// MAP of the product score prod p-hat over chosen edges times (1 - p-hat)
/// over the rest, searched over partitions whose blocks are cliques of the
/// allowed graph (pairs not in `forbidden`). Forbidden pairs must carry
/// p-hat = 0. Enumeration follows restricted-growth order; runs of
/// consecutive vertices with identical p-hat rows are assigned to blocks in
/// non-decreasing order, which visits one representative per relabeling of
/// the run without affecting the maximum. Exceeding the node work budget
/// raises CapacityError.
MapResult exact_map_constrained(const EdgeProbabilities& ep,
                                const std::vector<std::pair<int, int>>& forbidden,
                                std::uint64_t work_budget = 200000000ULL);

} // namespace tsclust
