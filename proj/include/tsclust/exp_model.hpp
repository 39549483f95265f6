#pragma once

#include <vector>

#include "tsclust/core.hpp"
#include "tsclust/similarity.hpp"

namespace tsclust {

/// Per-pair conditional exponential rates and prior edge probabilities:
/// rate1 is the rate of P(S_ij | C_ij = 1), rate0 of P(S_ij | C_ij = 0),
/// prior1 = P(C_ij = 1). Symmetric by pair-indexed storage.
class ExpModelParams {
public:
    explicit ExpModelParams(int n);
    int n() const { return n_; }
    double rate1(int i, int j) const { return rate1_[checked_index(i, j)]; }
    double rate0(int i, int j) const { return rate0_[checked_index(i, j)]; }
    double prior1(int i, int j) const { return prior1_[checked_index(i, j)]; }
    void set_pair(int i, int j, double r1, double r0, double p1);

private:
    int checked_index(int i, int j) const;
    int n_;
    std::vector<double> rate1_, rate0_, prior1_;
};

/// Aligned (similarity matrix, clustering) observations with a shared n.
struct TrainingSet {
    std::vector<SimilarityMatrix> sims;
    std::vector<Partition> labels;

    int size() const { return static_cast<int>(sims.size()); }
    int n() const { return sims.empty() ? 0 : sims.front().n(); }
    void validate() const;
};

enum class RateMode {
    conditional,  // two rates per pair, one per class (default of record)
    pooled        // the unconditional sample-mean rate shared by both classes
};

struct ExpTrainConfig {
    RateMode rate_mode = RateMode::conditional;
};

/// Sample-mean rate cap: a class whose similarities are all zero gets rate
/// 1/kRateFloor.
inline constexpr double kRateFloor = 1e-9;

/// ML estimation per pair: prior1 = co-clustered frequency; each class rate
/// is the inverse conditional sample mean, with the pooled unconditional
/// rate as the fallback when a class has no observations.
ExpModelParams train_exponential(const TrainingSet& data, const ExpTrainConfig& cfg = {});

/// Per-pair independent MAP: pick the class maximizing
/// rate * exp(-rate * s) * prior, compared in log space; ties go to class 0.
/// The result need not be a valid clustering.
EdgeEnsemble independent_map(const SimilarityMatrix& s, const ExpModelParams& params);

/// Connected components of the independent MAP ensemble. O(n^2) pairs.
Partition exp_predict(const SimilarityMatrix& s, const ExpModelParams& params);

} // namespace tsclust
