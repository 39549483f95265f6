#pragma once

#include <map>
#include <vector>

#include "tsclust/core.hpp"
#include "tsclust/exp_model.hpp"
#include "tsclust/matrix.hpp"
#include "tsclust/similarity.hpp"

namespace tsclust {

/// Bell(8) = 4140 hidden states is the ceiling for the clustering HMM.
inline constexpr int kHmmStateGuard = 8;

/// HMM whose hidden states are the Bell(n) clusterings of [n] in canonical
/// enumeration order. Emissions reuse the per-pair exponential conditionals;
/// the Markov chain carries cluster prevalence, so emissions omit the
/// pairwise prior factor.
class ClusterHmm {
public:
    static ClusterHmm create(int n, Matrix log_transition, std::vector<double> log_initial,
                             ExpModelParams emission);

    int n() const { return n_; }
    int state_count() const { return static_cast<int>(states_.size()); }
    const std::vector<Partition>& states() const { return states_; }
    const Matrix& log_transition() const { return log_transition_; }
    const std::vector<double>& log_initial() const { return log_initial_; }
    const ExpModelParams& emission() const { return emission_; }
    int state_index(const Partition& p) const;

private:
    ClusterHmm(int n, ExpModelParams emission) : n_(n), emission_(std::move(emission)) {}
    int n_;
    std::vector<Partition> states_;
    Matrix log_transition_;
    std::vector<double> log_initial_;
    ExpModelParams emission_;
    std::map<Partition, int> index_;
};

/// Supervised estimation: transition[a][b] = (count(a->b) + alpha) /
/// (count(a as source) + alpha * Bell(n)); initial = smoothed state
/// frequencies; emission = train_exponential over the same data. alpha = 0
/// reproduces the raw ML frequencies (rows for unseen sources fall back to
/// uniform). Data must be ordered in time with length >= 2.
ClusterHmm hmm_train(const TrainingSet& data, double alpha);

/// Sum over pairs of the class log density log(rate) - rate * s, the class
/// being co-membership in `state`. No prior term.
double emission_loglik(const SimilarityMatrix& s, const Partition& state,
                       const ExpModelParams& emission);

/// Joint-MAP state path (log-space Viterbi), ties toward the lower state
/// index. Time indices of the output start at first_time_index.
ClusterTimeline viterbi_decode(const ClusterHmm& hmm,
                               const std::vector<SimilarityMatrix>& observations,
                               int first_time_index = 1);

/// Normalized forward recursion; one per-step posterior over states, each
/// summing to 1.
std::vector<std::vector<double>> forward_filter(const ClusterHmm& hmm,
                                                const std::vector<SimilarityMatrix>& observations);

} // namespace tsclust
