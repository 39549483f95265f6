#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tsclust/core.hpp"
#include "tsclust/matrix.hpp"

namespace tsclust {

enum class Norm { l1, l2 };

/// Knobs for the windowed distance / similarity construction. Defaults are
/// the base case: L2 norm, c = 1, no threshold, no decay.
struct SimilarityConfig {
    Norm norm = Norm::l2;
    double scale_c = 1.0;          // c > 0 in exp(-c * d)
    double threshold_lambda = 0.0; // similarities below lambda snap to 0; in [0,1)
    int window = 20;               // w >= 2
    double decay = 1.0;            // gamma in (0,1]; 1 disables decay
    void validate() const;
};

/// Symmetric non-negative matrix with zero diagonal.
class DistanceMatrix {
public:
    static DistanceMatrix from_matrix(Matrix values);
    int n() const { return values_.rows(); }
    double at(int i, int j) const { return values_(i, j); }
    const Matrix& values() const { return values_; }

private:
    DistanceMatrix() = default;
    Matrix values_;
};

/// Symmetric matrix with entries in [0,1] and unit diagonal.
class SimilarityMatrix {
public:
    static SimilarityMatrix from_matrix(Matrix values);
    int n() const { return values_.rows(); }
    double at(int i, int j) const { return values_(i, j); }
    const Matrix& values() const { return values_; }

private:
    SimilarityMatrix() = default;
    Matrix values_;
};

/// Norm-normalized window distance ||x1/||x1|| - x2/||x2|||| under cfg.norm.
/// With decay < 1 entries are pre-multiplied by gamma^(w-1-i) for position i
/// (oldest first), so the most recent entry keeps weight 1. An all-zero
/// window (after decay) raises DegenerateInputError.
double window_distance(std::span<const double> x1, std::span<const double> x2,
                       const SimilarityConfig& cfg);

/// s = exp(-c * d), snapped to 0 when below the threshold.
double similarize(double d, const SimilarityConfig& cfg);

/// Pairwise window distances over the trailing window ending at time k
/// (1-based, k >= w).
DistanceMatrix distance_at(const SeriesPanel& panel, int k, const SimilarityConfig& cfg);

/// similarize of the window distance per pair; diagonal forced to 1.
/// Degenerate pairs (an all-zero window) get similarity 0; if
/// degenerate_pairs is non-null the event count is accumulated there.
SimilarityMatrix similarity_at(const SeriesPanel& panel, int k, const SimilarityConfig& cfg,
                               std::size_t* degenerate_pairs = nullptr);

/// One similarity matrix per admissible step k = w..m.
std::vector<std::pair<int, SimilarityMatrix>> similarity_sequence(
    const SeriesPanel& panel, const SimilarityConfig& cfg,
    std::size_t* degenerate_pairs = nullptr);

} // namespace tsclust
