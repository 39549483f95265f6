#pragma once

#include <tuple>
#include <vector>

#include "tsclust/similarity.hpp"

namespace tsclust::testing {

/// Similarity matrix with unit diagonal and the given off-diagonal pairs
/// (unspecified pairs default to `fill`).
inline SimilarityMatrix make_similarity(
    int n, const std::vector<std::tuple<int, int, double>>& pairs, double fill = 0.0) {
    Matrix m(n, n, fill);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    for (const auto& [i, j, v] : pairs) m(i, j) = m(j, i) = v;
    return SimilarityMatrix::from_matrix(std::move(m));
}

inline SimilarityMatrix uniform_similarity(int n, double v) {
    return make_similarity(n, {}, v);
}

} // namespace tsclust::testing
