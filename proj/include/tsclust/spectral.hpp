#pragma once

#include <cstdint>
#include <vector>

#include "tsclust/core.hpp"
#include "tsclust/matrix.hpp"
#include "tsclust/similarity.hpp"

namespace tsclust {

/// Eigenvalues ascending; column j of vectors pairs with values[j].
/// Each eigenvector's first nonzero component is made positive so repeated
/// runs produce identical signs.
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;
};

/// Cyclic Jacobi on a symmetric matrix (asymmetry beyond 1e-12 relative is a
/// contract error). Sweeps run in a fixed order until the off-diagonal
/// Frobenius mass drops below 1e-12 * ||A||_F.
EigenDecomposition eigen_symmetric(const Matrix& a);

/// Normalized Laplacian L = I - D^{-1/2} S D^{-1/2} with D_ii = row sums of
/// S. A zero row sum is degenerate (cannot happen when the diagonal is 1).
Matrix laplacian(const SimilarityMatrix& s);

/// Shi-Malik bipartition: median split on the eigenvector of the
/// second-smallest Laplacian eigenvalue. Components strictly above the
/// median go to one side; if that side is empty (all components equal the
/// median) the split falls back to index halves.
Partition shi_malik(const SimilarityMatrix& s);

/// Angles of the c(c-1)/2 Givens factors parameterizing a c-by-c rotation.
struct RotationAngles {
    int c = 0;
    std::vector<double> theta;

    static RotationAngles zero(int c);
    int expected_size() const { return c * (c - 1) / 2; }
    void validate() const;
};

/// R(Theta) = G_1 * ... * G_k, planes enumerated (0,1), (0,2), ..., (c-2,c-1).
Matrix rotation_matrix(const RotationAngles& angles);

/// dR/dtheta_t for every t (the identity part of G_t differentiates to zero).
std::vector<Matrix> rotation_derivatives(const RotationAngles& angles);

/// Per-row max-abs of Z; the M_i scales of the alignment objective.
std::vector<double> row_max_abs(const Matrix& z);

/// J(Theta) = sum_ij (Z_ij / M_i)^2 with Z = V R(Theta) and the M_i supplied
/// (frozen). Exposed separately so the finite-difference gradient check can
/// perturb Theta under fixed scales.
double alignment_objective(const Matrix& v, const RotationAngles& angles,
                           const std::vector<double>& frozen_m);

/// Analytic gradient of alignment_objective under the same frozen scales.
std::vector<double> alignment_gradient(const Matrix& v, const RotationAngles& angles,
                                       const std::vector<double>& frozen_m);

struct DescentConfig {
    double step = 0.1;
    int max_iters = 200;
    double tol = 1e-10;     // stop when an accepted step has |delta J| < tol
    int max_halvings = 20;  // backtracking line search depth
    int restarts = 5;       // Theta = 0 plus (restarts - 1) seeded uniform draws
    int polish_sweeps = 30; // cyclic per-angle line-search sweeps after descent
    std::uint64_t seed = 0x5eedULL;
};

/// Z = V R(Theta), the objective value, the score q = 1 - (J/n - 1), and the
/// row-wise argmax assignment (ties toward the lowest column).
struct AlignmentResult {
    Matrix z;
    RotationAngles angles;
    double j = 0.0;
    double q = 0.0;
    Partition assignments;
};

/// Gradient descent on J from the given initial angles. M_i is frozen per
/// gradient evaluation and refreshed between iterations; the reported J uses
/// refreshed scales, and accepted steps never increase it. A cyclic
/// per-angle line search runs afterwards because frozen-scale stationary
/// points need not minimize the refreshed objective.
AlignmentResult align_rotation(const Matrix& v, const RotationAngles& init,
                               const DescentConfig& cfg);

/// Model selection across cluster counts: q per c, partition of the
/// q-maximizing c, ties toward smaller c.
struct SpectralSelection {
    Partition partition;
    int best_c = 0;
    std::vector<double> q_by_c;  // index c - c_min
};

/// For each c in [c_min, c_max]: eigenvectors of the c smallest Laplacian
/// eigenvalues, multi-start rotation alignment (lowest J kept), then pick
/// the c maximizing q.
SpectralSelection dynamic_spectral(const SimilarityMatrix& s, int c_min, int c_max,
                                   const DescentConfig& gd);

/// dynamic_spectral applied to the windowed similarity at each k = w..m.
ClusterTimeline spectral_timeline(const SeriesPanel& panel, const SimilarityConfig& cfg,
                                  int c_min, int c_max, const DescentConfig& gd);

} // namespace tsclust
