#include "tsclust/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsclust/rng.hpp"

namespace tsclust {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

EigenDecomposition eigen_symmetric(const Matrix& a) {
    const int n = a.rows();
    if (n != a.cols()) throw ContractError("eigen_symmetric: matrix not square");
    const double scale = std::max(1.0, a.max_abs());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (std::fabs(a(i, j) - a(j, i)) > 1e-12 * scale)
                throw ContractError("eigen_symmetric: matrix not symmetric");

    Matrix work = a;
    Matrix vecs = Matrix::identity(n);
    const double threshold = 1e-12 * a.frobenius_norm();

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(work) > threshold; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = work(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double app = work(p, p), aqq = work(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                            : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = work(k, p), akq = work(k, q);
                    work(k, p) = c * akp - s * akq;
                    work(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = work(p, k), aqk = work(q, k);
                    work(p, k) = c * apk - s * aqk;
                    work(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = vecs(k, p), vkq = vecs(k, q);
                    vecs(k, p) = c * vkp - s * vkq;
                    vecs(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return work(x, x) < work(y, y); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        out.values[j] = work(src, src);
        double lead = 0.0;
        for (int i = 0; i < n; ++i) {
            if (std::fabs(vecs(i, src)) > 1e-12) {
                lead = vecs(i, src);
                break;
            }
        }
        const double sign = lead < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) out.vectors(i, j) = sign * vecs(i, src);
    }
    return out;
}

Matrix laplacian(const SimilarityMatrix& s) {
    const int n = s.n();
    std::vector<double> inv_sqrt_degree(n);
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        for (int j = 0; j < n; ++j) d += s.at(i, j);
        if (d <= 0.0)
            throw DegenerateInputError("laplacian: zero row sum in similarity matrix");
        inv_sqrt_degree[i] = 1.0 / std::sqrt(d);
    }
    Matrix l(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            l(i, j) = (i == j ? 1.0 : 0.0) - s.at(i, j) * inv_sqrt_degree[i] * inv_sqrt_degree[j];
    return l;
}

Partition shi_malik(const SimilarityMatrix& s) {
    const int n = s.n();
    if (n < 2) throw ContractError("shi_malik: need at least 2 series");
    const EigenDecomposition eig = eigen_symmetric(laplacian(s));
    std::vector<double> fiedler(n);
    for (int i = 0; i < n; ++i) fiedler[i] = eig.vectors(i, 1);

    std::vector<double> sorted = fiedler;
    std::sort(sorted.begin(), sorted.end());
    const double median = n % 2 == 1 ? sorted[n / 2]
                                     : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    std::vector<int> above, rest;
    for (int i = 0; i < n; ++i) (fiedler[i] > median ? above : rest).push_back(i);
    if (above.empty()) {
        // All components at the median; split by index halves.
        above.clear();
        rest.clear();
        const int half = (n + 1) / 2;
        for (int i = 0; i < n; ++i) (i < half ? above : rest).push_back(i);
    }
    return Partition::canonical(n, {above, rest});
}

// ---------------------------------------------------------------------------
// Givens rotations and the alignment objective
// ---------------------------------------------------------------------------

RotationAngles RotationAngles::zero(int c) {
    RotationAngles a;
    a.c = c;
    a.theta.assign(static_cast<std::size_t>(c) * (c - 1) / 2, 0.0);
    return a;
}

void RotationAngles::validate() const {
    if (c < 2) throw ContractError("RotationAngles: c must be >= 2");
    if (static_cast<int>(theta.size()) != expected_size())
        throw ContractError("RotationAngles: expected c(c-1)/2 angles");
}

namespace {

// Plane (p,q) of the t-th Givens factor, t in [0, c(c-1)/2).
std::vector<std::pair<int, int>> givens_planes(int c) {
    std::vector<std::pair<int, int>> planes;
    planes.reserve(static_cast<std::size_t>(c) * (c - 1) / 2);
    for (int p = 0; p < c - 1; ++p)
        for (int q = p + 1; q < c; ++q) planes.emplace_back(p, q);
    return planes;
}

Matrix givens(int c, int p, int q, double theta) {
    Matrix g = Matrix::identity(c);
    const double ct = std::cos(theta), st = std::sin(theta);
    g(p, p) = ct;
    g(p, q) = -st;
    g(q, p) = st;
    g(q, q) = ct;
    return g;
}

Matrix givens_derivative(int c, int p, int q, double theta) {
    Matrix g(c, c);
    const double ct = std::cos(theta), st = std::sin(theta);
    g(p, p) = -st;
    g(p, q) = -ct;
    g(q, p) = ct;
    g(q, q) = -st;
    return g;
}

} // namespace

Matrix rotation_matrix(const RotationAngles& angles) {
    angles.validate();
    const auto planes = givens_planes(angles.c);
    Matrix r = Matrix::identity(angles.c);
    for (std::size_t t = 0; t < planes.size(); ++t)
        r = r * givens(angles.c, planes[t].first, planes[t].second, angles.theta[t]);
    return r;
}

std::vector<Matrix> rotation_derivatives(const RotationAngles& angles) {
    angles.validate();
    const auto planes = givens_planes(angles.c);
    const int k = static_cast<int>(planes.size());
    std::vector<Matrix> factors(k);
    for (int t = 0; t < k; ++t)
        factors[t] = givens(angles.c, planes[t].first, planes[t].second, angles.theta[t]);

    // prefix[t] = G_0 ... G_{t-1}, suffix[t] = G_t ... G_{k-1}
    std::vector<Matrix> prefix(k + 1), suffix(k + 1);
    prefix[0] = Matrix::identity(angles.c);
    for (int t = 0; t < k; ++t) prefix[t + 1] = prefix[t] * factors[t];
    suffix[k] = Matrix::identity(angles.c);
    for (int t = k - 1; t >= 0; --t) suffix[t] = factors[t] * suffix[t + 1];

    std::vector<Matrix> derivs(k);
    for (int t = 0; t < k; ++t) {
        const Matrix dg =
            givens_derivative(angles.c, planes[t].first, planes[t].second, angles.theta[t]);
        derivs[t] = prefix[t] * dg * suffix[t + 1];
    }
    return derivs;
}

std::vector<double> row_max_abs(const Matrix& z) {
    std::vector<double> m(z.rows(), 0.0);
    for (int i = 0; i < z.rows(); ++i)
        for (int j = 0; j < z.cols(); ++j) m[i] = std::max(m[i], std::fabs(z(i, j)));
    return m;
}

namespace {

double objective_given_z(const Matrix& z, const std::vector<double>& m) {
    double j = 0.0;
    for (int i = 0; i < z.rows(); ++i) {
        if (m[i] <= 0.0) {
            // All-zero row: the max-achieving term's limit is 1, which keeps
            // J >= n on degenerate inputs.
            j += 1.0;
            continue;
        }
        for (int c = 0; c < z.cols(); ++c) {
            const double v = z(i, c) / m[i];
            j += v * v;
        }
    }
    return j;
}

} // namespace

double alignment_objective(const Matrix& v, const RotationAngles& angles,
                           const std::vector<double>& frozen_m) {
    if (static_cast<int>(frozen_m.size()) != v.rows())
        throw ContractError("alignment_objective: one scale per row required");
    return objective_given_z(v * rotation_matrix(angles), frozen_m);
}

std::vector<double> alignment_gradient(const Matrix& v, const RotationAngles& angles,
                                       const std::vector<double>& frozen_m) {
    if (static_cast<int>(frozen_m.size()) != v.rows())
        throw ContractError("alignment_gradient: one scale per row required");
    const Matrix z = v * rotation_matrix(angles);
    const auto derivs = rotation_derivatives(angles);
    std::vector<double> grad(derivs.size(), 0.0);
    for (std::size_t t = 0; t < derivs.size(); ++t) {
        const Matrix dz = v * derivs[t];
        double g = 0.0;
        for (int i = 0; i < z.rows(); ++i) {
            const double mi = frozen_m[i];
            if (mi <= 0.0) continue;  // zero-scale row is a constant term
            for (int c = 0; c < z.cols(); ++c) g += 2.0 * z(i, c) * dz(i, c) / (mi * mi);
        }
        grad[t] = g;
    }
    return grad;
}

namespace {

Partition assignment_from_z(const Matrix& z) {
    std::vector<int> labels(z.rows());
    for (int i = 0; i < z.rows(); ++i) {
        int best = 0;
        double best_abs = std::fabs(z(i, 0));
        for (int c = 1; c < z.cols(); ++c) {
            const double a = std::fabs(z(i, c));
            if (a > best_abs) {
                best_abs = a;
                best = c;
            }
        }
        labels[i] = best;
    }
    return Partition::from_labels(z.rows(), labels);
}

} // namespace

namespace {

double objective_at(const Matrix& v, const RotationAngles& angles) {
    const Matrix z = v * rotation_matrix(angles);
    return objective_given_z(z, row_max_abs(z));
}

// Cyclic per-angle line search on the refreshed-scale objective: coarse grid
// over a half-turn, then golden-section refinement. The frozen-scale
// gradient can vanish at points that are not minima of the refreshed
// objective; this stage walks through them. Only strict improvements are
// accepted, so J never increases.
void polish_by_coordinate_search(const Matrix& v, RotationAngles& angles, double& j_current,
                                 int max_sweeps) {
    constexpr double kPi = 3.14159265358979323846;
    const int grid = 36;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const double j_before = j_current;
        for (std::size_t t = 0; t < angles.theta.size(); ++t) {
            const double center = angles.theta[t];
            double best_theta = center;
            double best_j = j_current;
            RotationAngles cand = angles;
            for (int g = 0; g <= grid; ++g) {
                cand.theta[t] = center - kPi / 2.0 + g * (kPi / grid);
                const double j = objective_at(v, cand);
                if (j < best_j) {
                    best_j = j;
                    best_theta = cand.theta[t];
                }
            }
            double lo = best_theta - kPi / grid, hi = best_theta + kPi / grid;
            for (int it = 0; it < 40; ++it) {
                const double m1 = lo + 0.3819660112501051 * (hi - lo);
                const double m2 = hi - 0.3819660112501051 * (hi - lo);
                RotationAngles c1 = angles, c2 = angles;
                c1.theta[t] = m1;
                c2.theta[t] = m2;
                if (objective_at(v, c1) < objective_at(v, c2))
                    hi = m2;
                else
                    lo = m1;
            }
            cand.theta[t] = 0.5 * (lo + hi);
            const double j = objective_at(v, cand);
            if (j < j_current) {
                j_current = j;
                angles = cand;
            } else if (best_j < j_current) {
                angles.theta[t] = best_theta;
                j_current = best_j;
            }
        }
        if (j_before - j_current < 1e-12) break;
    }
}

} // namespace

AlignmentResult align_rotation(const Matrix& v, const RotationAngles& init,
                               const DescentConfig& cfg) {
    init.validate();
    if (v.cols() != init.c) throw ContractError("align_rotation: V columns must equal c");
    if (v.rows() < 1) throw ContractError("align_rotation: V must have rows");
    {
        const Matrix gram = v.transposed() * v;
        if ((gram - Matrix::identity(v.cols())).frobenius_norm() > 1e-6)
            throw ContractError("align_rotation: V columns must be orthonormal");
    }
    const int n = v.rows();

    RotationAngles angles = init;
    Matrix z = v * rotation_matrix(angles);
    double j_current = objective_given_z(z, row_max_abs(z));

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const std::vector<double> frozen = row_max_abs(z);
        const std::vector<double> grad = alignment_gradient(v, angles, frozen);
        double gnorm2 = 0.0;
        for (double g : grad) gnorm2 += g * g;
        if (gnorm2 == 0.0) break;

        double eta = cfg.step;
        bool accepted = false;
        RotationAngles candidate = angles;
        Matrix z_candidate;
        double j_candidate = 0.0;
        for (int halving = 0; halving <= cfg.max_halvings; ++halving) {
            for (std::size_t t = 0; t < grad.size(); ++t)
                candidate.theta[t] = angles.theta[t] - eta * grad[t];
            z_candidate = v * rotation_matrix(candidate);
            j_candidate = objective_given_z(z_candidate, row_max_abs(z_candidate));
            if (j_candidate <= j_current) {
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break;
        const double delta = j_current - j_candidate;
        angles = candidate;
        z = z_candidate;
        j_current = j_candidate;
        if (delta < cfg.tol) break;
    }

    if (cfg.polish_sweeps > 0) {
        polish_by_coordinate_search(v, angles, j_current, cfg.polish_sweeps);
        z = v * rotation_matrix(angles);
    }

    AlignmentResult result;
    result.z = z;
    result.angles = angles;
    result.j = j_current;
    result.q = 1.0 - (j_current / n - 1.0);
    result.assignments = assignment_from_z(z);
    return result;
}

SpectralSelection dynamic_spectral(const SimilarityMatrix& s, int c_min, int c_max,
                                   const DescentConfig& gd) {
    const int n = s.n();
    if (c_min < 2 || c_min > c_max || c_max > n)
        throw ContractError("dynamic_spectral: need 2 <= c_min <= c_max <= n");
    const EigenDecomposition eig = eigen_symmetric(laplacian(s));

    SpectralSelection sel;
    double best_q = 0.0;
    bool have_best = false;
    for (int c = c_min; c <= c_max; ++c) {
        Matrix v(n, c);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < c; ++j) v(i, j) = eig.vectors(i, j);

        AlignmentResult best_run;
        bool have_run = false;
        const int k = c * (c - 1) / 2;
        for (int r = 0; r < std::max(1, gd.restarts); ++r) {
            RotationAngles start = RotationAngles::zero(c);
            if (r > 0) {
                Rng rng(gd.seed, static_cast<std::uint64_t>(c) * 64 + r);
                for (int t = 0; t < k; ++t)
                    start.theta[t] = (rng.uniform01() - 0.5) * 1.5707963267948966;  // [-pi/4, pi/4]
            }
            AlignmentResult run = align_rotation(v, start, gd);
            if (!have_run || run.j < best_run.j) {
                best_run = run;
                have_run = true;
            }
        }
        sel.q_by_c.push_back(best_run.q);
        if (!have_best || best_run.q > best_q) {
            best_q = best_run.q;
            sel.partition = best_run.assignments;
            sel.best_c = c;
            have_best = true;
        }
    }
    return sel;
}

ClusterTimeline spectral_timeline(const SeriesPanel& panel, const SimilarityConfig& cfg,
                                  int c_min, int c_max, const DescentConfig& gd) {
    cfg.validate();
    if (panel.n_steps() < cfg.window)
        throw InsufficientHistoryError("spectral_timeline: panel shorter than window");
    ClusterTimeline timeline;
    for (int k = cfg.window; k <= panel.n_steps(); ++k) {
        const SimilarityMatrix s = similarity_at(panel, k, cfg);
        timeline.append(k, dynamic_spectral(s, c_min, c_max, gd).partition);
    }
    return timeline;
}

} // namespace tsclust
