#include "tsclust/similarity.hpp"

#include <cmath>

namespace tsclust {

void SimilarityConfig::validate() const {
    if (scale_c <= 0.0) throw ContractError("SimilarityConfig: scale c must be positive");
    if (threshold_lambda < 0.0 || threshold_lambda >= 1.0)
        throw ContractError("SimilarityConfig: threshold lambda must be in [0,1)");
    if (window < 2) throw ContractError("SimilarityConfig: window must be >= 2");
    if (decay <= 0.0 || decay > 1.0)
        throw ContractError("SimilarityConfig: decay must be in (0,1]");
}

DistanceMatrix DistanceMatrix::from_matrix(Matrix values) {
    if (values.rows() != values.cols()) throw ContractError("DistanceMatrix: not square");
    for (int i = 0; i < values.rows(); ++i) {
        if (values(i, i) != 0.0) throw ContractError("DistanceMatrix: diagonal must be 0");
        for (int j = 0; j < i; ++j) {
            if (values(i, j) != values(j, i)) throw ContractError("DistanceMatrix: not symmetric");
            if (values(i, j) < 0.0) throw ContractError("DistanceMatrix: negative entry");
        }
    }
    DistanceMatrix d;
    d.values_ = std::move(values);
    return d;
}

SimilarityMatrix SimilarityMatrix::from_matrix(Matrix values) {
    if (values.rows() != values.cols()) throw ContractError("SimilarityMatrix: not square");
    for (int i = 0; i < values.rows(); ++i) {
        if (values(i, i) != 1.0) throw ContractError("SimilarityMatrix: diagonal must be 1");
        for (int j = 0; j < i; ++j) {
            if (values(i, j) != values(j, i))
                throw ContractError("SimilarityMatrix: not symmetric");
            if (values(i, j) < 0.0 || values(i, j) > 1.0)
                throw ContractError("SimilarityMatrix: entry outside [0,1]");
        }
    }
    SimilarityMatrix s;
    s.values_ = std::move(values);
    return s;
}

namespace {

// Decays (most recent entry keeps weight 1) and normalizes in place.
// Returns false when the decayed vector has zero norm.
bool decay_and_normalize(std::vector<double>& x, const SimilarityConfig& cfg) {
    const int w = static_cast<int>(x.size());
    if (cfg.decay < 1.0) {
        double weight = 1.0;
        for (int i = w - 1; i >= 0; --i) {
            x[i] *= weight;
            weight *= cfg.decay;
        }
    }
    double norm = 0.0;
    if (cfg.norm == Norm::l1) {
        for (double v : x) norm += std::fabs(v);
    } else {
        for (double v : x) norm += v * v;
        norm = std::sqrt(norm);
    }
    if (norm == 0.0) return false;
    for (double& v : x) v /= norm;
    return true;
}

} // namespace

double window_distance(std::span<const double> x1, std::span<const double> x2,
                       const SimilarityConfig& cfg) {
    cfg.validate();
    if (x1.size() != static_cast<std::size_t>(cfg.window) || x1.size() != x2.size())
        throw ContractError("window_distance: vectors must have length w");
    std::vector<double> u1(x1.begin(), x1.end());
    std::vector<double> u2(x2.begin(), x2.end());
    if (!decay_and_normalize(u1, cfg) || !decay_and_normalize(u2, cfg))
        throw DegenerateInputError("window_distance: all-zero window");
    double d = 0.0;
    if (cfg.norm == Norm::l1) {
        for (std::size_t i = 0; i < u1.size(); ++i) d += std::fabs(u1[i] - u2[i]);
    } else {
        for (std::size_t i = 0; i < u1.size(); ++i) {
            const double diff = u1[i] - u2[i];
            d += diff * diff;
        }
        d = std::sqrt(d);
    }
    return d;
}

double similarize(double d, const SimilarityConfig& cfg) {
    cfg.validate();
    if (d < 0.0) throw ContractError("similarize: distance must be non-negative");
    const double s = std::exp(-cfg.scale_c * d);
    return s < cfg.threshold_lambda ? 0.0 : s;
}

DistanceMatrix distance_at(const SeriesPanel& panel, int k, const SimilarityConfig& cfg) {
    cfg.validate();
    if (k < cfg.window)
        throw InsufficientHistoryError("distance_at: k < window");
    if (k > panel.n_steps())
        throw ContractError("distance_at: k beyond panel length");
    const int n = panel.n_series();
    std::vector<std::vector<double>> windows(n);
    for (int s = 0; s < n; ++s) windows[s] = panel.window(s, k - 1, cfg.window);
    Matrix d(n, n);
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            const double v = window_distance(windows[i], windows[j], cfg);
            d(i, j) = d(j, i) = v;
        }
    return DistanceMatrix::from_matrix(std::move(d));
}

SimilarityMatrix similarity_at(const SeriesPanel& panel, int k, const SimilarityConfig& cfg,
                               std::size_t* degenerate_pairs) {
    cfg.validate();
    if (k < cfg.window)
        throw InsufficientHistoryError("similarity_at: k < window");
    if (k > panel.n_steps())
        throw ContractError("similarity_at: k beyond panel length");
    const int n = panel.n_series();
    std::vector<std::vector<double>> windows(n);
    for (int s = 0; s < n; ++s) windows[s] = panel.window(s, k - 1, cfg.window);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            double s;
            try {
                s = similarize(window_distance(windows[i], windows[j], cfg), cfg);
            } catch (const DegenerateInputError&) {
                // An all-zero return window carries no co-movement signal.
                s = 0.0;
                if (degenerate_pairs) ++*degenerate_pairs;
            }
            m(i, j) = m(j, i) = s;
        }
    return SimilarityMatrix::from_matrix(std::move(m));
}

std::vector<std::pair<int, SimilarityMatrix>> similarity_sequence(
    const SeriesPanel& panel, const SimilarityConfig& cfg, std::size_t* degenerate_pairs) {
    cfg.validate();
    if (panel.n_steps() < cfg.window)
        throw InsufficientHistoryError("similarity_sequence: panel shorter than window");
    std::vector<std::pair<int, SimilarityMatrix>> out;
    out.reserve(panel.n_steps() - cfg.window + 1);
    for (int k = cfg.window; k <= panel.n_steps(); ++k)
        out.emplace_back(k, similarity_at(panel, k, cfg, degenerate_pairs));
    return out;
}

} // namespace tsclust
