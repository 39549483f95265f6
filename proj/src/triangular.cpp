#include "tsclust/triangular.hpp"

#include <algorithm>
#include <cmath>

namespace tsclust {

int triangle_potential(bool c_ij, bool c_ik, bool c_jk) {
    const int set_count = (c_ij ? 1 : 0) + (c_ik ? 1 : 0) + (c_jk ? 1 : 0);
    return set_count == 2 ? 0 : 1;
}

namespace {

double clamped_prior(double p) {
    return std::min(std::max(p, kPriorEpsilon), 1.0 - kPriorEpsilon);
}

} // namespace

double log_posterior_unnorm(const Partition& p, const SimilarityMatrix& s,
                            const ExpModelParams& params) {
    if (p.n() != s.n() || p.n() != params.n())
        throw ContractError("log_posterior_unnorm: n mismatch");
    const int n = p.n();
    double sum = 0.0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            const double sij = s.at(i, j);
            const double prior = clamped_prior(params.prior1(i, j));
            if (p.block_of(i) == p.block_of(j)) {
                const double rate = params.rate1(i, j);
                sum += std::log(rate) - rate * sij + std::log(prior);
            } else {
                const double rate = params.rate0(i, j);
                sum += std::log(rate) - rate * sij + std::log(1.0 - prior);
            }
        }
    }
    return sum;
}

double edge_posterior(double s_ij, double rate1, double rate0, double prior1) {
    if (!(rate1 > 0.0) || !(rate0 > 0.0))
        throw ContractError("edge_posterior: rates must be positive");
    if (prior1 < 0.0 || prior1 > 1.0)
        throw ContractError("edge_posterior: prior outside [0,1]");
    const double p = clamped_prior(prior1);
    const double l1 = std::log(rate1) - rate1 * s_ij + std::log(p);
    const double l0 = std::log(rate0) - rate0 * s_ij + std::log(1.0 - p);
    const double hi = std::max(l1, l0);
    return std::exp(l1 - hi) / (std::exp(l1 - hi) + std::exp(l0 - hi));
}

EdgeProbabilities::EdgeProbabilities(int n) : n_(n) {
    if (n < 2) throw ContractError("EdgeProbabilities: need at least 2 vertices");
    p_.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
}

int EdgeProbabilities::checked_index(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
        throw ContractError("EdgeProbabilities: bad pair");
    return pair_index(i, j);
}

void EdgeProbabilities::set(int i, int j, double v) {
    const int idx = checked_index(i, j);
    if (v < 0.0 || v > 1.0) throw ContractError("EdgeProbabilities: value outside [0,1]");
    p_[idx] = v;
}

EdgeProbabilities edge_posteriors(const SimilarityMatrix& s, const ExpModelParams& params) {
    if (s.n() != params.n()) throw ContractError("edge_posteriors: n mismatch");
    EdgeProbabilities ep(s.n());
    for (int j = 1; j < s.n(); ++j)
        for (int i = 0; i < j; ++i)
            ep.set(i, j, edge_posterior(s.at(i, j), params.rate1(i, j), params.rate0(i, j),
                                        params.prior1(i, j)));
    return ep;
}

MapResult exact_map(const SimilarityMatrix& s, const ExpModelParams& params) {
    if (s.n() != params.n()) throw ContractError("exact_map: n mismatch");
    const int n = s.n();
    if (n > kEnumerationGuard)
        throw CapacityError("exact_map: n > " + std::to_string(kEnumerationGuard) +
                            "; use the MCMC sampler");
    PartitionEnumerator en(n);
    MapResult result;
    Partition p;
    bool have_best = false;
    while (en.next(p)) {
        const double score = log_posterior_unnorm(p, s, params);
        ++result.n_evaluated;
        if (!have_best || score > result.log_score) {
            result.partition = p;
            result.log_score = score;
            have_best = true;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Constrained clique-partition search
// ---------------------------------------------------------------------------

namespace {

class ConstrainedSearch {
public:
    ConstrainedSearch(const EdgeProbabilities& ep, const std::vector<std::uint8_t>& forbidden,
                      std::uint64_t budget)
        : n_(ep.n()), forbidden_(forbidden), budget_(budget) {
        const std::size_t pairs = forbidden.size();
        log_p_.resize(pairs);
        log_1mp_.resize(pairs);
        for (int j = 1; j < n_; ++j) {
            for (int i = 0; i < j; ++i) {
                const double p = ep.at(i, j);
                log_p_[pair_index(i, j)] = std::log(p);
                log_1mp_[pair_index(i, j)] = std::log1p(-p);
            }
        }
        // Runs of consecutive vertices with identical rows are exchangeable;
        // assigning them to non-decreasing block indices visits exactly one
        // representative per relabeling without changing the maximum.
        same_as_prev_.assign(n_, 0);
        for (int v = 1; v < n_; ++v) {
            bool same = true;
            for (int w = 0; w < n_ && same; ++w) {
                if (w == v || w == v - 1) continue;
                if (ep.at(v - 1, w) != ep.at(v, w) ||
                    forbidden[pair_index(v - 1, w)] != forbidden[pair_index(v, w)])
                    same = false;
            }
            same_as_prev_[v] = same ? 1 : 0;
        }
        // Pairs with p-hat = 1 make the subtract-trick produce NaN; such
        // vertices take the direct per-block path.
        needs_direct_.assign(n_, 0);
        for (int v = 1; v < n_; ++v)
            for (int u = 0; u < v; ++u)
                if (ep.at(u, v) == 1.0) needs_direct_[v] = 1;
        choice_.assign(n_, 0);
    }

    MapResult run() {
        recurse(0, 0.0);
        MapResult result;
        result.partition = Partition::from_labels(n_, best_labels_);
        result.log_score = best_score_;
        result.n_evaluated = leaves_;
        return result;
    }

private:
    void recurse(int v, double score) {
        if (++nodes_ > budget_)
            throw CapacityError("exact_map_constrained: work budget exceeded");
        if (v == n_) {
            ++leaves_;
            if (!have_best_ || score > best_score_) {
                best_labels_ = choice_;
                best_score_ = score;
                have_best_ = true;
            }
            return;
        }
        const int min_block = (v > 0 && same_as_prev_[v]) ? choice_[v - 1] : 0;
        const int block_count = static_cast<int>(blocks_.size());

        if (!needs_direct_[v]) {
            double cross_sum = 0.0;
            for (int u = 0; u < v; ++u) cross_sum += log_1mp_[pair_index(u, v)];
            for (int b = min_block; b < block_count; ++b) {
                bool feasible = true;
                double delta = cross_sum;
                for (int u : blocks_[b]) {
                    const int idx = pair_index(u, v);
                    if (forbidden_[idx]) {
                        feasible = false;
                        break;
                    }
                    delta += log_p_[idx] - log_1mp_[idx];
                }
                if (feasible) descend(v, b, score + delta);
            }
            descend_new_block(v, score + cross_sum);
        } else {
            for (int b = min_block; b < block_count; ++b) {
                bool feasible = true;
                double delta = 0.0;
                for (int u = 0; u < v; ++u) {
                    const int idx = pair_index(u, v);
                    if (choice_[u] == b) {
                        if (forbidden_[idx]) {
                            feasible = false;
                            break;
                        }
                        delta += log_p_[idx];
                    } else {
                        delta += log_1mp_[idx];
                    }
                }
                if (feasible) descend(v, b, score + delta);
            }
            double cross = 0.0;
            for (int u = 0; u < v; ++u) cross += log_1mp_[pair_index(u, v)];
            descend_new_block(v, score + cross);
        }
    }

    void descend(int v, int b, double score) {
        choice_[v] = b;
        blocks_[b].push_back(v);
        recurse(v + 1, score);
        blocks_[b].pop_back();
    }

    void descend_new_block(int v, double score) {
        choice_[v] = static_cast<int>(blocks_.size());
        blocks_.push_back({v});
        recurse(v + 1, score);
        blocks_.pop_back();
    }

    int n_;
    const std::vector<std::uint8_t>& forbidden_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0, leaves_ = 0;
    std::vector<double> log_p_, log_1mp_;
    std::vector<std::uint8_t> same_as_prev_, needs_direct_;
    std::vector<int> choice_;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> best_labels_;
    double best_score_ = 0.0;
    bool have_best_ = false;
};

} // namespace

MapResult exact_map_constrained(const EdgeProbabilities& ep,
                                const std::vector<std::pair<int, int>>& forbidden,
                                std::uint64_t work_budget) {
    const int n = ep.n();
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n) * (n - 1) / 2, 0);
    for (const auto& [a, b] : forbidden) {
        if (a == b || a < 0 || b < 0 || a >= n || b >= n)
            throw ContractError("exact_map_constrained: bad forbidden pair");
        if (ep.at(a, b) > 0.0)
            throw ContractError("exact_map_constrained: forbidden pair with positive probability");
        mask[pair_index(a, b)] = 1;
    }
    ConstrainedSearch search(ep, mask, work_budget);
    return search.run();
}

} // namespace tsclust
