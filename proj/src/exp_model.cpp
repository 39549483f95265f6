#include "tsclust/exp_model.hpp"

#include <cmath>

namespace tsclust {

ExpModelParams::ExpModelParams(int n) : n_(n) {
    if (n < 2) throw ContractError("ExpModelParams: need at least 2 series");
    const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    rate1_.assign(pairs, 1.0);
    rate0_.assign(pairs, 1.0);
    prior1_.assign(pairs, 0.5);
}

int ExpModelParams::checked_index(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
        throw ContractError("ExpModelParams: bad pair");
    return pair_index(i, j);
}

void ExpModelParams::set_pair(int i, int j, double r1, double r0, double p1) {
    const int idx = checked_index(i, j);
    if (!(r1 > 0.0) || !(r0 > 0.0)) throw ContractError("ExpModelParams: rates must be positive");
    if (p1 < 0.0 || p1 > 1.0) throw ContractError("ExpModelParams: prior outside [0,1]");
    rate1_[idx] = r1;
    rate0_[idx] = r0;
    prior1_[idx] = p1;
}

void TrainingSet::validate() const {
    if (sims.empty()) throw ContractError("TrainingSet: empty");
    if (sims.size() != labels.size())
        throw ContractError("TrainingSet: similarity/label count mismatch");
    const int n0 = sims.front().n();
    for (const auto& s : sims)
        if (s.n() != n0) throw ContractError("TrainingSet: inconsistent n");
    for (const auto& p : labels)
        if (p.n() != n0) throw ContractError("TrainingSet: inconsistent n in labels");
}

ExpModelParams train_exponential(const TrainingSet& data, const ExpTrainConfig& cfg) {
    data.validate();
    const int n = data.n();
    const int m = data.size();
    ExpModelParams params(n);

    auto capped_rate = [](double mean) {
        return mean > kRateFloor ? 1.0 / mean : 1.0 / kRateFloor;
    };

    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            double sum1 = 0.0, sum0 = 0.0;
            int count1 = 0;
            for (int k = 0; k < m; ++k) {
                const double s = data.sims[k].at(i, j);
                if (data.labels[k].block_of(i) == data.labels[k].block_of(j)) {
                    sum1 += s;
                    ++count1;
                } else {
                    sum0 += s;
                }
            }
            const int count0 = m - count1;
            const double pooled = capped_rate((sum1 + sum0) / m);
            double r1, r0;
            if (cfg.rate_mode == RateMode::pooled) {
                r1 = r0 = pooled;
            } else {
                r1 = count1 > 0 ? capped_rate(sum1 / count1) : pooled;
                r0 = count0 > 0 ? capped_rate(sum0 / count0) : pooled;
            }
            params.set_pair(i, j, r1, r0, static_cast<double>(count1) / m);
        }
    }
    return params;
}

EdgeEnsemble independent_map(const SimilarityMatrix& s, const ExpModelParams& params) {
    if (s.n() != params.n()) throw ContractError("independent_map: n mismatch");
    const int n = s.n();
    EdgeEnsemble out(n);
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            const double sij = s.at(i, j);
            const double p = params.prior1(i, j);
            // log(0) = -inf makes degenerate priors behave exactly.
            const double score1 =
                std::log(params.rate1(i, j)) - params.rate1(i, j) * sij + std::log(p);
            const double score0 =
                std::log(params.rate0(i, j)) - params.rate0(i, j) * sij + std::log(1.0 - p);
            out.set_edge(i, j, score1 > score0);
        }
    }
    return out;
}

Partition exp_predict(const SimilarityMatrix& s, const ExpModelParams& params) {
    return ensemble_to_partition(independent_map(s, params));
}

} // namespace tsclust
