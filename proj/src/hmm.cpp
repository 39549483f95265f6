#include "tsclust/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsclust {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& v) {
    double hi = kNegInf;
    for (double x : v) hi = std::max(hi, x);
    if (hi == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - hi);
    return hi + std::log(s);
}

} // namespace

ClusterHmm ClusterHmm::create(int n, Matrix log_transition, std::vector<double> log_initial,
                              ExpModelParams emission) {
    if (n < 2) throw ContractError("ClusterHmm: need at least 2 series");
    if (n > kHmmStateGuard)
        throw CapacityError("ClusterHmm: n > " + std::to_string(kHmmStateGuard) +
                            " exceeds the state guard");
    if (emission.n() != n) throw ContractError("ClusterHmm: emission n mismatch");

    ClusterHmm hmm(n, std::move(emission));
    hmm.states_ = all_partitions(n);
    const int b = hmm.state_count();
    if (log_transition.rows() != b || log_transition.cols() != b)
        throw ContractError("ClusterHmm: transition must be Bell(n) square");
    if (static_cast<int>(log_initial.size()) != b)
        throw ContractError("ClusterHmm: initial must have Bell(n) entries");
    // Rows and the initial vector must be log-probability distributions.
    for (int a = 0; a < b; ++a) {
        std::vector<double> row(b);
        for (int j = 0; j < b; ++j) row[j] = log_transition(a, j);
        if (std::fabs(log_sum_exp(row)) > 1e-9)
            throw ContractError("ClusterHmm: transition row does not sum to 1");
    }
    if (std::fabs(log_sum_exp(log_initial)) > 1e-9)
        throw ContractError("ClusterHmm: initial does not sum to 1");
    hmm.log_transition_ = std::move(log_transition);
    hmm.log_initial_ = std::move(log_initial);
    for (int i = 0; i < b; ++i) hmm.index_[hmm.states_[i]] = i;
    return hmm;
}

int ClusterHmm::state_index(const Partition& p) const {
    const auto it = index_.find(p);
    if (it == index_.end()) throw ContractError("ClusterHmm: unknown state");
    return it->second;
}

ClusterHmm hmm_train(const TrainingSet& data, double alpha) {
    data.validate();
    if (data.size() < 2) throw ContractError("hmm_train: need at least 2 observations");
    if (alpha < 0.0) throw ContractError("hmm_train: alpha must be >= 0");
    const int n = data.n();
    if (n > kHmmStateGuard)
        throw CapacityError("hmm_train: n > " + std::to_string(kHmmStateGuard) +
                            " exceeds the state guard");

    const std::vector<Partition> states = all_partitions(n);
    const int b = static_cast<int>(states.size());
    std::map<Partition, int> index;
    for (int i = 0; i < b; ++i) index[states[i]] = i;

    std::vector<std::vector<std::uint64_t>> transitions(b, std::vector<std::uint64_t>(b, 0));
    std::vector<std::uint64_t> source_counts(b, 0), state_counts(b, 0);
    const int t_len = data.size();
    for (int t = 0; t < t_len; ++t) {
        const int s = index.at(data.labels[t]);
        ++state_counts[s];
        if (t + 1 < t_len) {
            ++transitions[s][index.at(data.labels[t + 1])];
            ++source_counts[s];
        }
    }

    Matrix log_transition(b, b);
    for (int a = 0; a < b; ++a) {
        const double denom = static_cast<double>(source_counts[a]) + alpha * b;
        for (int j = 0; j < b; ++j) {
            if (denom == 0.0) {
                // alpha = 0 and an unseen source state: the ML row is 0/0;
                // fall back to uniform so rows stay distributions.
                log_transition(a, j) = -std::log(static_cast<double>(b));
            } else {
                log_transition(a, j) = std::log((transitions[a][j] + alpha) / denom);
            }
        }
    }
    std::vector<double> log_initial(b);
    for (int j = 0; j < b; ++j)
        log_initial[j] = std::log((state_counts[j] + alpha) / (t_len + alpha * b));

    return ClusterHmm::create(n, std::move(log_transition), std::move(log_initial),
                              train_exponential(data));
}

double emission_loglik(const SimilarityMatrix& s, const Partition& state,
                       const ExpModelParams& emission) {
    if (s.n() != state.n() || s.n() != emission.n())
        throw ContractError("emission_loglik: n mismatch");
    const int n = s.n();
    double sum = 0.0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            const double rate = state.block_of(i) == state.block_of(j) ? emission.rate1(i, j)
                                                                       : emission.rate0(i, j);
            sum += std::log(rate) - rate * s.at(i, j);
        }
    return sum;
}

ClusterTimeline viterbi_decode(const ClusterHmm& hmm,
                               const std::vector<SimilarityMatrix>& observations,
                               int first_time_index) {
    if (observations.empty()) throw ContractError("viterbi_decode: no observations");
    const int b = hmm.state_count();
    const int t_len = static_cast<int>(observations.size());

    std::vector<std::vector<double>> delta(t_len, std::vector<double>(b));
    std::vector<std::vector<int>> argmax_prev(t_len, std::vector<int>(b, 0));

    for (int s = 0; s < b; ++s)
        delta[0][s] = hmm.log_initial()[s] +
                      emission_loglik(observations[0], hmm.states()[s], hmm.emission());
    for (int t = 1; t < t_len; ++t) {
        for (int s = 0; s < b; ++s) {
            double best = kNegInf;
            int best_prev = 0;
            for (int prev = 0; prev < b; ++prev) {
                const double cand = delta[t - 1][prev] + hmm.log_transition()(prev, s);
                if (cand > best) {
                    best = cand;
                    best_prev = prev;
                }
            }
            delta[t][s] = best + emission_loglik(observations[t], hmm.states()[s], hmm.emission());
            argmax_prev[t][s] = best_prev;
        }
    }

    int state = 0;
    for (int s = 1; s < b; ++s)
        if (delta[t_len - 1][s] > delta[t_len - 1][state]) state = s;
    std::vector<int> path(t_len);
    path[t_len - 1] = state;
    for (int t = t_len - 1; t > 0; --t) path[t - 1] = argmax_prev[t][path[t]];

    ClusterTimeline timeline;
    for (int t = 0; t < t_len; ++t)
        timeline.append(first_time_index + t, hmm.states()[path[t]]);
    return timeline;
}

std::vector<std::vector<double>> forward_filter(const ClusterHmm& hmm,
                                                const std::vector<SimilarityMatrix>& observations) {
    if (observations.empty()) throw ContractError("forward_filter: no observations");
    const int b = hmm.state_count();
    const int t_len = static_cast<int>(observations.size());

    std::vector<std::vector<double>> posteriors(t_len, std::vector<double>(b));
    std::vector<double> log_alpha(b);
    for (int s = 0; s < b; ++s)
        log_alpha[s] = hmm.log_initial()[s] +
                       emission_loglik(observations[0], hmm.states()[s], hmm.emission());

    for (int t = 0;; ++t) {
        const double norm = log_sum_exp(log_alpha);
        for (int s = 0; s < b; ++s) {
            log_alpha[s] -= norm;
            posteriors[t][s] = std::exp(log_alpha[s]);
        }
        if (t + 1 == t_len) break;
        std::vector<double> next(b, kNegInf);
        for (int s = 0; s < b; ++s) {
            std::vector<double> terms(b);
            for (int prev = 0; prev < b; ++prev)
                terms[prev] = log_alpha[prev] + hmm.log_transition()(prev, s);
            next[s] = log_sum_exp(terms) +
                      emission_loglik(observations[t + 1], hmm.states()[s], hmm.emission());
        }
        log_alpha = std::move(next);
    }
    return posteriors;
}

} // namespace tsclust
