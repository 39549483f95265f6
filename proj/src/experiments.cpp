#include "tsclust/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tsclust/rng.hpp"

namespace tsclust {

void SynthConfig::validate() const {
    if (n < 2) throw ContractError("SynthConfig: n must be >= 2");
    if (steps < 1) throw ContractError("SynthConfig: steps must be >= 1");
    if (!(noise_sd > 0.0)) throw ContractError("SynthConfig: noise_sd must be positive");
    if (regime_change_prob < 0.0 || regime_change_prob > 1.0)
        throw ContractError("SynthConfig: regime_change_prob must be in [0,1]");
}

SynthResult gen_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    const std::vector<Partition> partitions = all_partitions(cfg.n);
    Rng rng(cfg.seed);

    std::vector<double> values(static_cast<std::size_t>(cfg.steps) * cfg.n);
    ClusterTimeline truth;
    int regime = 0;
    for (int t = 0; t < cfg.steps; ++t) {
        const bool redraw =
            t == 0 || rng.uniform01() < cfg.regime_change_prob;
        if (redraw) regime = static_cast<int>(rng.uniform_below(partitions.size()));
        const Partition& p = partitions[regime];
        std::vector<double> factor(p.block_count());
        for (int b = 0; b < p.block_count(); ++b) factor[b] = rng.normal();
        for (int s = 0; s < cfg.n; ++s)
            values[static_cast<std::size_t>(t) * cfg.n + s] =
                factor[p.block_of(s)] + cfg.noise_sd * rng.normal();
        truth.append(t + 1, p);
    }
    return SynthResult{SeriesPanel(cfg.n, cfg.steps, values), std::move(truth)};
}

namespace {

double choose2(double x) { return x * (x - 1.0) / 2.0; }

} // namespace

double rand_index(const Partition& a, const Partition& b) {
    if (a.n() != b.n()) throw ContractError("rand_index: n mismatch");
    const int n = a.n();
    if (n < 2) return 1.0;
    int agree = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            const bool in_a = a.block_of(i) == a.block_of(j);
            const bool in_b = b.block_of(i) == b.block_of(j);
            if (in_a == in_b) ++agree;
        }
    return agree / choose2(n);
}

double adjusted_rand(const Partition& a, const Partition& b) {
    if (a.n() != b.n()) throw ContractError("adjusted_rand: n mismatch");
    const int n = a.n();
    if (n < 2) return 1.0;

    // Contingency table between the two partitions.
    std::map<std::pair<int, int>, int> cells;
    for (int i = 0; i < n; ++i) ++cells[{a.block_of(i), b.block_of(i)}];

    double sum_cells = 0.0;
    for (const auto& [cell, count] : cells) sum_cells += choose2(count);
    double sum_a = 0.0, sum_b = 0.0;
    for (const auto& block : a.blocks()) sum_a += choose2(static_cast<double>(block.size()));
    for (const auto& block : b.blocks()) sum_b += choose2(static_cast<double>(block.size()));

    const double expected = sum_a * sum_b / choose2(n);
    const double maximum = 0.5 * (sum_a + sum_b);
    if (maximum == expected) return 1.0;  // both trivial, hence equal
    return (sum_cells - expected) / (maximum - expected);
}

EvalReport evaluate_timeline(const ClusterTimeline& pred, const ClusterTimeline& truth) {
    std::map<int, const Partition*> truth_at;
    for (const auto& [k, p] : truth.steps()) truth_at[k] = &p;

    EvalReport report;
    double sum_exact = 0.0, sum_ri = 0.0, sum_ari = 0.0;
    for (const auto& [k, p] : pred.steps()) {
        const auto it = truth_at.find(k);
        if (it == truth_at.end()) continue;
        EvalRow row;
        row.k = k;
        row.exact = p == *it->second;
        row.ri = rand_index(p, *it->second);
        row.ari = adjusted_rand(p, *it->second);
        row.pred = p.to_string();
        row.truth = it->second->to_string();
        sum_exact += row.exact ? 1.0 : 0.0;
        sum_ri += row.ri;
        sum_ari += row.ari;
        report.rows.push_back(std::move(row));
    }
    if (report.rows.empty())
        throw ContractError("evaluate_timeline: timelines share no time steps");
    const double count = static_cast<double>(report.rows.size());
    report.per_step_exact_match = sum_exact / count;
    report.rand = sum_ri / count;
    report.adjusted = sum_ari / count;

    const auto& steps = pred.steps();
    if (steps.size() < 2) {
        report.stability = 1.0;
    } else {
        int unchanged = 0;
        for (std::size_t t = 1; t < steps.size(); ++t)
            if (steps[t].second == steps[t - 1].second) ++unchanged;
        report.stability = static_cast<double>(unchanged) / (steps.size() - 1);
    }
    return report;
}

double exact_match_excluding_post_change(const ClusterTimeline& pred,
                                         const ClusterTimeline& truth, int horizon) {
    if (horizon < 0) throw ContractError("exact_match_excluding_post_change: bad horizon");
    // Steps blocked out: [change, change + horizon) for each truth change.
    std::map<int, const Partition*> truth_at;
    std::vector<int> changes;
    const Partition* prev = nullptr;
    for (const auto& [k, p] : truth.steps()) {
        truth_at[k] = &p;
        if (prev && !(*prev == p)) changes.push_back(k);
        prev = &p;
    }
    auto excluded = [&](int k) {
        for (int c : changes)
            if (k >= c && k < c + horizon) return true;
        return false;
    };
    int considered = 0, matched = 0;
    for (const auto& [k, p] : pred.steps()) {
        const auto it = truth_at.find(k);
        if (it == truth_at.end() || excluded(k)) continue;
        ++considered;
        if (p == *it->second) ++matched;
    }
    if (considered == 0)
        throw ContractError("exact_match_excluding_post_change: no admissible steps");
    return static_cast<double>(matched) / considered;
}

std::vector<double> inverse_vol_weights(const SeriesPanel& panel, const Partition& p,
                                        int window) {
    if (p.n() != panel.n_series()) throw ContractError("inverse_vol_weights: n mismatch");
    if (window < 2) throw ContractError("inverse_vol_weights: window must be >= 2");
    if (panel.n_steps() < window)
        throw InsufficientHistoryError("inverse_vol_weights: panel shorter than window");

    const int first = panel.n_steps() - window;
    std::vector<double> block_weight(p.block_count());
    double total = 0.0;
    for (int b = 0; b < p.block_count(); ++b) {
        const auto& members = p.blocks()[b];
        std::vector<double> composite(window);
        for (int t = 0; t < window; ++t) {
            double sum = 0.0;
            for (int s : members) sum += panel.at(first + t, s);
            composite[t] = sum / members.size();
        }
        double mean = 0.0;
        for (double v : composite) mean += v;
        mean /= window;
        double var = 0.0;
        for (double v : composite) var += (v - mean) * (v - mean);
        var /= window - 1;
        const double sd = std::sqrt(var);
        if (!(sd > 0.0))
            throw DegenerateInputError("inverse_vol_weights: zero-variance composite");
        block_weight[b] = 1.0 / sd;
        total += block_weight[b];
    }
    std::vector<double> weights(p.n());
    for (int b = 0; b < p.block_count(); ++b) {
        const double per_member = block_weight[b] / total / p.blocks()[b].size();
        for (int s : p.blocks()[b]) weights[s] = per_member;
    }
    return weights;
}

} // namespace tsclust
