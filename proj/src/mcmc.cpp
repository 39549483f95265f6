#include "tsclust/mcmc.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

namespace tsclust {

void ChainConfig::validate() const {
    if (burn_in >= steps) throw ContractError("ChainConfig: burn_in must be < steps");
    if (thin < 1) throw ContractError("ChainConfig: thin must be >= 1");
    if (steps - burn_in < thin)
        throw ContractError("ChainConfig: no samples would be kept");
    if (frag_prob <= 0.0 || frag_prob >= 1.0)
        throw ContractError("ChainConfig: frag_prob must be in (0,1)");
}

namespace {

bool fragmentation_available(const Partition& p) {
    for (const auto& b : p.blocks())
        if (b.size() >= 2) return true;
    return false;
}

bool coagulation_available(const Partition& p) { return p.block_count() >= 2; }

// Mixture weight of each move type given availability at state p.
double frag_weight(const Partition& p, double frag_prob) {
    if (!coagulation_available(p)) return 1.0;
    if (!fragmentation_available(p)) return 0.0;
    return frag_prob;
}

double coag_weight(const Partition& p, double frag_prob) {
    if (!fragmentation_available(p)) return 1.0;
    if (!coagulation_available(p)) return 0.0;
    return 1.0 - frag_prob;
}

// log(2^(s-1) - 1), the number of non-trivial unordered bipartitions of a
// block of size s >= 2.
double log_bipartition_count(int s) {
    return (s - 1) * std::log(2.0) + std::log1p(-std::pow(2.0, -(s - 1)));
}

std::uint64_t bipartition_count(int s) {
    if (s - 1 >= 63) throw CapacityError("fragmentation: block too large for split codes");
    return (1ULL << (s - 1)) - 1;
}

} // namespace

std::vector<Move> enumerate_moves(const Partition& p) {
    std::vector<Move> moves;
    const int blocks = p.block_count();
    for (int a = 0; a < blocks; ++a) {
        const int size = static_cast<int>(p.blocks()[a].size());
        if (size < 2) continue;
        for (std::uint64_t code = 1; code <= bipartition_count(size); ++code)
            moves.push_back(Move{MoveKind::fragmentation, a, -1, code});
    }
    for (int a = 0; a < blocks; ++a)
        for (int b = a + 1; b < blocks; ++b)
            moves.push_back(Move{MoveKind::coagulation, a, b, 0});
    return moves;
}

double move_log_density(const Partition& p, const Move& m, double frag_prob) {
    const int blocks = p.block_count();
    if (m.kind == MoveKind::fragmentation) {
        if (m.block_a < 0 || m.block_a >= blocks)
            throw ContractError("move_log_density: bad block index");
        const int size = static_cast<int>(p.blocks()[m.block_a].size());
        if (size < 2 || m.split_code < 1 || m.split_code > bipartition_count(size))
            throw ContractError("move_log_density: bad split code");
        return std::log(frag_weight(p, frag_prob)) - std::log(static_cast<double>(blocks)) -
               log_bipartition_count(size);
    }
    if (m.block_a < 0 || m.block_b <= m.block_a || m.block_b >= blocks)
        throw ContractError("move_log_density: bad block pair");
    const double pairs = static_cast<double>(blocks) * (blocks - 1) / 2.0;
    return std::log(coag_weight(p, frag_prob)) - std::log(pairs);
}

AppliedMove apply_move(const Partition& p, const Move& m) {
    const int n = p.n();
    std::vector<std::vector<int>> blocks = p.blocks();
    AppliedMove out;
    if (m.kind == MoveKind::fragmentation) {
        const std::vector<int> target = blocks[m.block_a];
        const int size = static_cast<int>(target.size());
        if (size < 2 || m.split_code < 1 || m.split_code > bipartition_count(size))
            throw ContractError("apply_move: bad fragmentation");
        std::vector<int> side_a{target[0]}, side_b;
        for (int j = 1; j < size; ++j)
            ((m.split_code >> (j - 1)) & 1 ? side_b : side_a).push_back(target[j]);
        blocks.erase(blocks.begin() + m.block_a);
        blocks.push_back(side_a);
        blocks.push_back(side_b);
        out.next = Partition::canonical(n, std::move(blocks));
        const int idx_a = out.next.block_of(side_a.front());
        const int idx_b = out.next.block_of(side_b.front());
        out.reverse = Move{MoveKind::coagulation, std::min(idx_a, idx_b),
                           std::max(idx_a, idx_b), 0};
        return out;
    }
    if (m.block_a < 0 || m.block_b <= m.block_a || m.block_b >= p.block_count())
        throw ContractError("apply_move: bad coagulation");
    std::vector<int> merged = blocks[m.block_a];
    merged.insert(merged.end(), blocks[m.block_b].begin(), blocks[m.block_b].end());
    std::sort(merged.begin(), merged.end());
    // Canonical block order puts the lower-minimum block first, so the
    // merged block's minimum always came from block_a.
    std::uint64_t code = 0;
    for (std::size_t j = 1; j < merged.size(); ++j) {
        const bool from_b = p.block_of(merged[j]) == m.block_b;
        if (from_b) code |= (1ULL << (j - 1));
    }
    blocks.erase(blocks.begin() + m.block_b);
    blocks.erase(blocks.begin() + m.block_a);
    blocks.push_back(merged);
    out.next = Partition::canonical(n, std::move(blocks));
    out.reverse = Move{MoveKind::fragmentation, out.next.block_of(merged.front()), -1, code};
    return out;
}

Proposal propose(const Partition& p, double frag_prob, Rng& rng) {
    if (frag_prob <= 0.0 || frag_prob >= 1.0)
        throw ContractError("propose: frag_prob must be in (0,1)");
    const bool can_frag = fragmentation_available(p);
    const bool can_coag = coagulation_available(p);
    if (!can_frag && !can_coag)
        throw ContractError("propose: no moves available (n = 1)");

    bool fragment;
    if (!can_coag) {
        fragment = true;
    } else if (!can_frag) {
        fragment = false;
    } else {
        fragment = rng.uniform01() < frag_prob;
    }

    Proposal proposal;
    const int blocks = p.block_count();
    if (fragment) {
        const int a = static_cast<int>(rng.uniform_below(blocks));
        const int size = static_cast<int>(p.blocks()[a].size());
        if (size == 1) {
            // Singleton pick: a rejected self-move keeps the proposal
            // densities simple and the chain aperiodic.
            proposal.next = p;
            proposal.self_move = true;
            proposal.move = Move{MoveKind::fragmentation, a, -1, 0};
            return proposal;
        }
        const std::uint64_t code = 1 + rng.uniform_below(bipartition_count(size));
        proposal.move = Move{MoveKind::fragmentation, a, -1, code};
    } else {
        const std::uint64_t pairs =
            static_cast<std::uint64_t>(blocks) * (blocks - 1) / 2;
        std::uint64_t r = rng.uniform_below(pairs);
        int a = 0;
        while (r >= static_cast<std::uint64_t>(blocks - 1 - a)) {
            r -= blocks - 1 - a;
            ++a;
        }
        proposal.move = Move{MoveKind::coagulation, a, a + 1 + static_cast<int>(r), 0};
    }
    AppliedMove applied = apply_move(p, proposal.move);
    const double forward = move_log_density(p, proposal.move, frag_prob);
    const double reverse = move_log_density(applied.next, applied.reverse, frag_prob);
    proposal.next = std::move(applied.next);
    proposal.log_ratio = reverse - forward;
    return proposal;
}

std::pair<Partition, bool> mh_step(const Partition& p, const SimilarityMatrix& s,
                                   const ExpModelParams& params, const ChainConfig& cfg,
                                   Rng& rng) {
    const Proposal proposal = propose(p, cfg.frag_prob, rng);
    if (proposal.self_move) return {p, false};
    const double current = log_posterior_unnorm(p, s, params);
    const double candidate = log_posterior_unnorm(proposal.next, s, params);
    const double log_alpha = candidate - current + proposal.log_ratio;
    const double u = rng.uniform01();
    if (std::log(u) < log_alpha) return {proposal.next, true};
    return {p, false};
}

ChainResult run_chain(const SimilarityMatrix& s, const ExpModelParams& params,
                      const ChainConfig& cfg, std::ostream* trace) {
    cfg.validate();
    if (s.n() != params.n()) throw ContractError("run_chain: n mismatch");
    if (s.n() < 2) throw ContractError("run_chain: need at least 2 series");
    if (s.n() > 62) throw CapacityError("run_chain: n > 62 exceeds split-code width");

    Rng rng(cfg.seed);
    Partition state = Partition::singletons(s.n());
    double state_score = log_posterior_unnorm(state, s, params);

    std::map<Partition, std::uint64_t> kept_counts;
    std::set<Partition> visited{state};
    std::uint64_t accepted = 0, kept = 0;
    Partition best_visited = state;
    double best_score = state_score;
    if (trace) *trace << "step,accepted,log_score,partition\n";

    for (std::uint64_t t = 1; t <= cfg.steps; ++t) {
        const Proposal proposal = propose(state, cfg.frag_prob, rng);
        bool step_accepted = false;
        if (!proposal.self_move) {
            const double candidate_score = log_posterior_unnorm(proposal.next, s, params);
            const double log_alpha = candidate_score - state_score + proposal.log_ratio;
            const double u = rng.uniform01();
            if (std::log(u) < log_alpha) {
                state = proposal.next;
                state_score = candidate_score;
                ++accepted;
                step_accepted = true;
                visited.insert(state);
                if (state_score > best_score) {
                    best_score = state_score;
                    best_visited = state;
                }
            }
        }
        if (t > cfg.burn_in && (t - cfg.burn_in) % cfg.thin == 0) {
            ++kept_counts[state];
            ++kept;
        }
        if (trace) {
            char score_text[64];
            std::snprintf(score_text, sizeof score_text, "%.12g", state_score);
            *trace << t << ',' << (step_accepted ? 1 : 0) << ',' << score_text << ','
                   << state.to_string() << "\n";
        }
    }

    // Modal kept sample; map order makes ties deterministic (smallest
    // restricted-growth string wins).
    Partition mode;
    std::uint64_t mode_count = 0;
    for (const auto& [partition, count] : kept_counts) {
        if (count > mode_count) {
            mode = partition;
            mode_count = count;
        }
    }

    ChainResult result;
    result.stats.samples_kept = kept;
    result.stats.acceptance_rate = static_cast<double>(accepted) / cfg.steps;
    result.stats.mode = mode;
    result.stats.mode_frequency = static_cast<double>(mode_count) / kept;
    result.stats.visited_distinct = visited.size();
    result.stats.best_visited = best_visited;
    result.stats.best_visited_score = best_score;
    result.map_estimate.partition = mode;
    result.map_estimate.log_score = log_posterior_unnorm(mode, s, params);
    result.map_estimate.n_evaluated = kept;
    return result;
}

} // namespace tsclust
