#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "tsclust/core.hpp"
#include "tsclust/exp_model.hpp"
#include "tsclust/rng.hpp"
#include "tsclust/similarity.hpp"
#include "tsclust/triangular.hpp"

namespace tsclust {

struct ChainConfig {
    std::uint64_t steps = 100000;
    std::uint64_t burn_in = 10000;
    std::uint64_t thin = 10;
    std::uint64_t seed = 1;
    /// Probability of proposing fragmentation when both move types are
    /// available. A single-block state can only fragment; an all-singletons
    /// state can only coagulate.
    double frag_prob = 0.5;
    void validate() const;
};

enum class MoveKind { fragmentation, coagulation };

/// A concrete proposable move on a canonical partition. Fragmentation splits
/// block `block_a` according to `split_code` (bit j-1 sends the block's
/// (j+1)-th member to the new side; codes 1..2^(s-1)-1 enumerate the
/// non-trivial unordered bipartitions). Coagulation joins blocks block_a and
/// block_b (canonical indices, a < b).
struct Move {
    MoveKind kind = MoveKind::coagulation;
    int block_a = -1;
    int block_b = -1;
    std::uint64_t split_code = 0;
};

/// Every non-self move proposable from p, fragmentations first (blocks in
/// canonical order, codes ascending), then coagulations (pairs in
/// lexicographic order). Exposed so the detailed-balance bookkeeping can be
/// checked exhaustively.
std::vector<Move> enumerate_moves(const Partition& p);

/// log q(p -> apply_move(p, m)) under the mixture: fragmentation picks a
/// uniform block then a uniform non-trivial bipartition, coagulation a
/// uniform unordered block pair; an unavailable move type renormalizes the
/// other to probability 1.
double move_log_density(const Partition& p, const Move& m, double frag_prob);

struct AppliedMove {
    Partition next;
    Move reverse;  // the move on `next` that undoes m
};

AppliedMove apply_move(const Partition& p, const Move& m);

struct Proposal {
    Partition next;
    double log_ratio = 0.0;  // log q(next -> p) - log q(p -> next)
    bool self_move = false;  // size-1 fragmentation pick; always rejected
    Move move;
};

Proposal propose(const Partition& p, double frag_prob, Rng& rng);

/// One Metropolis-Hastings transition targeting log_posterior_unnorm.
/// Returns the next state and whether the proposal was accepted; self-moves
/// count as rejections.
std::pair<Partition, bool> mh_step(const Partition& p, const SimilarityMatrix& s,
                                   const ExpModelParams& params, const ChainConfig& cfg,
                                   Rng& rng);

struct ChainStats {
    std::uint64_t samples_kept = 0;
    double acceptance_rate = 0.0;
    Partition mode;
    double mode_frequency = 0.0;
    std::uint64_t visited_distinct = 0;  // distinct states over the whole run
    /// Highest-scoring state seen anywhere in the run; the alternate
    /// estimator behind the CLI's --estimator best-visited flag.
    Partition best_visited;
    double best_visited_score = 0.0;
};

struct ChainResult {
    ChainStats stats;
    MapResult map_estimate;  // the modal kept sample, per the contract
};

/// Runs the coagulation-fragmentation chain from the all-singletons state.
/// Deterministic given cfg.seed. Kept-sample mode ties resolve to the
/// restricted-growth-lexicographically smallest partition. When trace is
/// non-null, one diagnostic CSV row per step is written:
/// step,accepted,log_score,partition.
ChainResult run_chain(const SimilarityMatrix& s, const ExpModelParams& params,
                      const ChainConfig& cfg, std::ostream* trace = nullptr);

} // namespace tsclust
