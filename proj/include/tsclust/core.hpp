#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tsclust/error.hpp"

// Domain types shared by every module: panels, partitions in canonical
// form, edge ensembles, and timelines. Series and time indices are 0-based
// in code; all file formats are 1-based.

namespace tsclust {

/// Hard ceiling for exhaustive set-partition enumeration. Bell(13) ~ 27.6M;
/// larger instances must go through the MCMC sampler.
inline constexpr int kEnumerationGuard = 13;

/// Bell number B(n) via the Bell triangle. Guarded so the result fits in
/// 64 bits (n <= 25).
std::uint64_t bell_number(int n);

/// A clustering of {0..n-1} as disjoint non-empty blocks in canonical form:
/// indices ascend within each block, blocks are ordered by smallest member.
/// The external text form is 1-based: "1,2|3".
class Partition {
public:
    /// Empty placeholder (n = 0); every real Partition comes from a factory.
    Partition() = default;

    /// Validates and canonicalizes an arbitrary block list. Blocks must be
    /// disjoint, non-empty, and cover {0..n-1}.
    static Partition canonical(int n, std::vector<std::vector<int>> raw_blocks);

    /// Groups indices by label value (labels are arbitrary ints).
    static Partition from_labels(int n, const std::vector<int>& label_of);

    static Partition singletons(int n);
    static Partition single_block(int n);

    /// Parses the 1-based text form, e.g. "1,3|2". n is inferred from the
    /// member count; members must cover 1..n exactly.
    static Partition parse(const std::string& text);

    int n() const { return n_; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    int block_of(int i) const;

    /// Block label per index; canonical order makes this the partition's
    /// restricted growth string.
    const std::vector<int>& labels() const { return label_; }

    std::string to_string() const;

    bool operator==(const Partition& o) const { return n_ == o.n_ && label_ == o.label_; }
    bool operator!=(const Partition& o) const { return !(*this == o); }
    /// Restricted-growth-string lexicographic order; matches the order
    /// all_partitions enumerates in.
    bool operator<(const Partition& o) const;

private:
    void rebuild_blocks_from_labels();
    int n_ = 0;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> label_;
    friend class PartitionEnumerator;
};

/// Free-function spelling of Partition::canonical; idempotent on canonical
/// input.
Partition canonicalize(int n, std::vector<std::vector<int>> raw_blocks);

/// Streams every partition of {0..n-1} in restricted-growth-string
/// lexicographic order without materializing the full list.
class PartitionEnumerator {
public:
    explicit PartitionEnumerator(int n);
    /// Writes the next partition into out; returns false when exhausted.
    bool next(Partition& out);

private:
    int n_;
    bool first_ = true, done_ = false;
    std::vector<int> digits_, prefix_max_;
};

/// Exactly Bell(n) canonical partitions in deterministic order.
/// n above the enumeration guard raises CapacityError.
std::vector<Partition> all_partitions(int n);

/// Flat index of the unordered pair {i,j}, i != j, independent of n:
/// max*(max-1)/2 + min.
int pair_index(int i, int j);

/// Symmetric boolean co-membership indicators C over unordered pairs {i,j}.
/// Stored once per pair, so symmetry holds by construction.
class EdgeEnsemble {
public:
    explicit EdgeEnsemble(int n);
    int n() const { return n_; }
    bool edge(int i, int j) const;
    void set_edge(int i, int j, bool value);
    int pair_count() const { return static_cast<int>(e_.size()); }
    bool operator==(const EdgeEnsemble& o) const { return n_ == o.n_ && e_ == o.e_; }

private:
    void check_pair(int i, int j) const;
    int n_;
    std::vector<std::uint8_t> e_;
};

/// Edge {i,j} set iff i and j share a block.
EdgeEnsemble partition_to_ensemble(const Partition& p);

/// Connected components of the graph with c's edges, in canonical form.
/// Accepts any boolean assignment, not necessarily transitive.
Partition ensemble_to_partition(const EdgeEnsemble& c);

/// True iff every triple satisfies the transitivity implication
/// C_ij = C_jk = 1 => C_ik = 1; equivalently the graph is a disjoint union
/// of cliques.
bool is_valid_clustering(const EdgeEnsemble& c);

/// n time series of length m. Row index = time step, column index = series.
/// Entries must be finite.
class SeriesPanel {
public:
    /// values are row-major: step 0's n entries first.
    SeriesPanel(int n_series, int n_steps, const std::vector<double>& row_major_values);

    int n_series() const { return n_series_; }
    int n_steps() const { return n_steps_; }
    double at(int step, int series) const;  // both 0-based

    /// Trailing window of w observations of one series ending at end_step
    /// (0-based, inclusive). Oldest entry first.
    std::vector<double> window(int series, int end_step, int w) const;

private:
    int n_series_, n_steps_;
    std::vector<double> by_series_;  // column-major: series s occupies [s*m, (s+1)*m)
};

/// A sequence of (time index, Partition) with strictly increasing time and a
/// shared n.
class ClusterTimeline {
public:
    ClusterTimeline() = default;
    void append(int k, Partition p);
    const std::vector<std::pair<int, Partition>>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }
    int n() const { return steps_.empty() ? 0 : steps_.front().second.n(); }

private:
    std::vector<std::pair<int, Partition>> steps_;
};

} // namespace tsclust
