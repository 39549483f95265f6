#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tsclust/core.hpp"
#include "tsclust/triangular.hpp"

namespace tsclust {

/// Undirected simple graph; edges stored normalized (u < v), sorted, unique.
class SimpleGraph {
public:
    SimpleGraph() = default;  // empty graph placeholder
    static SimpleGraph create(int n_vertices, std::vector<std::pair<int, int>> edges);
    int n_vertices() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    bool has_edge(int u, int v) const;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::uint8_t> adjacency_;  // flat pair-indexed
};

/// Edge-list text format: one "u v" pair per line, 1-based, '#' starts a
/// comment. The vertex count is the largest index referenced.
SimpleGraph parse_edge_list(std::istream& in, const std::string& source_name);

/// The k-clique reduction instance: G' adds N fresh vertices connected to
/// everything (a clique on V_N plus the complete V x V_N bipartite layer),
/// and edge probabilities q > 1/2 on E', 0 elsewhere.
struct ReductionInstance {
    SimpleGraph graph_prime;
    EdgeProbabilities ep;
    int n_extra = 0;  // N
    double q = 0.0;
    SimpleGraph original;
    int k = 0;
};

/// N = max(2|E| + 2, 2|V|) + 1 + slack. Requires q in (1/2, 1) and
/// k <= |V|. The new vertices take indices |V| .. |V|+N-1.
ReductionInstance build_reduction(const SimpleGraph& g, int k, double q = 0.75, int slack = 0);

/// Exact maximum clique size by subset enumeration. |V| <= 16. The empty
/// graph on one or more vertices has clique number 1.
int max_clique_bruteforce(const SimpleGraph& g);

struct KCliqueOutcome {
    bool has_k_clique = false;
    int witness_component_size = 0;  // largest component of E* intersect E
    MapResult map;                   // over V'
};

/// MAP over the reduction instance via the constrained clique-partition
/// search (forbidden = non-edges of G'), then compare the largest component
/// of E* intersect E with k. Components of that intersection are cliques of
/// G, so component size is clique size.
KCliqueOutcome decide_kclique_via_map(const ReductionInstance& inst,
                                      std::uint64_t work_budget = 200000000ULL);

/// The two structural facts the reduction's correctness rests on, checked
/// on a computed MAP assignment: (1) all of V_N shares one block (its
/// restriction is a complete graph), (2) the original-graph vertices in
/// that block form a maximum clique of G.
struct StructureReport {
    bool vn_complete = false;
    bool attached_to_max_clique = false;
    int attached_clique_size = 0;
    int max_clique_size = 0;
    bool all_pass() const { return vn_complete && attached_to_max_clique; }
};

StructureReport map_structure_report(const ReductionInstance& inst,
                                     const Partition& map_partition);

} // namespace tsclust
