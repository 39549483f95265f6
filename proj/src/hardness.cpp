#include "tsclust/hardness.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <numeric>
#include <sstream>

namespace tsclust {

SimpleGraph SimpleGraph::create(int n_vertices, std::vector<std::pair<int, int>> edges) {
    if (n_vertices < 0) throw ContractError("SimpleGraph: negative vertex count");
    SimpleGraph g;
    g.n_ = n_vertices;
    for (auto& [u, v] : edges) {
        if (u == v) throw ContractError("SimpleGraph: self-loop");
        if (u < 0 || v < 0 || u >= n_vertices || v >= n_vertices)
            throw ContractError("SimpleGraph: vertex out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.edges_ = std::move(edges);
    g.adjacency_.assign(static_cast<std::size_t>(n_vertices) * (n_vertices - 1) / 2, 0);
    for (const auto& [u, v] : g.edges_) g.adjacency_[pair_index(u, v)] = 1;
    return g;
}

bool SimpleGraph::has_edge(int u, int v) const {
    if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_)
        throw ContractError("SimpleGraph::has_edge: bad pair");
    return adjacency_[pair_index(u, v)] != 0;
}

SimpleGraph parse_edge_list(std::istream& in, const std::string& source_name) {
    std::vector<std::pair<int, int>> edges;
    int max_vertex = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        int u, v;
        if (!(ls >> u)) continue;  // blank or comment-only line
        if (!(ls >> v))
            throw ContractError(source_name + ":" + std::to_string(line_no) +
                                ": expected 'u v' edge");
        std::string trailing;
        if (ls >> trailing)
            throw ContractError(source_name + ":" + std::to_string(line_no) +
                                ": trailing tokens after edge");
        if (u < 1 || v < 1)
            throw ContractError(source_name + ":" + std::to_string(line_no) +
                                ": vertices are 1-based");
        edges.emplace_back(u - 1, v - 1);
        max_vertex = std::max({max_vertex, u, v});
    }
    return SimpleGraph::create(max_vertex, std::move(edges));
}

ReductionInstance build_reduction(const SimpleGraph& g, int k, double q, int slack) {
    if (!(q > 0.5) || !(q < 1.0))
        throw ContractError("build_reduction: q must be in (1/2, 1)");
    if (k < 1 || k > g.n_vertices())
        throw ContractError("build_reduction: need 1 <= k <= |V|");
    if (slack < 0) throw ContractError("build_reduction: slack must be >= 0");

    const int n = g.n_vertices();
    const int extra = std::max(2 * g.edge_count() + 2, 2 * n) + 1 + slack;
    const int total = n + extra;

    std::vector<std::pair<int, int>> edges = g.edges();
    for (int v = 0; v < n; ++v)
        for (int w = n; w < total; ++w) edges.emplace_back(v, w);
    for (int w1 = n; w1 < total; ++w1)
        for (int w2 = w1 + 1; w2 < total; ++w2) edges.emplace_back(w1, w2);

    ReductionInstance inst;
    inst.graph_prime = SimpleGraph::create(total, std::move(edges));
    inst.ep = EdgeProbabilities(total);
    for (const auto& [u, v] : inst.graph_prime.edges()) inst.ep.set(u, v, q);
    inst.n_extra = extra;
    inst.q = q;
    inst.original = g;
    inst.k = k;
    return inst;
}

int max_clique_bruteforce(const SimpleGraph& g) {
    const int n = g.n_vertices();
    if (n > 16) throw CapacityError("max_clique_bruteforce: |V| > 16");
    if (n == 0) return 0;
    // Adjacency bitmasks; subset s is a clique iff every member's
    // neighborhood covers the other members.
    std::vector<std::uint32_t> neighbors(n, 0);
    for (const auto& [u, v] : g.edges()) {
        neighbors[u] |= 1u << v;
        neighbors[v] |= 1u << u;
    }
    int best = 1;
    for (std::uint32_t s = 1; s < (1u << n); ++s) {
        const int size = std::popcount(s);
        if (size <= best) continue;
        bool clique = true;
        for (int v = 0; v < n && clique; ++v)
            if (s & (1u << v))
                if ((s & ~(1u << v) & ~neighbors[v]) != 0) clique = false;
        if (clique) best = size;
    }
    return best;
}

KCliqueOutcome decide_kclique_via_map(const ReductionInstance& inst,
                                      std::uint64_t work_budget) {
    const int total = inst.graph_prime.n_vertices();
    std::vector<std::pair<int, int>> forbidden;
    for (int v = 1; v < total; ++v)
        for (int u = 0; u < v; ++u)
            if (!inst.graph_prime.has_edge(u, v)) forbidden.emplace_back(u, v);

    KCliqueOutcome outcome;
    outcome.map = exact_map_constrained(inst.ep, forbidden, work_budget);

    // Largest connected component of E* intersect E. Components here are
    // cliques of G (blocks are cliques of G' and their V-part lies in G).
    const int n = inst.original.n_vertices();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [u, v] : inst.original.edges())
        if (outcome.map.partition.block_of(u) == outcome.map.partition.block_of(v))
            parent[find(u)] = find(v);
    std::vector<int> component_size(n, 0);
    int largest = 0;
    for (int v = 0; v < n; ++v) largest = std::max(largest, ++component_size[find(v)]);

    outcome.witness_component_size = largest;
    outcome.has_k_clique = largest >= inst.k;
    return outcome;
}

StructureReport map_structure_report(const ReductionInstance& inst,
                                     const Partition& map_partition) {
    const int total = inst.graph_prime.n_vertices();
    if (map_partition.n() != total)
        throw ContractError("map_structure_report: partition does not match the instance");
    const int n = inst.original.n_vertices();

    StructureReport report;
    const int vn_block = map_partition.block_of(n);
    report.vn_complete = true;
    for (int w = n; w < total; ++w)
        if (map_partition.block_of(w) != vn_block) report.vn_complete = false;

    // Original vertices sharing a block with any V_N vertex.
    std::vector<int> attached;
    for (int v = 0; v < n; ++v) {
        bool with_vn = false;
        for (int w = n; w < total && !with_vn; ++w)
            if (map_partition.block_of(v) == map_partition.block_of(w)) with_vn = true;
        if (with_vn) attached.push_back(v);
    }
    bool is_clique = true;
    for (std::size_t a = 0; a < attached.size() && is_clique; ++a)
        for (std::size_t b = a + 1; b < attached.size() && is_clique; ++b)
            if (!inst.original.has_edge(attached[a], attached[b])) is_clique = false;

    report.attached_clique_size = static_cast<int>(attached.size());
    report.max_clique_size = max_clique_bruteforce(inst.original);
    report.attached_to_max_clique =
        is_clique && report.attached_clique_size == report.max_clique_size;
    return report;
}

} // namespace tsclust
