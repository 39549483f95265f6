#include "tsclust/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace tsclust {

std::uint64_t bell_number(int n) {
    if (n < 0) throw ContractError("bell_number: n must be >= 0");
    if (n > 25) throw CapacityError("bell_number: overflows 64 bits beyond n = 25");
    // Bell triangle (Aitken's array); row r starts with the previous row's
    // last entry.
    std::vector<std::uint64_t> row{1};
    for (int r = 1; r <= n; ++r) {
        std::vector<std::uint64_t> next;
        next.reserve(r + 1);
        next.push_back(row.back());
        for (std::uint64_t v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

void Partition::rebuild_blocks_from_labels() {
    int max_label = -1;
    for (int l : label_) max_label = std::max(max_label, l);
    blocks_.assign(max_label + 1, {});
    for (int i = 0; i < n_; ++i) blocks_[label_[i]].push_back(i);
}

Partition Partition::canonical(int n, std::vector<std::vector<int>> raw_blocks) {
    if (n < 1) throw ContractError("Partition: n must be >= 1");
    std::vector<int> seen(n, 0);
    for (auto& b : raw_blocks) {
        if (b.empty()) throw ContractError("Partition: empty block");
        for (int i : b) {
            if (i < 0 || i >= n) throw ContractError("Partition: index out of range");
            if (seen[i]++) throw ContractError("Partition: overlapping blocks");
        }
        std::sort(b.begin(), b.end());
    }
    for (int i = 0; i < n; ++i)
        if (!seen[i]) throw ContractError("Partition: blocks do not cover all indices");
    std::sort(raw_blocks.begin(), raw_blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    Partition p;
    p.n_ = n;
    p.blocks_ = std::move(raw_blocks);
    p.label_.assign(n, 0);
    for (std::size_t b = 0; b < p.blocks_.size(); ++b)
        for (int i : p.blocks_[b]) p.label_[i] = static_cast<int>(b);
    return p;
}

Partition Partition::from_labels(int n, const std::vector<int>& label_of) {
    if (static_cast<int>(label_of.size()) != n)
        throw ContractError("Partition::from_labels: label vector size mismatch");
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[label_of[i]].push_back(i);
    std::vector<std::vector<int>> blocks;
    blocks.reserve(groups.size());
    for (auto& [label, members] : groups) blocks.push_back(std::move(members));
    return canonical(n, std::move(blocks));
}

Partition Partition::singletons(int n) {
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return from_labels(n, labels);
}

Partition Partition::single_block(int n) {
    return from_labels(n, std::vector<int>(n, 0));
}

Partition Partition::parse(const std::string& text) {
    std::vector<std::vector<int>> blocks;
    std::vector<int> current;
    std::string token;
    auto flush_token = [&]() {
        if (token.empty()) throw ContractError("Partition::parse: empty member in '" + text + "'");
        std::size_t pos = 0;
        int v;
        try {
            v = std::stoi(token, &pos);
        } catch (const std::exception&) {
            throw ContractError("Partition::parse: bad member '" + token + "'");
        }
        if (pos != token.size() || v < 1)
            throw ContractError("Partition::parse: bad member '" + token + "'");
        current.push_back(v - 1);
        token.clear();
    };
    for (char ch : text) {
        if (ch == ',') {
            flush_token();
        } else if (ch == '|') {
            flush_token();
            blocks.push_back(std::move(current));
            current.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            token += ch;
        }
    }
    flush_token();
    blocks.push_back(std::move(current));
    int n = 0;
    for (const auto& b : blocks) n += static_cast<int>(b.size());
    return canonical(n, std::move(blocks));
}

int Partition::block_of(int i) const {
    if (i < 0 || i >= n_) throw ContractError("Partition::block_of: index out of range");
    return label_[i];
}

std::string Partition::to_string() const {
    std::ostringstream out;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (b) out << '|';
        for (std::size_t j = 0; j < blocks_[b].size(); ++j) {
            if (j) out << ',';
            out << blocks_[b][j] + 1;
        }
    }
    return out.str();
}

bool Partition::operator<(const Partition& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return label_ < o.label_;
}

Partition canonicalize(int n, std::vector<std::vector<int>> raw_blocks) {
    return Partition::canonical(n, std::move(raw_blocks));
}

// ---------------------------------------------------------------------------
// Enumeration: restricted growth strings in lexicographic order
// ---------------------------------------------------------------------------

PartitionEnumerator::PartitionEnumerator(int n) : n_(n) {
    if (n < 1) throw ContractError("PartitionEnumerator: n must be >= 1");
    if (n > kEnumerationGuard)
        throw CapacityError("partition enumeration limited to n <= " +
                            std::to_string(kEnumerationGuard) + "; use MCMC for larger n");
    digits_.assign(n, 0);
    prefix_max_.assign(n, 0);
}

bool PartitionEnumerator::next(Partition& out) {
    if (done_) return false;
    if (!first_) {
        // Advance to the next restricted growth string: rightmost digit that
        // can still grow, i.e. digits_[i] <= prefix_max_[i-1].
        int i = n_ - 1;
        while (i >= 1 && digits_[i] > prefix_max_[i - 1]) --i;
        if (i < 1) {
            done_ = true;
            return false;
        }
        ++digits_[i];
        prefix_max_[i] = std::max(prefix_max_[i - 1], digits_[i]);
        for (int j = i + 1; j < n_; ++j) {
            digits_[j] = 0;
            prefix_max_[j] = prefix_max_[j - 1];
        }
    }
    first_ = false;
    out.n_ = n_;
    out.label_ = digits_;
    out.rebuild_blocks_from_labels();
    return true;
}

std::vector<Partition> all_partitions(int n) {
    PartitionEnumerator en(n);
    std::vector<Partition> out;
    out.reserve(static_cast<std::size_t>(bell_number(std::min(n, 13))));
    Partition p;
    while (en.next(p)) out.push_back(p);
    return out;
}

// ---------------------------------------------------------------------------
// EdgeEnsemble
// ---------------------------------------------------------------------------

int pair_index(int i, int j) {
    const int lo = std::min(i, j), hi = std::max(i, j);
    return hi * (hi - 1) / 2 + lo;
}

EdgeEnsemble::EdgeEnsemble(int n) : n_(n) {
    if (n < 1) throw ContractError("EdgeEnsemble: n must be >= 1");
    e_.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0);
}

void EdgeEnsemble::check_pair(int i, int j) const {
    if (i == j) throw ContractError("EdgeEnsemble: no self pairs");
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw ContractError("EdgeEnsemble: index out of range");
}

bool EdgeEnsemble::edge(int i, int j) const {
    check_pair(i, j);
    return e_[pair_index(i, j)] != 0;
}

void EdgeEnsemble::set_edge(int i, int j, bool value) {
    check_pair(i, j);
    e_[pair_index(i, j)] = value ? 1 : 0;
}

EdgeEnsemble partition_to_ensemble(const Partition& p) {
    EdgeEnsemble c(p.n());
    for (const auto& block : p.blocks())
        for (std::size_t a = 0; a < block.size(); ++a)
            for (std::size_t b = a + 1; b < block.size(); ++b)
                c.set_edge(block[a], block[b], true);
    return c;
}

Partition ensemble_to_partition(const EdgeEnsemble& c) {
    const int n = c.n();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            if (c.edge(i, j)) parent[find(i)] = find(j);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = find(i);
    return Partition::from_labels(n, labels);
}

bool is_valid_clustering(const EdgeEnsemble& c) {
    const int n = c.n();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const int set_count = (c.edge(i, j) ? 1 : 0) + (c.edge(i, k) ? 1 : 0) +
                                      (c.edge(j, k) ? 1 : 0);
                if (set_count == 2) return false;
            }
    return true;
}

// ---------------------------------------------------------------------------
// SeriesPanel
// ---------------------------------------------------------------------------

SeriesPanel::SeriesPanel(int n_series, int n_steps, const std::vector<double>& row_major_values)
    : n_series_(n_series), n_steps_(n_steps) {
    if (n_series < 2) throw ContractError("SeriesPanel: need at least 2 series");
    if (n_steps < 1) throw ContractError("SeriesPanel: need at least 1 step");
    if (row_major_values.size() != static_cast<std::size_t>(n_series) * n_steps)
        throw ContractError("SeriesPanel: value count mismatch");
    by_series_.resize(row_major_values.size());
    for (int t = 0; t < n_steps; ++t)
        for (int s = 0; s < n_series; ++s) {
            const double v = row_major_values[static_cast<std::size_t>(t) * n_series + s];
            if (!std::isfinite(v)) throw ContractError("SeriesPanel: non-finite entry");
            by_series_[static_cast<std::size_t>(s) * n_steps + t] = v;
        }
}

double SeriesPanel::at(int step, int series) const {
    if (step < 0 || step >= n_steps_ || series < 0 || series >= n_series_)
        throw ContractError("SeriesPanel::at: index out of range");
    return by_series_[static_cast<std::size_t>(series) * n_steps_ + step];
}

std::vector<double> SeriesPanel::window(int series, int end_step, int w) const {
    if (w < 1 || end_step < w - 1 || end_step >= n_steps_)
        throw InsufficientHistoryError("SeriesPanel::window: not enough history");
    if (series < 0 || series >= n_series_)
        throw ContractError("SeriesPanel::window: series out of range");
    const double* base = by_series_.data() + static_cast<std::size_t>(series) * n_steps_;
    return std::vector<double>(base + end_step - w + 1, base + end_step + 1);
}

// ---------------------------------------------------------------------------
// ClusterTimeline
// ---------------------------------------------------------------------------

void ClusterTimeline::append(int k, Partition p) {
    if (!steps_.empty()) {
        if (k <= steps_.back().first)
            throw ContractError("ClusterTimeline: time indices must strictly increase");
        if (p.n() != steps_.back().second.n())
            throw ContractError("ClusterTimeline: inconsistent n");
    }
    steps_.emplace_back(k, std::move(p));
}

} // namespace tsclust
