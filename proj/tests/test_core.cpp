#include <doctest.h>

#include <cmath>
#include <set>

#include "tsclust/core.hpp"

using namespace tsclust;

TEST_SUITE_BEGIN("core");

TEST_CASE("partition canonicalization") {
    const Partition p = canonicalize(3, {{2}, {1, 0}});
    CHECK(p.to_string() == "1,2|3");

    // idempotence
    const Partition again = canonicalize(3, p.blocks());
    CHECK(again == p);

    CHECK(canonicalize(4, {{1, 3}, {0, 2}}).to_string() == "1,3|2,4");

    CHECK_THROWS_AS(canonicalize(3, {{0, 1}, {1, 2}}), ContractError);
    CHECK_THROWS_AS(canonicalize(3, {{0, 1}}), ContractError);
    CHECK_THROWS_AS(canonicalize(3, {{0, 1}, {2}, {}}), ContractError);
}

TEST_CASE("partition text round trip") {
    for (const char* text : {"1,2,3", "1|2|3", "1,3|2", "1,2|3,4|5"}) {
        CHECK(Partition::parse(text).to_string() == text);
    }
    CHECK_THROWS_AS(Partition::parse("1,2|4"), ContractError);  // gap
    CHECK_THROWS_AS(Partition::parse("1,,2"), ContractError);
    CHECK_THROWS_AS(Partition::parse("0,1"), ContractError);
}

TEST_CASE("partition_to_ensemble basic cases") {
    const EdgeEnsemble all = partition_to_ensemble(Partition::single_block(3));
    CHECK(all.edge(0, 1));
    CHECK(all.edge(0, 2));
    CHECK(all.edge(1, 2));

    const EdgeEnsemble none = partition_to_ensemble(Partition::singletons(3));
    CHECK_FALSE(none.edge(0, 1));
    CHECK_FALSE(none.edge(0, 2));
    CHECK_FALSE(none.edge(1, 2));

    const EdgeEnsemble one = partition_to_ensemble(Partition::parse("1,2|3"));
    CHECK(one.edge(0, 1));
    CHECK_FALSE(one.edge(0, 2));
    CHECK_FALSE(one.edge(1, 2));
}

TEST_CASE("ensemble_to_partition merges non-transitive edges") {
    // The limitation example: edges {1,2} and {1,3} only still yield one
    // cluster {1,2,3}.
    EdgeEnsemble c(3);
    c.set_edge(0, 1, true);
    c.set_edge(0, 2, true);
    CHECK(ensemble_to_partition(c).to_string() == "1,2,3");

    const EdgeEnsemble empty(4);
    CHECK(ensemble_to_partition(empty).to_string() == "1|2|3|4");

    EdgeEnsemble single(3);
    single.set_edge(0, 1, true);
    CHECK(ensemble_to_partition(single).to_string() == "1,2|3");
}

TEST_CASE("is_valid_clustering") {
    EdgeEnsemble wedge(3);
    wedge.set_edge(0, 1, true);
    wedge.set_edge(1, 2, true);
    CHECK_FALSE(is_valid_clustering(wedge));

    for (const Partition& p : all_partitions(4))
        CHECK(is_valid_clustering(partition_to_ensemble(p)));

    EdgeEnsemble two_edges(4);
    two_edges.set_edge(0, 1, true);
    two_edges.set_edge(2, 3, true);
    CHECK(is_valid_clustering(two_edges));
}

TEST_CASE("all_partitions counts and guard") {
    CHECK(all_partitions(3).size() == 5);  // the five clustering states
    CHECK(all_partitions(1).size() == 1);
    CHECK(all_partitions(1).front().to_string() == "1");
    CHECK(all_partitions(4).size() == 15);
    CHECK_THROWS_AS(all_partitions(kEnumerationGuard + 1), CapacityError);
}

TEST_CASE("all_partitions order is deterministic and canonical") {
    const auto parts = all_partitions(3);
    REQUIRE(parts.size() == 5);
    CHECK(parts[0].to_string() == "1,2,3");
    CHECK(parts[1].to_string() == "1,2|3");
    CHECK(parts[2].to_string() == "1,3|2");
    CHECK(parts[3].to_string() == "1|2,3");
    CHECK(parts[4].to_string() == "1|2|3");
    for (std::size_t i = 1; i < parts.size(); ++i) CHECK(parts[i - 1] < parts[i]);
}

TEST_CASE("bell recurrence up to n = 10") {
    // B(n+1) = sum_k C(n,k) B(k), with counts taken from the enumerator.
    std::vector<std::uint64_t> counts;
    for (int n = 1; n <= 10; ++n) counts.push_back(all_partitions(n).size());

    std::vector<std::vector<std::uint64_t>> binom(11, std::vector<std::uint64_t>(11, 0));
    for (int n = 0; n <= 10; ++n) {
        binom[n][0] = 1;
        for (int k = 1; k <= n; ++k)
            binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0);
    }
    std::vector<std::uint64_t> bell{1};  // B(0)
    for (int n = 0; n <= 9; ++n) {
        std::uint64_t next = 0;
        for (int k = 0; k <= n; ++k) next += binom[n][k] * bell[k];
        bell.push_back(next);
        CHECK(counts[n] == next);  // counts[n] = |all_partitions(n+1)|
    }
    CHECK(bell_number(10) == bell[10]);
    CHECK(bell_number(13) == 27644437ULL);
}

TEST_CASE("ensemble round trip over all partitions, n <= 6") {
    for (int n = 1; n <= 6; ++n)
        for (const Partition& p : all_partitions(n))
            CHECK(ensemble_to_partition(partition_to_ensemble(p)) == p);
}

TEST_CASE("validity iff fixed point, exhaustive n <= 4") {
    // is_valid_clustering(c) holds exactly when c maps back to itself
    // through the partition view; checked over every ensemble.
    for (int n = 2; n <= 4; ++n) {
        const int pairs = n * (n - 1) / 2;
        for (unsigned mask = 0; mask < (1u << pairs); ++mask) {
            EdgeEnsemble c(n);
            int bit = 0;
            for (int j = 1; j < n; ++j)
                for (int i = 0; i < j; ++i) c.set_edge(i, j, (mask >> bit++) & 1);
            const bool fixed_point = partition_to_ensemble(ensemble_to_partition(c)) == c;
            CHECK(is_valid_clustering(c) == fixed_point);
        }
    }
}

TEST_CASE("series panel invariants") {
    CHECK_THROWS_AS(SeriesPanel(1, 3, std::vector<double>(3, 0.0)), ContractError);
    CHECK_THROWS_AS(SeriesPanel(2, 0, {}), ContractError);
    CHECK_THROWS_AS(SeriesPanel(2, 1, std::vector<double>{1.0, std::nan("")}), ContractError);

    const SeriesPanel panel(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(panel.at(0, 0) == 1);
    CHECK(panel.at(0, 1) == 2);
    CHECK(panel.at(2, 0) == 5);
    CHECK(panel.window(0, 2, 2) == std::vector<double>{3, 5});
    CHECK_THROWS_AS(panel.window(0, 0, 2), InsufficientHistoryError);
}

TEST_CASE("cluster timeline ordering") {
    ClusterTimeline t;
    t.append(3, Partition::singletons(3));
    t.append(4, Partition::single_block(3));
    CHECK(t.size() == 2);
    CHECK(t.n() == 3);
    CHECK_THROWS_AS(t.append(4, Partition::singletons(3)), ContractError);
    CHECK_THROWS_AS(t.append(9, Partition::singletons(4)), ContractError);
}

TEST_SUITE_END();
