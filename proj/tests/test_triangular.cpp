#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tsclust/rng.hpp"
#include "tsclust/triangular.hpp"

using namespace tsclust;
using tsclust::testing::make_similarity;
using tsclust::testing::uniform_similarity;

TEST_SUITE_BEGIN("triangular");

namespace {

ExpModelParams random_params(int n, Rng& rng) {
    ExpModelParams params(n);
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            params.set_pair(i, j, 0.8 + rng.uniform01(), 2.5 + 2.0 * rng.uniform01(),
                            0.2 + 0.6 * rng.uniform01());
    return params;
}

SimilarityMatrix random_similarity(int n, Rng& rng) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) m(i, j) = m(j, i) = rng.uniform01();
    return SimilarityMatrix::from_matrix(std::move(m));
}

// Params with unit rates so the edge posteriors equal the priors exactly.
ExpModelParams params_with_priors(int n, const std::vector<std::tuple<int, int, double>>& priors) {
    ExpModelParams params(n);
    for (const auto& [i, j, p] : priors) params.set_pair(i, j, 1.0, 1.0, p);
    return params;
}

} // namespace

TEST_CASE("triangle potential truth table") {
    CHECK(triangle_potential(true, true, false) == 0);
    CHECK(triangle_potential(true, false, true) == 0);
    CHECK(triangle_potential(false, true, true) == 0);
    CHECK(triangle_potential(true, true, true) == 1);
    CHECK(triangle_potential(false, false, false) == 1);
    CHECK(triangle_potential(true, false, false) == 1);
    CHECK(triangle_potential(false, true, false) == 1);
    CHECK(triangle_potential(false, false, true) == 1);
}

TEST_CASE("n = 2 score difference equals the pair log-odds") {
    ExpModelParams params(2);
    params.set_pair(0, 1, 1.3, 3.1, 0.6);
    const SimilarityMatrix s = uniform_similarity(2, 0.7);
    const double merged = log_posterior_unnorm(Partition::single_block(2), s, params);
    const double split = log_posterior_unnorm(Partition::singletons(2), s, params);
    const double expected = (std::log(1.3) - 1.3 * 0.7 + std::log(0.6)) -
                            (std::log(3.1) - 3.1 * 0.7 + std::log(0.4));
    CHECK(merged - split == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("edge_posterior fixtures") {
    // Degenerate prior.
    CHECK(edge_posterior(0.5, 2.0, 3.0, 1.0) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(edge_posterior(0.5, 2.0, 3.0, 0.0) == doctest::Approx(0.0).epsilon(1e-11));
    // Equal rates cancel the likelihood.
    CHECK(edge_posterior(0.37, 2.0, 2.0, 0.31) == doctest::Approx(0.31).epsilon(1e-12));
    // rate1 = 1, rate0 = 4, prior .5, s = 1: e^-1 / (e^-1 + 4 e^-4).
    const double direct = std::exp(-1.0) / (std::exp(-1.0) + 4.0 * std::exp(-4.0));
    CHECK(edge_posterior(1.0, 1.0, 4.0, 0.5) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(direct == doctest::Approx(0.834).epsilon(1e-3));
}

TEST_CASE("limitation example: independent MAP merges, exact MAP splits") {
    // Edge posteriors (0.51, 0.51, 0.10) via unit rates and matching priors.
    const ExpModelParams params =
        params_with_priors(3, {{0, 1, 0.51}, {0, 2, 0.51}, {1, 2, 0.10}});
    const SimilarityMatrix s = uniform_similarity(3, 0.5);

    CHECK(edge_posteriors(s, params).at(0, 1) == doctest::Approx(0.51).epsilon(1e-12));

    // Brute-force oracle: posterior products over the five partitions in
    // enumeration order.
    const std::vector<Partition> parts = all_partitions(3);
    std::vector<double> products;
    for (const Partition& p : parts) {
        double prod = 1.0;
        const double priors[3][3] = {{0, 0.51, 0.51}, {0, 0, 0.10}, {0, 0, 0}};
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                prod *= p.block_of(i) == p.block_of(j) ? priors[i][j] : 1.0 - priors[i][j];
        products.push_back(prod);
    }
    REQUIRE(products.size() == 5);
    CHECK(products[0] == doctest::Approx(0.026010).epsilon(1e-12));
    CHECK(products[1] == doctest::Approx(0.224910).epsilon(1e-12));
    CHECK(products[2] == doctest::Approx(0.224910).epsilon(1e-12));
    CHECK(products[3] == doctest::Approx(0.024010).epsilon(1e-12));
    CHECK(products[4] == doctest::Approx(0.216090).epsilon(1e-12));

    // The independent route merges everything through the two weak edges.
    CHECK(exp_predict(s, params).to_string() == "1,2,3");
    // The triangular MAP lands on the product-maximizing partitions; the
    // exact tie between "1,2|3" and "1,3|2" resolves by enumeration order.
    const MapResult map = exact_map(s, params);
    CHECK(map.partition.to_string() == "1,2|3");
    CHECK(map.n_evaluated == 5);
}

TEST_CASE("n = 2 exact MAP agrees with the independent prediction") {
    Rng rng(321);
    for (int trial = 0; trial < 40; ++trial) {
        const ExpModelParams params = random_params(2, rng);
        const SimilarityMatrix s = random_similarity(2, rng);
        CHECK(exact_map(s, params).partition == exp_predict(s, params));
    }
}

TEST_CASE("all priors zero give the all-singletons MAP") {
    ExpModelParams params(4);
    for (int j = 1; j < 4; ++j)
        for (int i = 0; i < j; ++i) params.set_pair(i, j, 1.0, 1.0, 0.0);
    CHECK(exact_map(uniform_similarity(4, 0.5), params).partition.to_string() == "1|2|3|4");
}

TEST_CASE("exact_map guards the enumeration limit") {
    const int n = kEnumerationGuard + 1;
    ExpModelParams params(n);
    CHECK_THROWS_AS(exact_map(uniform_similarity(n, 0.5), params), CapacityError);
}

TEST_CASE("exact_map score is never below a valid independent prediction") {
    Rng rng(555);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_below(3));  // 3..5
        const ExpModelParams params = random_params(n, rng);
        const SimilarityMatrix s = random_similarity(n, rng);
        const MapResult map = exact_map(s, params);
        const EdgeEnsemble proposal = independent_map(s, params);
        if (is_valid_clustering(proposal)) {
            const double score =
                log_posterior_unnorm(ensemble_to_partition(proposal), s, params);
            CHECK(map.log_score >= score - 1e-12);
        }
    }
}

TEST_CASE("exact_map is label-permutation invariant") {
    Rng rng(777);
    // Reverse the series order and check the MAP maps along.
    const int n = 4;
    const ExpModelParams params = random_params(n, rng);
    const SimilarityMatrix s = random_similarity(n, rng);
    auto flip = [n](int v) { return n - 1 - v; };
    ExpModelParams params_flipped(n);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            params_flipped.set_pair(flip(i), flip(j), params.rate1(i, j), params.rate0(i, j),
                                    params.prior1(i, j));
            m(flip(i), flip(j)) = m(flip(j), flip(i)) = s.at(i, j);
        }
    const SimilarityMatrix s_flipped = SimilarityMatrix::from_matrix(std::move(m));

    const Partition direct = exact_map(s, params).partition;
    const Partition flipped = exact_map(s_flipped, params_flipped).partition;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            CHECK((direct.block_of(i) == direct.block_of(j)) ==
                  (flipped.block_of(flip(i)) == flipped.block_of(flip(j))));
}

TEST_CASE("raising one prior never evicts that pair from the MAP block") {
    const SimilarityMatrix s = uniform_similarity(3, 0.5);
    bool together = false;
    for (double p = 0.05; p <= 0.95; p += 0.05) {
        const ExpModelParams params =
            params_with_priors(3, {{0, 1, p}, {0, 2, 0.3}, {1, 2, 0.3}});
        const Partition map = exact_map(s, params).partition;
        const bool now = map.block_of(0) == map.block_of(1);
        if (together) CHECK(now);
        together = now;
    }
    CHECK(together);
}

TEST_CASE("constrained search with nothing forbidden equals exact_map") {
    Rng rng(9001);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_below(4));  // 3..6
        const ExpModelParams params = random_params(n, rng);
        const SimilarityMatrix s = random_similarity(n, rng);
        const MapResult full = exact_map(s, params);
        const MapResult constrained = exact_map_constrained(edge_posteriors(s, params), {});
        CHECK(constrained.partition == full.partition);
        CHECK(constrained.n_evaluated == full.n_evaluated);
    }
}

TEST_CASE("all pairs forbidden leaves only singletons") {
    const int n = 5;
    EdgeProbabilities ep(n);  // all zero
    std::vector<std::pair<int, int>> forbidden;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) forbidden.emplace_back(i, j);
    const MapResult map = exact_map_constrained(ep, forbidden);
    CHECK(map.partition.to_string() == "1|2|3|4|5");
    CHECK(map.n_evaluated == 1);
}

TEST_CASE("forbidden pair with positive probability is a contract error") {
    EdgeProbabilities ep(3);
    ep.set(0, 1, 0.4);
    CHECK_THROWS_AS(exact_map_constrained(ep, {{0, 1}}), ContractError);
}

TEST_CASE("work budget raises a capacity error") {
    EdgeProbabilities ep(8);
    for (int j = 1; j < 8; ++j)
        for (int i = 0; i < j; ++i) ep.set(i, j, 0.6);
    CHECK_THROWS_AS(exact_map_constrained(ep, {}, 50), CapacityError);
}

TEST_CASE("uniform q > 1/2 maximizes within-block edges over clique partitions") {
    // Exhaustive over every graph on 5 vertices: the constrained MAP must
    // pick a clique partition with the maximum number of within-block edges
    // (monotonicity of q^a (1-q)^(A-a) in a).
    const double q = 0.75;
    const std::vector<Partition> parts = all_partitions(5);
    for (unsigned mask = 0; mask < (1u << 10); ++mask) {
        EdgeProbabilities ep(5);
        std::vector<std::pair<int, int>> forbidden;
        bool edge[5][5] = {};
        int bit = 0;
        for (int j = 1; j < 5; ++j)
            for (int i = 0; i < j; ++i) {
                if ((mask >> bit++) & 1) {
                    ep.set(i, j, q);
                    edge[i][j] = true;
                } else {
                    forbidden.emplace_back(i, j);
                }
            }
        const MapResult map = exact_map_constrained(ep, forbidden);

        auto in_block_edges = [&](const Partition& p) {
            int count = 0;
            for (int j = 1; j < 5; ++j)
                for (int i = 0; i < j; ++i)
                    if (p.block_of(i) == p.block_of(j)) {
                        if (!edge[i][j]) return -1;  // not a clique partition
                        ++count;
                    }
            return count;
        };
        int best = -1;
        for (const Partition& p : parts) best = std::max(best, in_block_edges(p));
        CHECK(in_block_edges(map.partition) == best);
    }
}

TEST_CASE("certain edges (p-hat = 1) route through the direct scorer") {
    // A pair with probability exactly 1 makes every partition separating it
    // score -inf; the search must still return the right argmax.
    Rng rng(2718);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 5;
        EdgeProbabilities ep(n);
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < j; ++i) ep.set(i, j, 0.1 + 0.8 * rng.uniform01());
        ep.set(1, 3, 1.0);
        const MapResult map = exact_map_constrained(ep, {});
        CHECK(map.partition.block_of(1) == map.partition.block_of(3));

        double best = -1e300;
        Partition best_p;
        for (const Partition& p : all_partitions(n)) {
            double score = 0.0;
            for (int j = 1; j < n; ++j)
                for (int i = 0; i < j; ++i)
                    score += p.block_of(i) == p.block_of(j) ? std::log(ep.at(i, j))
                                                            : std::log1p(-ep.at(i, j));
            if (score > best) {
                best = score;
                best_p = p;
            }
        }
        CHECK(map.partition == best_p);
        CHECK(map.log_score == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("mid-sequence exchangeable runs agree with the unpruned route") {
    // Runs that neither start at vertex 0 nor end at n-1, plus two separate
    // runs at once; the collapsed search must still find the global optimum.
    Rng rng(5150);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 7;
        EdgeProbabilities ep(n);
        const double to_run1 = 0.2 + 0.6 * rng.uniform01();
        const double to_run2 = 0.2 + 0.6 * rng.uniform01();
        const double in_run1 = 0.2 + 0.6 * rng.uniform01();
        const double in_run2 = 0.2 + 0.6 * rng.uniform01();
        const double across = 0.2 + 0.6 * rng.uniform01();
        // Vertices 1..3 form one exchangeable run, 5..6 another; 0 and 4 are
        // individual.
        auto klass = [](int v) { return v == 0 ? 0 : v <= 3 ? 1 : v == 4 ? 2 : 3; };
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < j; ++i) {
                const int a = klass(i), b = klass(j);
                double p;
                if (a == 1 && b == 1)
                    p = in_run1;
                else if (a == 3 && b == 3)
                    p = in_run2;
                else if (a == 1 || b == 1)
                    p = to_run1;
                else if (a == 3 || b == 3)
                    p = to_run2;
                else
                    p = across;
                ep.set(i, j, p);
            }
        const MapResult pruned = exact_map_constrained(ep, {});
        double best = -1e300;
        for (const Partition& p : all_partitions(n)) {
            double score = 0.0;
            for (int j = 1; j < n; ++j)
                for (int i = 0; i < j; ++i)
                    score += p.block_of(i) == p.block_of(j) ? std::log(ep.at(i, j))
                                                            : std::log1p(-ep.at(i, j));
            best = std::max(best, score);
        }
        CHECK(pruned.log_score == doctest::Approx(best).epsilon(1e-12));
        CHECK(pruned.n_evaluated < bell_number(7));
    }
}

TEST_CASE("exchangeable-run pruning agrees with the unpruned enumeration") {
    // Duplicated-row instances activate the non-decreasing-block rule; the
    // MAP score must match the full Bell enumeration route.
    Rng rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 5;
        // Vertices 2..4 share one profile against vertices 0..1.
        const double a = 0.2 + 0.6 * rng.uniform01();
        const double b = 0.2 + 0.6 * rng.uniform01();
        const double within = 0.2 + 0.6 * rng.uniform01();
        const double front = 0.2 + 0.6 * rng.uniform01();
        EdgeProbabilities ep(n);
        ep.set(0, 1, front);
        for (int v = 2; v < n; ++v) {
            ep.set(0, v, a);
            ep.set(1, v, b);
        }
        for (int v = 2; v < n; ++v)
            for (int w = v + 1; w < n; ++w) ep.set(v, w, within);

        const MapResult constrained = exact_map_constrained(ep, {});
        // Unpruned oracle over all partitions of 5.
        double best = -1e300;
        for (const Partition& p : all_partitions(n)) {
            double score = 0.0;
            for (int j = 1; j < n; ++j)
                for (int i = 0; i < j; ++i)
                    score += p.block_of(i) == p.block_of(j) ? std::log(ep.at(i, j))
                                                            : std::log1p(-ep.at(i, j));
            best = std::max(best, score);
        }
        CHECK(constrained.log_score == doctest::Approx(best).epsilon(1e-12));
        CHECK(constrained.n_evaluated < all_partitions(n).size());
    }
}

TEST_SUITE_END();
