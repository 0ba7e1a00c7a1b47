#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "meetsense/community.hpp"

using namespace meetsense;
namespace mc = meetsense::community;

namespace {

// Test-side modularity, written straight from the formula, independent of
// the library path it checks.
double oracle_modularity(const mc::SimilarityGraph& g, const std::vector<int>& assign) {
    const std::size_t n = g.size();
    double two_w = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) two_w += g.weight(i, j);
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double di = 0.0;
        for (std::size_t k = 0; k < n; ++k) di += g.weight(i, k);
        for (std::size_t j = 0; j < n; ++j) {
            if (assign[i] != assign[j]) continue;
            double dj = 0.0;
            for (std::size_t k = 0; k < n; ++k) dj += g.weight(j, k);
            q += g.weight(i, j) - di * dj / two_w;
        }
    }
    return q / two_w;
}

// Enumerate all partitions of n elements (restricted growth strings) and
// return the best achievable modularity.
double exhaustive_best_modularity(const mc::SimilarityGraph& g) {
    const std::size_t n = g.size();
    std::vector<int> assign(n, 0);
    double best = -1.0;
    std::function<void(std::size_t, int)> walk = [&](std::size_t i, int max_used) {
        if (i == n) {
            best = std::max(best, oracle_modularity(g, assign));
            return;
        }
        for (int c = 0; c <= max_used + 1 && c < static_cast<int>(n); ++c) {
            assign[i] = c;
            walk(i + 1, std::max(max_used, c));
        }
    };
    walk(0, -1);
    return best;
}

mc::SimilarityGraph two_cliques(std::size_t m, double w_intra, double w_inter) {
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < 2 * m; ++i) nodes.push_back("n" + std::to_string(i));
    mc::SimilarityGraph g(nodes);
    for (std::size_t i = 0; i < 2 * m; ++i) {
        for (std::size_t j = i + 1; j < 2 * m; ++j) {
            const bool same = (i < m) == (j < m);
            g.set_weight(i, j, same ? w_intra : w_inter);
        }
    }
    return g;
}

mc::SimilarityGraph uniform_complete(std::size_t n, double w) {
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));
    mc::SimilarityGraph g(nodes);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.set_weight(i, j, w);
    return g;
}

}  // namespace

TEST_CASE("graph clamps negative weights and rejects self-loops") {
    mc::SimilarityGraph g({"a", "b"});
    g.set_weight(0, 1, -0.4);
    CHECK(g.weight(0, 1) == 0.0);
    CHECK_THROWS_AS(g.set_weight(0, 0, 1.0), ParameterError);
}

TEST_CASE("modularity of all-in-one is zero for any uniform complete graph") {
    for (std::size_t n : {3u, 5u, 8u}) {
        const auto g = uniform_complete(n, 0.7);
        const std::vector<int> one(n, 0);
        CHECK(mc::modularity(g, one) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("two disconnected cliques: correct split scores 0.5") {
    const auto g = two_cliques(3, 1.0, 0.0);
    std::vector<int> split = {0, 0, 0, 1, 1, 1};
    CHECK(mc::modularity(g, split) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(oracle_modularity(g, split) == doctest::Approx(0.5).epsilon(1e-12));
    std::vector<int> lump(6, 0);
    CHECK(mc::modularity(g, lump) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("modularity rejects zero-weight graphs and bad assignments") {
    const auto g = uniform_complete(4, 0.0);
    CHECK_THROWS_AS(mc::modularity(g, std::vector<int>(4, 0)), DegenerateGraphError);
    const auto g2 = uniform_complete(4, 1.0);
    CHECK_THROWS_AS(mc::modularity(g2, std::vector<int>(3, 0)), ParameterError);
}

TEST_CASE("walktrap recovers two disconnected cliques at modularity 0.5") {
    const auto g = two_cliques(3, 1.0, 0.0);
    const auto part = mc::detect_communities(g);
    CHECK(part.community_count() == 2);
    CHECK(part.modularity == doctest::Approx(0.5).epsilon(1e-9));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(part.assignment[i] == part.assignment[0]);
        CHECK(part.assignment[i + 3] == part.assignment[3]);
    }
    CHECK(part.assignment[0] != part.assignment[3]);
}

TEST_CASE("fully connected uniform graph is a single community at modularity 0") {
    for (auto algo : {mc::Algorithm::walktrap, mc::Algorithm::louvain}) {
        const auto g = uniform_complete(6, 0.8);
        const auto part = mc::detect_communities(g, algo);
        CHECK(part.community_count() == 1);
        CHECK(part.modularity == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("planted 2-block graph is recovered by both algorithms") {
    const auto g = two_cliques(3, 0.9, 0.1);
    for (auto algo : {mc::Algorithm::walktrap, mc::Algorithm::louvain}) {
        const auto part = mc::detect_communities(g, algo);
        CHECK(part.community_count() == 2);
        CHECK(part.assignment[0] == part.assignment[1]);
        CHECK(part.assignment[0] == part.assignment[2]);
        CHECK(part.assignment[3] == part.assignment[4]);
        CHECK(part.assignment[3] == part.assignment[5]);
    }
}

TEST_CASE("degenerate all-zero graph: every node its own community") {
    const auto g = uniform_complete(5, 0.0);
    const auto part = mc::detect_communities(g);
    CHECK(part.community_count() == 5);
    CHECK(part.modularity == 0.0);
}

TEST_CASE("detect_communities requires at least two nodes") {
    mc::SimilarityGraph g({"a"});
    CHECK_THROWS_AS(mc::detect_communities(g), ParameterError);
}

TEST_CASE("detected modularity is never below the all-in-one partition") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 4 + trial % 4;
        auto g = uniform_complete(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) g.set_weight(i, j, u(rng));
        const auto part = mc::detect_communities(g);
        const double all_in_one = mc::modularity(g, std::vector<int>(n, 0));
        CHECK(part.modularity >= all_in_one - 1e-12);
        CHECK(part.modularity == doctest::Approx(mc::modularity(g, part.assignment)));
    }
}

TEST_CASE("uniform weight scaling changes neither partition nor modularity") {
    const auto g = two_cliques(3, 0.8, 0.15);
    auto scaled = two_cliques(3, 0.8 * 1000.0, 0.15 * 1000.0);
    const auto p1 = mc::detect_communities(g);
    const auto p2 = mc::detect_communities(scaled);
    CHECK(p1.assignment == p2.assignment);
    CHECK(std::fabs(p1.modularity - p2.modularity) <= 1e-9);
}

TEST_CASE("walktrap stays within 0.02 of the exhaustive optimum (n <= 8)") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);

    // structured corpus: planted blocks with noise, cliques, near-uniform
    std::vector<mc::SimilarityGraph> corpus;
    for (int t = 0; t < 6; ++t) {
        auto g = two_cliques(3, 0.85, 0.15);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = i + 1; j < 6; ++j)
                g.set_weight(i, j, std::max(0.0, g.weight(i, j) + jitter(rng)));
        corpus.push_back(g);
    }
    corpus.push_back(two_cliques(4, 1.0, 0.0));
    corpus.push_back(uniform_complete(7, 0.5));
    {
        // three planted blocks of sizes 3/3/2
        std::vector<std::string> nodes;
        for (int i = 0; i < 8; ++i) nodes.push_back("n" + std::to_string(i));
        mc::SimilarityGraph g(nodes);
        auto block = [](std::size_t i) { return i < 3 ? 0 : (i < 6 ? 1 : 2); };
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = i + 1; j < 8; ++j)
                g.set_weight(i, j, block(i) == block(j) ? 0.9 : 0.1);
        corpus.push_back(g);
    }

    for (const auto& g : corpus) {
        const auto part = mc::detect_communities(g);
        const double best = exhaustive_best_modularity(g);
        CHECK(part.modularity >= best - 0.02);
    }
}

TEST_CASE("node relabeling permutes the assignment consistently") {
    const auto g = two_cliques(3, 0.9, 0.05);
    const auto base = mc::detect_communities(g);

    // same topology with node order reversed
    std::vector<std::string> nodes;
    for (int i = 5; i >= 0; --i) nodes.push_back("n" + std::to_string(i));
    mc::SimilarityGraph relabeled(nodes);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) {
            relabeled.set_weight(i, j, g.weight(5 - i, 5 - j));
        }
    }
    const auto perm = mc::detect_communities(relabeled);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            const bool same_base = base.assignment[i] == base.assignment[j];
            const bool same_perm = perm.assignment[5 - i] == perm.assignment[5 - j];
            CHECK(same_base == same_perm);
        }
    }
    CHECK(perm.modularity == doctest::Approx(base.modularity));
}

TEST_CASE("louvain matches walktrap on clean structure") {
    const auto g = two_cliques(4, 0.95, 0.05);
    const auto w = mc::detect_communities(g, mc::Algorithm::walktrap);
    const auto l = mc::detect_communities(g, mc::Algorithm::louvain);
    CHECK(w.community_count() == 2);
    CHECK(l.community_count() == 2);
    CHECK(w.modularity == doctest::Approx(l.modularity).epsilon(1e-6));
}
