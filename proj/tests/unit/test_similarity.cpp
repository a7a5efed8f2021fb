#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "litkg/analyze/novelty.hpp"
#include "litkg/analyze/similarity.hpp"
#include "litkg/error.hpp"
#include "support/generators.hpp"

using namespace litkg;
using namespace litkg::analyze;

namespace {

KnowledgeGraph typed(const std::vector<std::tuple<std::string, Category, std::string, Category>>& edges) {
    KnowledgeGraph g;
    int article = 0;
    for (const auto& [a, ca, b, cb] : edges) {
        g.add_node({a, a, ca, {}, {}});
        g.add_node({b, b, cb, {}, {}});
        g.merge_evidence(a, b, RelationKind::association, std::to_string(article++), 0.9);
    }
    return g;
}

constexpr auto G = Category::gene;
constexpr auto C = Category::chemical;
constexpr auto D = Category::disease;

} // namespace

TEST(HeteSim, HalfOverlap) {
    const auto g = typed({{"c", C, "g1", G}, {"c", C, "g2", G}, {"d", D, "g1", G}});
    EXPECT_NEAR(hetesim(g, {}, "d").at("c"), 1 / std::sqrt(2.0), 1e-12);
}

TEST(HeteSim, IdenticalGeneSets) {
    const auto g = typed({{"c", C, "g1", G}, {"c", C, "g2", G}, {"d", D, "g1", G}, {"d", D, "g2", G}});
    EXPECT_NEAR(hetesim(g, {}, "d").at("c"), 1.0, 1e-12);
}

TEST(HeteSim, NoGeneNeighborScoresZeroAndWrongTargetRejected) {
    const auto g = typed({{"c", C, "d", D}, {"d", D, "g1", G}});
    EXPECT_DOUBLE_EQ(hetesim(g, {}, "d").at("c"), 0.0);
    EXPECT_THROW(hetesim(g, {}, "c"), CategoryError);
    MetaPath bad;
    bad.categories = {C, D, G};
    EXPECT_THROW(hetesim(g, bad, "g1"), CategoryError);
}

TEST(HeteSimProperty, BoundedAndMirrorSymmetric) {
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = testgen::random_graph(rng, 40, 0.15);
        std::vector<std::string> diseases, chemicals;
        for (const auto& [id, n] : g.nodes()) {
            if (n.category == D) diseases.push_back(id);
            if (n.category == C) chemicals.push_back(id);
        }
        if (diseases.empty() || chemicals.empty()) continue;
        const MetaPath path;
        for (const auto& d : diseases) {
            const auto forward = hetesim(g, path, d);
            for (const auto& c : chemicals) {
                const double s = forward.at(c);
                EXPECT_GE(s, 0.0);
                EXPECT_LE(s, 1.0);
                EXPECT_NEAR(hetesim(g, path.mirrored(), c).at(d), s, 1e-12);
            }
        }
    }
}

TEST(EntitySimilarity, DisjointNeighborsZero) {
    const auto g = typed({{"D1", D, "g1", G}, {"D2", D, "g2", G}, {"D3", D, "g3", G}});
    const auto t = entity_similarity(g, D, "D1");
    ASSERT_EQ(t.rows.size(), 2u);
    for (const auto& r : t.rows) {
        EXPECT_DOUBLE_EQ(r.score, 0.0);
        EXPECT_NE(r.id, "D1");
    }
    EXPECT_NEAR(entity_similarity_between(g, D, "D1", "D1"), 1.0, 1e-12);
}

TEST(EntitySimilarity, RareGeneOutweighsUbiquitousGene) {
    // D1, D2 share rare gene R; D3, D4 share U, which D5 also carries.
    const auto g = typed({{"D1", D, "R", G},
                          {"D2", D, "R", G},
                          {"D1", D, "P1", G},
                          {"D2", D, "P2", G},
                          {"D3", D, "U", G},
                          {"D4", D, "U", G},
                          {"D5", D, "U", G},
                          {"D3", D, "P3", G},
                          {"D4", D, "P4", G}});
    const double idf_r = std::log(5.0 / 2), idf_u = std::log(5.0 / 3), idf_p = std::log(5.0);
    const double rare = idf_r * idf_r / (idf_r * idf_r + idf_p * idf_p);
    const double ubiquitous = idf_u * idf_u / (idf_u * idf_u + idf_p * idf_p);
    EXPECT_NEAR(entity_similarity_between(g, D, "D1", "D2"), rare, 1e-12);
    EXPECT_NEAR(entity_similarity_between(g, D, "D3", "D4"), ubiquitous, 1e-12);
    EXPECT_GT(rare, ubiquitous);
    EXPECT_EQ(entity_similarity(g, D, "D1").rows.front().id, "D2");
}

TEST(EntitySimilarity, AveragesGeneAndChemicalProfiles) {
    // Gene profiles identical (cosine 1); chemical profiles disjoint (cosine 0).
    const auto g = typed({{"D1", D, "g1", G},
                          {"D2", D, "g1", G},
                          {"D3", D, "g2", G},
                          {"D1", D, "c1", C},
                          {"D2", D, "c2", C},
                          {"D3", D, "c3", C}});
    EXPECT_NEAR(entity_similarity_between(g, D, "D1", "D2"), 0.5, 1e-12);
}

TEST(EntitySimilarity, TopQKeepsStrongestAssociations) {
    auto g = typed({{"D1", D, "g1", G}, {"D2", D, "g1", G}, {"D3", D, "g3", G}});
    g.add_node({"g2", "g2", G, {}, {}});
    g.merge_evidence("D1", "g2", RelationKind::association, "x1", 0.9);
    g.merge_evidence("D1", "g2", RelationKind::association, "x2", 0.9);
    g.add_node({"D4", "D4", D, {}, {}});
    g.merge_evidence("D4", "g2", RelationKind::association, "x3", 0.9);
    SimilarityOptions opts;
    opts.top_q = 1;  // D1 keeps only g2 (weight 0.75 > 0.5)
    EXPECT_NEAR(entity_similarity_between(g, D, "D1", "D2", opts), 0.0, 1e-12);
    EXPECT_GT(entity_similarity_between(g, D, "D1", "D2"), 0.0);
}

TEST(EntitySimilarity, CategoryChecks) {
    const auto g = typed({{"D1", D, "g1", G}, {"C1", C, "g1", G}});
    EXPECT_THROW(entity_similarity(g, G, "g1"), CategoryError);
    EXPECT_THROW(entity_similarity(g, D, "C1"), CategoryError);
    EXPECT_NO_THROW(entity_similarity(g, C, "C1"));
}

TEST(EntitySimilarityProperty, SymmetricWithUnitSelfSimilarity) {
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = testgen::random_graph(rng, 30, 0.2);
        for (Category cat : {D, C}) {
            std::vector<std::string> members;
            for (const auto& [id, n] : g.nodes()) {
                if (n.category == cat) members.push_back(id);
            }
            for (const auto& a : members) {
                for (const auto& b : members) {
                    const double ab = entity_similarity_between(g, cat, a, b);
                    EXPECT_NEAR(ab, entity_similarity_between(g, cat, b, a), 1e-12);
                    EXPECT_GE(ab, 0.0);
                    EXPECT_LE(ab, 1.0);
                }
                // Self-similarity is 1 whenever some feature carries a non-zero IDF weight.
                bool informative = false;
                for (const auto& nb : g.neighbors(a)) {
                    const auto fc = g.node(nb).category;
                    if (fc == G || fc == (cat == D ? C : D)) {
                        std::size_t df = 0;
                        for (const auto& m : members) df += g.has_edge(m, nb) ? 1 : 0;
                        informative = informative || df < members.size();
                    }
                }
                if (informative) EXPECT_NEAR(entity_similarity_between(g, cat, a, a), 1.0, 1e-12);
            }
        }
    }
}

TEST(NoveltyMerge, UnionAndGiantComponent) {
    auto kg = typed({{"g1", G, "c1", C}, {"g2", G, "c1", C}, {"g3", G, "g4", G}, {"g1", G, "d1", D}, {"g2", G, "g5", G}});
    validate::EdgeClassification a, b;
    a.green = {NodePair("g1", "c1")};
    a.red = {NodePair("g3", "g4"), NodePair("g1", "d1")};
    b.green = {NodePair("g2", "c1")};
    b.red = {NodePair("g1", "c1"), NodePair("g2", "g5")};
    const auto merged = novelty_merge(a, b, kg);
    EXPECT_EQ(merged.num_edges(), 3u);
    EXPECT_EQ(merged.num_nodes(), 4u);
    EXPECT_FALSE(merged.has_node("d1"));
    EXPECT_FALSE(merged.has_node("g3"));
}

TEST(NoveltyMerge, DisjointGreenSetsAdd) {
    auto kg = typed({{"g1", G, "c1", C}, {"g1", G, "c2", C}});
    validate::EdgeClassification a, b;
    a.green = {NodePair("c1", "g1")};
    b.green = {NodePair("c2", "g1")};
    EXPECT_EQ(novelty_merge(a, b, kg).num_edges(), 2u);
}
