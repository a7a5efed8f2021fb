#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "litkg/error.hpp"
#include "litkg/kg_json.hpp"
#include "litkg/model.hpp"
#include "support/generators.hpp"

using namespace litkg;

namespace {

KnowledgeGraph two_nodes() {
    KnowledgeGraph g;
    g.add_node({"MESH:D000474", "Alkaptonuria", Category::disease, {"AKU"}, {}});
    g.add_node({"GENE:3081", "HGD", Category::gene, {}, {}});
    return g;
}

} // namespace

TEST(EdgeWeight, MatchesFormula) {
    EXPECT_EQ(edge_weight(1), 0.5);
    EXPECT_EQ(edge_weight(2), 0.75);
    EXPECT_EQ(edge_weight(10), 0.9990234375);
}

TEST(EdgeWeight, RejectsNonPositiveCounts) {
    EXPECT_THROW(edge_weight(0), InvalidEvidenceError);
    EXPECT_THROW(edge_weight(-3), InvalidEvidenceError);
}

TEST(EdgeWeight, StrictlyIncreasingAndBounded) {
    // Doubles resolve 1 - 2^-n up to n = 53.
    for (long long n = 1; n < 53; ++n) {
        EXPECT_GT(edge_weight(n + 1), edge_weight(n)) << n;
        EXPECT_GE(edge_weight(n), 0.5);
        EXPECT_LT(edge_weight(n), 1.0);
    }
}

TEST(MergeEvidence, FreshEdge) {
    auto g = two_nodes();
    const auto& e = g.merge_evidence("MESH:D000474", "GENE:3081", RelationKind::association, "111", 0.9);
    EXPECT_EQ(e.weight, 0.5);
    EXPECT_EQ(e.kinds.size(), 1u);
    EXPECT_EQ(e.kind_label(), "association");
}

TEST(MergeEvidence, SameArticleIsIdempotent) {
    auto g = two_nodes();
    g.merge_evidence("MESH:D000474", "GENE:3081", RelationKind::association, "111", 0.9);
    const auto& e = g.merge_evidence("GENE:3081", "MESH:D000474", RelationKind::association, "111", 0.9);
    EXPECT_EQ(e.support(), 1u);
    EXPECT_EQ(e.weight, 0.5);
    EXPECT_EQ(g.num_edges(), 1u);
}

TEST(MergeEvidence, SecondArticleOtherKindIsMultitype) {
    auto g = two_nodes();
    g.merge_evidence("MESH:D000474", "GENE:3081", RelationKind::association, "111", 0.9);
    const auto& e = g.merge_evidence("MESH:D000474", "GENE:3081", RelationKind::bind, "222", 0.8);
    EXPECT_EQ(e.weight, 0.75);
    EXPECT_EQ(e.kind_label(), "multitype");
}

TEST(MergeEvidence, Errors) {
    auto g = two_nodes();
    EXPECT_THROW(g.merge_evidence("MESH:D000474", "GENE:9", RelationKind::bind, "1", 0.5), MissingNodeError);
    EXPECT_THROW(g.merge_evidence("GENE:3081", "GENE:3081", RelationKind::bind, "1", 0.5), InvalidEdgeError);
    EXPECT_THROW(g.merge_evidence("MESH:D000474", "GENE:3081", RelationKind::bind, "1", 1.5),
                 InvalidEvidenceError);
}

TEST(KnowledgeGraph, RemoveNodeDropsIncidentEdges) {
    auto g = testgen::graph_from_edges({{"a", "b"}, {"b", "c"}, {"a", "c"}});
    g.remove_node("b");
    EXPECT_EQ(g.num_nodes(), 2u);
    EXPECT_EQ(g.num_edges(), 1u);
    EXPECT_TRUE(g.neighbors("a").count("c"));
    EXPECT_TRUE(g.invariant_violations().empty());
}

TEST(KnowledgeGraph, ResolveByIdNameOrAlias) {
    auto g = two_nodes();
    EXPECT_EQ(g.resolve("GENE:3081"), "GENE:3081");
    EXPECT_EQ(g.resolve("alkaptonuria"), "MESH:D000474");
    EXPECT_EQ(g.resolve("AKU"), "MESH:D000474");
    EXPECT_FALSE(g.resolve("nothing"));
}

TEST(KnowledgeGraph, CategoryClashRejected) {
    auto g = two_nodes();
    EXPECT_THROW(g.add_node({"GENE:3081", "HGD", Category::chemical, {}, {}}), ValidationError);
}

TEST(Serialization, EmptyGraphRoundTrips) {
    KnowledgeGraph g;
    const std::string text = serialize(g);
    EXPECT_EQ(text, "{\n \"nodes\": [],\n \"edges\": []\n}\n");
    EXPECT_EQ(deserialize(text), g);
}

TEST(Serialization, TwoNodeGraphIsByteStable) {
    auto g = two_nodes();
    g.merge_evidence("MESH:D000474", "GENE:3081", RelationKind::association, "111", 0.9);
    const std::string first = serialize(g);
    const std::string second = serialize(deserialize(first));
    EXPECT_EQ(first, second);
    EXPECT_NE(first.find("\"weight\": 0.5"), std::string::npos);
}

TEST(Serialization, MalformedStreamReportsLine) {
    try {
        deserialize("{\n \"nodes\": [\n  {\"id\": }\n ]\n}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_GT(e.offset(), 0u);
    }
}

TEST(Serialization, SchemaViolationsListOffenders) {
    const std::string text = R"({"nodes":[{"id":"a","name":"a","category":"protein","aliases":[]},
        {"id":"b","name":"b","category":"gene","aliases":[]},{"id":"c","name":"c","category":"gene","aliases":[]}],
        "edges":[{"source":"b","target":"c","kinds":["bind"],"pmids":["1"],"confidences":[0.5],"weight":0.75}]})";
    try {
        deserialize(text);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        ASSERT_EQ(e.offenders().size(), 2u);
        EXPECT_NE(e.offenders()[0].find("unknown category"), std::string::npos);
        EXPECT_NE(e.offenders()[1].find("weight inconsistent"), std::string::npos);
    }
}

TEST(Serialization, FixtureMappingAcceptsNodeLinkSpelling) {
    const std::string text = R"({"directed": false, "multigraph": false, "graph": {},
        "nodes": [{"id": "Alkaptonuria", "type": "Disease"}, {"id": "HGD", "type": "Gene"}],
        "links": [{"source": "Alkaptonuria", "target": "HGD", "relation": "multitype", "weight": 0.875}]})";
    const auto g = deserialize(text, FieldMapping::published_fixtures());
    ASSERT_EQ(g.num_edges(), 1u);
    const auto* e = g.find_edge("Alkaptonuria", "HGD");
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(e->support(), 3u);
    EXPECT_EQ(e->weight, 0.875);
    EXPECT_EQ(g.node("HGD").category, Category::gene);
    EXPECT_THROW(deserialize(text), ValidationError);
}

TEST(SerializationProperty, RandomGraphsRoundTrip) {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::size_t> size(0, 1000);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = size(rng);
        const auto g = testgen::random_sparse_graph(rng, n, n * 2);
        ASSERT_TRUE(g.invariant_violations().empty());
        const std::string text = serialize(g);
        const auto back = deserialize(text);
        ASSERT_EQ(back, g) << "trial " << trial;
        ASSERT_EQ(serialize(back), text);
    }
}

TEST(GraphInvariant, StoredWeightsMatchEvidence) {
    std::mt19937_64 rng(7);
    const auto g = testgen::random_graph(rng, 60, 0.1);
    for (const auto& [pair, e] : g.edges()) {
        EXPECT_NEAR(e.weight, 1.0 - std::pow(2.0, -static_cast<double>(e.support())), 1e-12);
    }
}
