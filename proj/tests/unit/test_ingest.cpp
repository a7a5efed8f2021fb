#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "litkg/error.hpp"
#include "litkg/ingest/annotations.hpp"
#include "litkg/ingest/pubmed.hpp"
#include "litkg/ingest/query.hpp"
#include "litkg/ingest/seeds.hpp"
#include "litkg/util.hpp"
#include "support/mock_server.hpp"

using namespace litkg;
using namespace litkg::ingest;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("litkg_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

ServiceConfig fast_config(const std::string& url) {
    ServiceConfig c;
    c.base_url = url;
    c.requests_per_second = 0.0;
    c.max_attempts = 2;
    c.backoff_ms = 1;
    c.timeout_seconds = 2;
    return c;
}

RawRelation rel(const std::string& a, const std::string& b, double conf, const std::string& article = "1",
                const std::string& b_name = "") {
    RawRelation r;
    r.a = {a, a, Category::disease};
    r.b = {b, b_name.empty() ? b : b_name, Category::chemical};
    r.kind = "association";
    r.article_id = article;
    r.confidence = conf;
    return r;
}

// Esearch mock: "rare" has 7 hits; "common" has 5000 hits where ids >= 3000
// fall inside any recency window.
void install_esearch(httplib::Server& s, std::atomic<int>& calls, std::string& last_reldate) {
    s.Get("/esearch.fcgi", [&](const httplib::Request& req, httplib::Response& res) {
        ++calls;
        const std::string term = req.get_param_value("term");
        const int retmax = std::stoi(req.get_param_value("retmax"));
        last_reldate = req.has_param("reldate") ? req.get_param_value("reldate") : "";
        std::vector<std::string> ids;
        if (term.rfind("rare ", 0) == 0) {
            for (int i = 7; i >= 1; --i) ids.push_back(std::to_string(100 + i));
        } else if (term.rfind("common ", 0) == 0) {
            const int first = last_reldate.empty() ? 0 : 3000;
            for (int i = 4999; i >= first; --i) ids.push_back(std::to_string(10000 + i));
        }
        nlohmann::json body;
        body["esearchresult"]["count"] = std::to_string(ids.size());
        std::vector<std::string> page(ids.begin(), ids.begin() + std::min<std::size_t>(ids.size(), retmax));
        body["esearchresult"]["idlist"] = page;
        res.set_content(body.dump(), "application/json");
    });
}

} // namespace

TEST(BuildQuery, GoldenTemplate) {
    EXPECT_EQ(build_query("Alkaptonuria"),
              "Alkaptonuria AND (Journal Article[pt] OR Clinical Trial[pt] OR Case Reports[pt] OR Randomized "
              "Controlled Trial[pt] OR Observational Study[pt] OR Comparative Study[pt] OR Evaluation Study[pt]) "
              "NOT (Review[pt] OR Systematic Review[pt] OR Meta-Analysis[pt] OR Editorial[pt] OR Letter[pt] OR "
              "Comment[pt])");
}

TEST(BuildQuery, TermPassedThroughVerbatim) {
    const auto q = build_query("homogentisic acid");
    EXPECT_EQ(q.rfind("homogentisic acid AND (Journal Article[pt]", 0), 0u);
}

TEST(BuildQuery, EmptyTermRejected) {
    EXPECT_THROW(build_query(""), InvalidQueryError);
    EXPECT_THROW(build_query("   "), InvalidQueryError);
}

TEST(FetchArticleIds, UnderCapReturnsAll) {
    testgen::MockServer mock;
    std::atomic<int> calls{0};
    std::string reldate;
    install_esearch(mock.server(), calls, reldate);
    mock.start();
    ServiceClient client(fast_config(mock.url()));
    const auto ids = fetch_article_ids("rare", {}, client);
    EXPECT_EQ(ids.size(), 7u);
    EXPECT_EQ(ids.front(), "107");
    EXPECT_TRUE(reldate.empty());
}

TEST(FetchArticleIds, CapAppliesRecencyWindow) {
    testgen::MockServer mock;
    std::atomic<int> calls{0};
    std::string reldate;
    install_esearch(mock.server(), calls, reldate);
    mock.start();
    ServiceClient client(fast_config(mock.url()));
    LiteratureClient lit(client);
    const auto result = lit.fetch_article_ids("common", {});
    EXPECT_TRUE(result.capped);
    EXPECT_EQ(result.total_hits, 5000);
    ASSERT_EQ(result.ids.size(), 2000u);
    EXPECT_EQ(reldate, "1825");
    for (const auto& id : result.ids) EXPECT_GE(std::stoi(id), 13000) << id;
    EXPECT_EQ(std::set<std::string>(result.ids.begin(), result.ids.end()).size(), 2000u);
    // Deterministic on replay.
    EXPECT_EQ(lit.fetch_article_ids("common", {}).ids, result.ids);
}

TEST(FetchArticleIds, NeverExceedsPolicyCap) {
    testgen::MockServer mock;
    std::atomic<int> calls{0};
    std::string reldate;
    install_esearch(mock.server(), calls, reldate);
    mock.start();
    ServiceClient client(fast_config(mock.url()));
    for (int cap : {1, 5, 7, 100, 2500}) {
        RetrievalPolicy p;
        p.max_articles = cap;
        for (const char* term : {"rare", "common"}) {
            EXPECT_LE(fetch_article_ids(term, p, client).size(), static_cast<std::size_t>(cap));
        }
    }
}

TEST(FetchArticleIds, UnreachableHostIsRetryable) {
    int port = 0;
    {
        testgen::MockServer probe;
        probe.start();
        port = probe.port();
    }
    ServiceClient client(fast_config("http://127.0.0.1:" + std::to_string(port)));
    try {
        fetch_article_ids("rare", {}, client);
        FAIL() << "expected IngestError";
    } catch (const IngestError& e) {
        EXPECT_TRUE(e.retryable());
        EXPECT_EQ(e.attempts(), 2);
    }
    EXPECT_EQ(client.network_calls(), 2);
}

TEST(FetchArticleIds, MalformedResponseIsParseError) {
    testgen::MockServer mock;
    mock.server().Get("/esearch.fcgi", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"esearchresult\": ", "application/json");
    });
    mock.start();
    ServiceClient client(fast_config(mock.url()));
    EXPECT_THROW(fetch_article_ids("rare", {}, client), ParseError);
}

TEST(FetchArticleIds, ClientErrorIsNotRetried) {
    testgen::MockServer mock;
    mock.server().Get("/esearch.fcgi", [](const httplib::Request&, httplib::Response& res) { res.status = 400; });
    mock.start();
    ServiceClient client(fast_config(mock.url()));
    try {
        fetch_article_ids("rare", {}, client);
        FAIL();
    } catch (const IngestError& e) {
        EXPECT_FALSE(e.retryable());
    }
    EXPECT_EQ(client.network_calls(), 1);
}

TEST(FetchAnnotations, GoldenThreeArticleFixture) {
    const std::string body = read_text_file(LITKG_TEST_DATA_DIR "/ingest/biocjson_three_articles.json");
    testgen::MockServer mock;
    mock.server().Get("/publications/export/biocjson", [&](const httplib::Request& req, httplib::Response& res) {
        EXPECT_EQ(req.get_param_value("pmids"), "1001,1002,1003");
        res.set_content(body, "application/json");
    });
    mock.start();
    ServiceClient client(fast_config(mock.url()));
    const auto result = AnnotationClient(client).fetch_annotations({"1001", "1002", "1003"});
    EXPECT_TRUE(result.failures.empty());

    std::vector<std::string> got;
    got.push_back("# entities: id\tname\tcategory\tparent_gene");
    for (const auto& e : result.entities) {
        got.push_back(e.id + "\t" + e.name + "\t" + std::string(to_string(e.category)) + "\t" +
                      e.parent_gene.value_or(""));
    }
    got.push_back("# relations: a\tb\tkind\tarticle\tconfidence");
    for (const auto& r : result.relations) {
        std::ostringstream conf;
        conf << r.confidence;
        got.push_back(r.a.id + "\t" + r.b.id + "\t" + r.kind + "\t" + r.article_id + "\t" + conf.str());
    }
    std::vector<std::string> expected;
    for (const auto& line : split(read_text_file(LITKG_TEST_DATA_DIR "/ingest/expected_three_articles.tsv"), '\n')) {
        if (line.empty() || line.rfind("# golden", 0) == 0) continue;
        expected.push_back(line);
    }
    EXPECT_EQ(got, expected);
    const auto hga = std::find_if(result.entities.begin(), result.entities.end(),
                                  [](const EntityNode& e) { return e.id == "MESH:D006713"; });
    ASSERT_NE(hga, result.entities.end());
    EXPECT_TRUE(hga->aliases.count("HGA"));
}

TEST(FetchAnnotations, SameRelationInTwoArticlesKeptPerArticle) {
    const std::string body = R"({"PubTator3": [
      {"id": "1", "passages": [], "relations": [{"infons": {"type": "Bind", "score": 0.9,
         "role1": {"identifier": "3081", "type": "Gene"}, "role2": {"identifier": "MESH:D006713", "type": "Chemical"}}}]},
      {"id": "2", "passages": [], "relations": [{"infons": {"type": "Bind", "score": 0.8,
         "role1": {"identifier": "3081", "type": "Gene"}, "role2": {"identifier": "MESH:D006713", "type": "Chemical"}}},
         {"infons": {"type": "Bind", "score": 0.8,
         "role1": {"identifier": "MESH:D006713", "type": "Chemical"}, "role2": {"identifier": "3081", "type": "Gene"}}}]}]})";
    AnnotationResult result;
    parse_bioc_documents(body, result);
    canonicalize(result);
    ASSERT_EQ(result.relations.size(), 2u);
    EXPECT_EQ(result.relations[0].article_id, "1");
    EXPECT_EQ(result.relations[1].article_id, "2");
}

TEST(FetchAnnotations, WarmCacheIsNetworkFreeAndIdentical) {
    const auto cache = temp_dir("annot_cache");
    const std::string body = read_text_file(LITKG_TEST_DATA_DIR "/ingest/biocjson_three_articles.json");
    AnnotationResult first;
    {
        testgen::MockServer mock;
        mock.server().Get("/publications/export/biocjson",
                          [&](const httplib::Request&, httplib::Response& res) { res.set_content(body, "application/json"); });
        mock.start();
        auto cfg = fast_config(mock.url());
        cfg.cache_dir = cache;
        ServiceClient client(cfg);
        first = AnnotationClient(client).fetch_annotations({"1001", "1002", "1003"});
        EXPECT_EQ(client.network_calls(), 1);
        cfg.base_url = mock.url();
        ServiceClient replay(cfg);
        const auto second = AnnotationClient(replay).fetch_annotations({"1001", "1002", "1003"});
        EXPECT_EQ(replay.network_calls(), 0);
        EXPECT_EQ(replay.cache_hits(), 1);
        EXPECT_EQ(second.relations, first.relations);
        EXPECT_EQ(second.entities, first.entities);
    }
    std::filesystem::remove_all(cache);
}

TEST(FetchAnnotations, PartialBatchFailureKeepsGoodBatches) {
    testgen::MockServer mock;
    mock.server().Get("/publications/export/biocjson", [](const httplib::Request& req, httplib::Response& res) {
        const auto pmids = req.get_param_value("pmids");
        if (pmids.find("9999") != std::string::npos) {
            res.status = 503;
            return;
        }
        res.set_content(R"({"PubTator3": [{"id": ")" + pmids + R"(", "passages": [], "relations": [{"infons":
            {"type": "Association", "score": "0.75", "role1": {"identifier": "3081", "type": "Gene"},
             "role2": {"identifier": "MESH:D000474", "type": "Disease"}}}]}]})",
                        "application/json");
    });
    mock.start();
    ServiceClient client(fast_config(mock.url()));
    const auto result = AnnotationClient(client, 1).fetch_annotations({"1", "9999", "3"});
    ASSERT_EQ(result.failures.size(), 1u);
    EXPECT_EQ(result.failures[0].batch_index, 1u);
    EXPECT_EQ(result.failures[0].article_ids, std::vector<std::string>{"9999"});
    EXPECT_EQ(result.relations.size(), 2u);
}

TEST(NormalizeEntityId, Namespaces) {
    EXPECT_EQ(normalize_entity_id("3081", Category::gene), "GENE:3081");
    EXPECT_EQ(normalize_entity_id("3081;3082", Category::gene), "GENE:3081");
    EXPECT_EQ(normalize_entity_id("D000474", Category::disease), "MESH:D000474");
    EXPECT_EQ(normalize_entity_id("MESH:D000474", Category::disease), "MESH:D000474");
    EXPECT_EQ(normalize_entity_id("tmVar:c|SUB|G|1102|A;HGVS:c.1102G>A;CorrespondingGene:3081", Category::variant),
              "VARIANT:c.1102G>A@GENE:3081");
    EXPECT_FALSE(normalize_entity_id("-", Category::chemical));
    EXPECT_EQ(variant_parent_gene("HGVS:p.X;CorrespondingGene:3081"), "GENE:3081");
    EXPECT_FALSE(variant_parent_gene("HGVS:p.X"));
}

TEST(TokenBucket, ThrottlesToRate) {
    TokenBucket bucket(50.0, 1.0);
    const auto start = TokenBucket::Clock::now();
    for (int i = 0; i < 6; ++i) bucket.acquire();
    const std::chrono::duration<double> elapsed = TokenBucket::Clock::now() - start;
    EXPECT_GE(elapsed.count(), 0.09);
    EXPECT_FALSE(bucket.try_acquire());
}

TEST(ExpandSeeds, SingleConfidentRelation) {
    const auto s = expand_seeds({rel("AKU", "X", 0.8)}, {"AKU"}, 0.7, {});
    EXPECT_EQ(s.terms, std::vector<std::string>{"X"});
    EXPECT_EQ(s.stage, SeedStage::expanded);
}

TEST(ExpandSeeds, MeanBelowThresholdDropped) {
    const auto s = expand_seeds({rel("AKU", "X", 0.9, "1"), rel("AKU", "X", 0.4, "2")}, {"AKU"}, 0.7, {});
    EXPECT_TRUE(s.terms.empty());
}

TEST(ExpandSeeds, GenericTermsExcluded) {
    const auto s = expand_seeds({rel("AKU", "MESH:D003643", 0.99, "1", "Death")}, {"AKU"}, 0.7, {"Death", "Disease"});
    EXPECT_TRUE(s.terms.empty());
}

TEST(ExpandSeeds, MeanIsPooledAcrossAnchors) {
    // 0.9 via one anchor and 0.6 via another average to 0.75.
    const auto s = expand_seeds({rel("AKU", "X", 0.9, "1"), rel("HGD", "X", 0.6, "2")}, {"AKU", "HGD"}, 0.7, {});
    EXPECT_EQ(s.terms, std::vector<std::string>{"X"});
}

TEST(ExpandSeedsProperty, NeverReturnsAnchorsOrExclusions) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> node(0, 19);
    std::uniform_real_distribution<double> conf(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<RawRelation> rels;
        for (int i = 0; i < 40; ++i) {
            rels.push_back(rel("E" + std::to_string(node(rng)), "E" + std::to_string(node(rng)), conf(rng),
                               std::to_string(i)));
        }
        std::set<std::string> anchors{"E0", "E" + std::to_string(node(rng))};
        std::set<std::string> exclusions{"E" + std::to_string(node(rng)), "E" + std::to_string(node(rng))};
        const auto s = expand_seeds(rels, anchors, 0.5, exclusions);
        for (const auto& t : s.terms) {
            EXPECT_EQ(anchors.count(t), 0u);
            EXPECT_EQ(exclusions.count(t), 0u);
        }
    }
}

TEST(Seeds, InitialSetValidation) {
    EXPECT_NO_THROW(make_initial_seeds({"Alkaptonuria", "HGD", "homogentisic acid"}));
    EXPECT_THROW(make_initial_seeds({}), InvalidQueryError);
    EXPECT_THROW(make_initial_seeds({"HGD", "hgd"}), InvalidQueryError);
}
