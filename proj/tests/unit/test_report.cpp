#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "litkg/error.hpp"
#include "litkg/ingest/corpus.hpp"
#include "litkg/kg_json.hpp"
#include "litkg/report/cli.hpp"
#include "litkg/report/config.hpp"
#include "litkg/report/figures.hpp"
#include "litkg/report/html.hpp"
#include "litkg/report/stages.hpp"
#include "litkg/util.hpp"
#include "support/generators.hpp"
#include "support/mock_server.hpp"

using namespace litkg;
using namespace litkg::report;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

fs::path temp_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("litkg_report_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = cli_dispatch(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

ingest::EntityRef disease(const std::string& id, const std::string& name) { return {id, name, Category::disease}; }
ingest::EntityRef gene(const std::string& id, const std::string& name) { return {id, name, Category::gene}; }
ingest::EntityRef chemical(const std::string& id, const std::string& name) { return {id, name, Category::chemical}; }

// A small alkaptonuria-like corpus: the anchor, four genes, three
// chemicals and two more diseases, with a few low-confidence relations.
ingest::Corpus small_corpus() {
    const auto aku = disease("MESH:D000474", "Alkaptonuria");
    const auto och = disease("MESH:D009794", "Ochronosis");
    const auto tyr = disease("MESH:D020176", "Tyrosinemias");
    const auto hgd = gene("GENE:3081", "HGD");
    const auto hpd = gene("GENE:3242", "HPD");
    const auto fah = gene("GENE:2184", "FAH");
    const auto actb = gene("GENE:60", "ACTB");
    const auto nit = chemical("MESH:C072924", "nitisinone");
    const auto hga = chemical("MESH:D006713", "Homogentisic Acid");
    const auto tyro = chemical("MESH:D014443", "Tyrosine");

    ingest::Corpus c;
    c.initial_seeds = {"Alkaptonuria", "HGD", "homogentisic acid"};
    c.expanded_seeds = {"nitisinone"};
    c.initial_articles = {"1", "2", "3", "4", "5", "6"};
    c.expanded_articles = {"7", "8"};
    auto add = [&](const ingest::EntityRef& a, const ingest::EntityRef& b, const std::string& kind,
                   const std::string& article, double conf) {
        c.annotations.relations.push_back({a, b, kind, article, conf});
    };
    add(aku, hgd, "association", "1", 0.99);
    add(aku, hgd, "association", "2", 0.95);
    add(aku, hga, "positive_correlation", "1", 0.97);
    add(aku, nit, "negative_correlation", "3", 0.9);
    add(aku, och, "association", "4", 0.85);
    add(aku, tyro, "association", "5", 0.8);
    add(hgd, hga, "bind", "2", 0.9);
    add(hgd, hpd, "association", "6", 0.88);
    add(hpd, fah, "association", "6", 0.75);
    add(hpd, nit, "negative_correlation", "3", 0.95);
    add(hpd, tyro, "association", "7", 0.9);
    add(fah, tyr, "association", "7", 0.92);
    add(tyr, nit, "negative_correlation", "8", 0.93);
    add(tyr, tyro, "positive_correlation", "8", 0.9);
    add(och, hga, "positive_correlation", "4", 0.9);
    add(hgd, actb, "association", "5", 0.55);
    add(nit, hga, "comparison", "3", 0.99);
    for (const auto& r : {aku, och, tyr, hgd, hpd, fah, actb, nit, hga, tyro}) {
        c.annotations.entities.push_back({r.id, r.name, r.category, {}, {}});
    }
    c.annotations.entities[8].aliases = {"HGA", "homogentisate"};
    return c;
}

KnowledgeGraph small_graph() {
    return testgen::graph_from_edges({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"c", "d"}});
}

} // namespace

// ---- config ----

TEST(RunConfigTest, DefaultsAreValid) {
    const auto c = default_run_config({});
    EXPECT_EQ(c.anchor, "Alkaptonuria");
    EXPECT_EQ(c.similarity_chemical, "nitisinone");
    EXPECT_DOUBLE_EQ(c.expansion_threshold, 0.7);
    EXPECT_EQ(c.initial_seeds, (std::vector<std::string>{"Alkaptonuria", "HGD", "homogentisic acid"}));
    EXPECT_DOUBLE_EQ(c.centrality.ppr_damping, 0.85);
    EXPECT_NO_THROW(c.validate());
}

TEST(RunConfigTest, RelativePathsResolveAgainstConfigDirectory) {
    const auto dir = temp_dir("relpaths");
    write_text_file(dir / "blocklist.txt", "Death\n");
    fs::copy_file(LITKG_TEST_DATA_DIR "/refgraph/string_mini.tsv", dir / "string.tsv");
    const auto c = parse_run_config(R"({"blocklist": "blocklist.txt", "output_dir": "results",
        "references": [{"name": "string", "kind": "gene_gene", "format": "string", "path": "string.tsv"}],
        "anchor": "HGD", "top_k": 5, "centrality": {"ppr_damping": 0.5}})",
                                    dir);
    ASSERT_TRUE(c.blocklist);
    EXPECT_EQ(*c.blocklist, dir / "blocklist.txt");
    EXPECT_EQ(c.output_dir, dir / "results");
    ASSERT_EQ(c.references.size(), 1u);
    EXPECT_EQ(c.references[0].path, dir / "string.tsv");
    EXPECT_EQ(c.anchor, "HGD");
    EXPECT_EQ(c.top_k, 5u);
    EXPECT_DOUBLE_EQ(c.centrality.ppr_damping, 0.5);
    EXPECT_NO_THROW(c.validate());
}

TEST(RunConfigTest, UnknownKeyRejected) {
    EXPECT_THROW(parse_run_config(R"({"anchr": "HGD"})", "."), ConfigError);
    EXPECT_THROW(parse_run_config(R"({"filter": {"hi_conf": 0.7}})", "."), ConfigError);
    EXPECT_THROW(parse_run_config("{not json", "."), ConfigError);
}

TEST(RunConfigTest, WrongTypeRejected) {
    EXPECT_THROW(parse_run_config(R"({"top_k": "twenty"})", "."), ConfigError);
    EXPECT_THROW(parse_run_config(R"({"references": {}})", "."), ConfigError);
}

TEST(RunConfigTest, EnvironmentOverrides) {
    auto c = default_run_config({});
    const auto unknown = apply_environment(c, {{"LITKG_ANCHOR", "HGD"},
                                               {"LITKG_SEED", "7"},
                                               {"LITKG_PPR_DAMPING", "0.6"},
                                               {"LITKG_LITERATURE_API_KEY", "secret"},
                                               {"LITKG_NOT_A_SETTING", "x"}});
    EXPECT_EQ(c.anchor, "HGD");
    EXPECT_EQ(c.seed, 7u);
    EXPECT_DOUBLE_EQ(c.centrality.ppr_damping, 0.6);
    EXPECT_EQ(c.literature.api_key, "secret");
    EXPECT_EQ(unknown, std::vector<std::string>{"LITKG_NOT_A_SETTING"});
    EXPECT_EQ(config_to_json(c).find("secret"), std::string::npos);
}

TEST(RunConfigTest, BadEnvironmentNumberRejected) {
    auto c = default_run_config({});
    EXPECT_THROW(apply_environment(c, {{"LITKG_SEED", "seven"}}), ConfigError);
    EXPECT_THROW(apply_environment(c, {{"LITKG_TOP_K", "3x"}}), ConfigError);
}

TEST(RunConfigTest, InvalidValuesRejected) {
    auto c = default_run_config({});
    c.resolution = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = default_run_config({});
    c.expansion_threshold = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = default_run_config({});
    c.references.push_back({"string", ref::ReferenceKind::gene_gene, ReferenceFormat::string_tsv, "/nonexistent.tsv", ""});
    try {
        c.validate();
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent.tsv"), std::string::npos);
    }
}

TEST(RunConfigTest, MissingConfigFileNamesPath) {
    try {
        load_run_config("/nonexistent/litkg.json", {});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/litkg.json"), std::string::npos);
    }
}

TEST(RunConfigTest, ChecksumStatus) {
    const auto dir = temp_dir("checksum");
    write_text_file(dir / "ref.tsv", "abc");
    auto c = default_run_config({});
    c.references.push_back({"pinned", ref::ReferenceKind::gene_gene, ReferenceFormat::string_tsv, dir / "ref.tsv",
                            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"});
    c.references.push_back({"drifted", ref::ReferenceKind::gene_gene, ReferenceFormat::string_tsv, dir / "ref.tsv",
                            std::string(64, '0')});
    c.references.push_back({"unpinned", ref::ReferenceKind::gene_gene, ReferenceFormat::string_tsv, dir / "ref.tsv", ""});
    const auto status = verify_checksums(c);
    ASSERT_EQ(status.size(), 3u);
    EXPECT_TRUE(status[0].matches());
    EXPECT_FALSE(status[1].matches());
    EXPECT_TRUE(status[2].matches());
    EXPECT_FALSE(status[2].pinned());
}

TEST(RunConfigTest, ReferenceKindMismatchRejected) {
    auto c = default_run_config({});
    const ReferenceSnapshot snap{"string", ref::ReferenceKind::drug_gene, ReferenceFormat::string_tsv,
                                 LITKG_TEST_DATA_DIR "/refgraph/string_mini.tsv", ""};
    EXPECT_THROW(load_reference(snap, c, small_graph()), ConfigError);
}

// ---- html ----

TEST(HtmlView, EmptyGraphIsValidPage) {
    const auto r = emit_html_view(KnowledgeGraph{}, "empty");
    EXPECT_EQ(r.nodes, 0u);
    EXPECT_NE(r.html.find("<!DOCTYPE html>"), std::string::npos);
    EXPECT_NE(r.html.find("</html>"), std::string::npos);
    EXPECT_NE(r.html.find("id=\"litkg-data\""), std::string::npos);
}

TEST(HtmlView, OverlayUsesClassColors) {
    const auto dir = temp_dir("overlay_html");
    KnowledgeGraph kg;
    for (const auto& [id, name] : std::vector<std::pair<std::string, std::string>>{
             {"GENE:3081", "HGD"}, {"GENE:3242", "HPD"}, {"GENE:2184", "FAH"}, {"GENE:60", "ACTB"}}) {
        kg.add_node({id, name, Category::gene, {}, {}});
    }
    kg.merge_evidence("GENE:3081", "GENE:3242", RelationKind::association, "1", 0.9);
    kg.merge_evidence("GENE:3242", "GENE:60", RelationKind::association, "1", 0.9);
    const auto loaded = load_reference(
        {"string", ref::ReferenceKind::gene_gene, ReferenceFormat::string_tsv, LITKG_TEST_DATA_DIR "/refgraph/string_mini.tsv", ""},
        default_run_config({}), kg);
    const auto cls = validate::classify_edges(kg, loaded.graph);
    const auto cov = validate::path_coverage(kg, cls);
    const auto overlay = validate::overlay_export(kg, loaded.graph, cls, cov);
    const auto r = emit_html_view(overlay, "overlay");
    for (const auto& color : {"#2ca02c", "#d62728", "#1f3fbf"}) {
        EXPECT_NE(r.html.find(color), std::string::npos) << color;
    }
    for (const auto& cls_name : {"edge-green", "edge-red", "edge-blue"}) {
        EXPECT_NE(r.html.find(cls_name), std::string::npos) << cls_name;
    }
}

TEST(HtmlView, LayoutDeterministicPerSeed) {
    std::mt19937_64 rng(11);
    const auto g = testgen::random_graph(rng, 40, 0.1);
    const auto v = view_of(g, "g");
    const auto a = force_layout(v, 5);
    const auto b = force_layout(v, 5);
    const auto c = force_layout(v, 6);
    ASSERT_EQ(a.size(), 40u);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].x, b[i].x);
        EXPECT_EQ(a[i].y, b[i].y);
        EXPECT_GE(a[i].x, 0.0);
        EXPECT_LE(a[i].x, 1000.0);
        EXPECT_GE(a[i].y, 0.0);
        EXPECT_LE(a[i].y, 1000.0);
        differs = differs || a[i].x != c[i].x || a[i].y != c[i].y;
    }
    EXPECT_TRUE(differs);
    EXPECT_EQ(render_html(v, 5).html, render_html(v, 5).html);
}

TEST(HtmlView, OverCapNeedsModuleSelector) {
    std::mt19937_64 rng(3);
    const auto g = testgen::random_graph(rng, 30, 0.2);
    HtmlOptions opts;
    opts.render_cap = 10;
    EXPECT_THROW(emit_html_view(g, "big", opts), ConfigError);
    opts.module_selector = g.nodes().begin()->first;
    const auto r = emit_html_view(g, "big", opts);
    EXPECT_TRUE(r.warning.has_value());
    EXPECT_LT(r.nodes, 30u);
}

TEST(HtmlView, ScriptTerminatorEscaped) {
    KnowledgeGraph g;
    g.add_node({"x", "</script><b>", Category::gene, {}, {}});
    const auto r = emit_html_view(g, "<title>");
    EXPECT_EQ(r.html.find("</script><b>"), std::string::npos);
    EXPECT_NE(r.html.find("&lt;title&gt;"), std::string::npos);
}

TEST(HtmlView, NodeColorsByCategory) {
    EXPECT_EQ(node_color(Category::gene), "#4c72b0");
    EXPECT_EQ(node_color(Category::disease), "#c44e52");
    EXPECT_EQ(node_color(Category::chemical), "#55a868");
    EXPECT_EQ(edge_color("path", true), "#ff9f1c");
}

// ---- figures ----

TEST(FigureTables, EmptyRankingHeaderOnly) {
    EXPECT_EQ(top_by_category_csv({"ppr", {}}, 20), "category,rank,id,name,score\n");
}

TEST(FigureTables, TopKPerCategory) {
    analyze::RankingTable t{"ppr", {}};
    for (int i = 0; i < 5; ++i) {
        t.rows.push_back({"g" + std::to_string(i), "G" + std::to_string(i), Category::gene, 1.0 - i * 0.1});
        t.rows.push_back({"c" + std::to_string(i), "C" + std::to_string(i), Category::chemical, 0.5 - i * 0.05});
    }
    t.rows.push_back({"d0", "D0", Category::disease, 0.01});
    const auto lines = split(top_by_category_csv(t, 2), '\n');
    ASSERT_GE(lines.size(), 6u);
    EXPECT_EQ(lines[1].rfind("gene,1,g0,G0,", 0), 0u);
    EXPECT_EQ(lines[2].rfind("gene,2,g1,G1,", 0), 0u);
    EXPECT_EQ(lines[3].rfind("chemical,1,c0,C0,", 0), 0u);
    EXPECT_EQ(lines[5].rfind("disease,1,d0,D0,", 0), 0u);
}

TEST(FigureTables, BundleHasSixFiles) {
    FigureInputs in;
    for (int i = 0; i < 5; ++i) {
        in.hetesim.rows.push_back({"c" + std::to_string(i), "C" + std::to_string(i), Category::chemical, 0.9 - i * 0.1});
    }
    const auto tables = emit_figure_tables(in);
    EXPECT_EQ(tables.size(), 6u);
    for (const auto& name : {"ppr_top.csv", "katz_top.csv", "hetesim_chemicals.csv", "disease_similarity_top.csv",
                             "chemical_similarity_top.csv", "metrics_summary.csv"}) {
        EXPECT_TRUE(tables.count(name)) << name;
    }
    const auto hetesim = split(tables.at("hetesim_chemicals.csv"), '\n');
    std::size_t rows = 0;
    for (std::size_t i = 1; i < hetesim.size(); ++i) rows += hetesim[i].empty() ? 0 : 1;
    EXPECT_EQ(rows, 5u);
    EXPECT_EQ(tables.at("metrics_summary.csv").rfind("metric,value\n", 0), 0u);

    const auto dir = temp_dir("figures");
    const auto paths = write_figure_tables(tables, dir, "kg");
    ASSERT_EQ(paths.size(), 6u);
    EXPECT_TRUE(fs::exists(dir / "kg_ppr_top.csv"));
}

// ---- corpus ----

TEST(CorpusJson, RoundTripIsCanonical) {
    auto c = small_corpus();
    c.annotations.failures.push_back({3, {"9", "10"}, "timeout"});
    const auto text = ingest::corpus_to_json(c);
    const auto back = ingest::corpus_from_json(text);
    EXPECT_EQ(ingest::corpus_to_json(back), text);
    EXPECT_EQ(back.annotations.relations.size(), c.annotations.relations.size());
    EXPECT_EQ(back.annotations.entities.size(), c.annotations.entities.size());
    ASSERT_EQ(back.annotations.failures.size(), 1u);
    EXPECT_EQ(back.annotations.failures[0].article_ids, (std::vector<std::string>{"9", "10"}));
}

TEST(CorpusJson, ResolveTermsMatchesAliases) {
    const auto c = small_corpus();
    const auto ids = ingest::resolve_terms(c.annotations.entities, {"homogentisate", "hgd", "missing"});
    EXPECT_EQ(ids, (std::set<std::string>{"GENE:3081", "MESH:D006713"}));
}

TEST(CorpusJson, MissingFileIsConfigError) {
    EXPECT_THROW(ingest::load_corpus("/nonexistent/corpus.json"), ConfigError);
}

// ---- cli ----

TEST(Cli, HelpExitsZero) {
    const auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("pipeline"), std::string::npos);
}

TEST(Cli, UnknownSubcommandPrintsUsage) {
    const auto r = run_cli({"frobnicate"});
    EXPECT_EQ(r.code, kExitUserError);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, UnknownFlagPrintsUsage) {
    const auto r = run_cli({"analyze", "--graph", "g.json", "--frobnicate"});
    EXPECT_EQ(r.code, kExitUserError);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, MissingConfigIsUserError) {
    const auto r = run_cli({"analyze", "--config", "/nonexistent/litkg.json", "--graph", "g.json"});
    EXPECT_EQ(r.code, kExitUserError);
    EXPECT_NE(r.err.find("/nonexistent/litkg.json"), std::string::npos);
}

TEST(Cli, MissingAnchorIsUserError) {
    const auto dir = temp_dir("cli_anchor");
    write_text_file(dir / "g.json", serialize(small_graph()));
    const auto r = run_cli({"analyze", "--graph", (dir / "g.json").string(), "--anchor", "nowhere", "--out",
                            (dir / "out").string()});
    EXPECT_EQ(r.code, kExitUserError);
    EXPECT_NE(r.err.find("nowhere"), std::string::npos);
}

TEST(Cli, AnalyzeMetricsWritesRecord) {
    const auto dir = temp_dir("cli_metrics");
    write_text_file(dir / "g.json", serialize(small_graph()));
    const auto r = run_cli({"analyze", "--graph", (dir / "g.json").string(), "--metrics", "--anchor", "a", "--out",
                            (dir / "out").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = Json::parse(read_text_file(dir / "out" / "reports" / "g_metrics.json"));
    EXPECT_EQ(j.at("nodes").get<int>(), 4);
    EXPECT_EQ(j.at("edges").get<int>(), 4);
    EXPECT_EQ(j.at("anchor").at("id").get<std::string>(), "a");
    EXPECT_FALSE(fs::exists(dir / "out" / "rankings" / "g_ppr.json"));
    EXPECT_TRUE(fs::exists(dir / "out" / "rankings" / "g_metrics_summary.csv"));
}

TEST(Cli, ValidateWritesReports) {
    const auto dir = temp_dir("cli_validate");
    KnowledgeGraph kg;
    kg.add_node({"GENE:3081", "HGD", Category::gene, {}, {}});
    kg.add_node({"GENE:3242", "HPD", Category::gene, {}, {}});
    kg.add_node({"GENE:60", "ACTB", Category::gene, {}, {}});
    kg.merge_evidence("GENE:3081", "GENE:3242", RelationKind::association, "1", 0.9);
    kg.merge_evidence("GENE:3242", "GENE:60", RelationKind::association, "1", 0.9);
    write_text_file(dir / "kg.json", serialize(kg));
    const auto r = run_cli({"validate", "--graph", (dir / "kg.json").string(), "--reference",
                            LITKG_TEST_DATA_DIR "/refgraph/string_mini.tsv", "--kind", "gene_gene", "--out",
                            (dir / "out").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto reports = dir / "out" / "reports";
    EXPECT_TRUE(fs::exists(reports / "kg_string_mini_classification.csv"));
    EXPECT_TRUE(fs::exists(reports / "kg_string_mini_coverage.json"));
    EXPECT_TRUE(fs::exists(dir / "out" / "html" / "kg_string_mini_overlay.html"));
    const auto j = Json::parse(read_text_file(reports / "kg_string_mini_validation.json"));
    EXPECT_EQ(j.at("reference").at("kind").get<std::string>(), "gene_gene");
    EXPECT_FALSE(j.at("reference").at("drift").get<bool>());
}

TEST(Cli, ValidateReferenceWithoutKindIsUserError) {
    const auto dir = temp_dir("cli_validate_kind");
    write_text_file(dir / "kg.json", serialize(small_graph()));
    const auto r = run_cli({"validate", "--graph", (dir / "kg.json").string(), "--reference",
                            LITKG_TEST_DATA_DIR "/refgraph/string_mini.tsv", "--out", (dir / "out").string()});
    EXPECT_EQ(r.code, kExitUserError);
}

TEST(Cli, ChecksumDriftIsWarning) {
    const auto dir = temp_dir("cli_drift");
    fs::copy_file(LITKG_TEST_DATA_DIR "/refgraph/string_mini.tsv", dir / "string.tsv");
    write_text_file(dir / "litkg.json", R"({"references": [{"name": "string", "kind": "gene_gene",
        "format": "string", "path": "string.tsv", "sha256": ")" + std::string(64, '0') + R"("}],
        "anchor": "HGD", "output_dir": "out"})");
    KnowledgeGraph kg;
    kg.add_node({"GENE:3081", "HGD", Category::gene, {}, {}});
    kg.add_node({"GENE:3242", "HPD", Category::gene, {}, {}});
    kg.merge_evidence("GENE:3081", "GENE:3242", RelationKind::association, "1", 0.9);
    write_text_file(dir / "kg.json", serialize(kg));
    const auto r = run_cli({"validate", "--config", (dir / "litkg.json").string(), "--graph",
                            (dir / "kg.json").string(), "--reference", "string"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("1 warning"), std::string::npos);
    const auto j = Json::parse(read_text_file(dir / "out" / "reports" / "kg_string_validation.json"));
    EXPECT_TRUE(j.at("reference").at("drift").get<bool>());
}

TEST(Cli, ReportWritesHtml) {
    const auto dir = temp_dir("cli_report");
    write_text_file(dir / "g.json", serialize(small_graph()));
    const auto r = run_cli({"report", "--graph", (dir / "g.json").string(), "--out", (dir / "out").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(read_text_file(dir / "out" / "html" / "g.html").find("<canvas"), std::string::npos);
}

namespace {

std::map<std::string, std::string> tree_contents(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = read_text_file(e.path());
    }
    return files;
}

fs::path write_pipeline_config(const fs::path& dir) {
    fs::copy_file(LITKG_TEST_DATA_DIR "/refgraph/string_mini.tsv", dir / "string.tsv",
                  fs::copy_options::overwrite_existing);
    write_text_file(dir / "litkg.json", R"({"references": [{"name": "string", "kind": "gene_gene",
        "format": "string", "path": "string.tsv"}], "top_k": 5})");
    return dir / "litkg.json";
}

} // namespace

TEST(Cli, PipelineIsReproducible) {
    const auto dir = temp_dir("cli_repro");
    const auto config = write_pipeline_config(dir);
    ingest::save_corpus(small_corpus(), dir / "corpus.json");
    for (const char* out : {"run1", "run2"}) {
        const auto r = run_cli({"pipeline", "--config", config.string(), "--corpus", (dir / "corpus.json").string(),
                                "--out", (dir / out).string()});
        ASSERT_EQ(r.code, kExitOk) << r.err;
    }
    const auto a = tree_contents(dir / "run1");
    const auto b = tree_contents(dir / "run2");
    EXPECT_GT(a.size(), 20u);
    EXPECT_EQ(a, b);
}

TEST(Cli, PipelineEqualsComposedStages) {
    const auto dir = temp_dir("cli_compose");
    const auto config = write_pipeline_config(dir);
    const auto corpus = (dir / "corpus.json").string();
    ingest::save_corpus(small_corpus(), corpus);
    const auto whole = (dir / "whole").string();
    const auto staged = (dir / "staged").string();
    ASSERT_EQ(run_cli({"pipeline", "--config", config.string(), "--corpus", corpus, "--out", whole}).code, kExitOk);

    auto ok = [&](std::vector<std::string> args) {
        args.insert(args.end(), {"--config", config.string(), "--out", staged});
        const auto r = run_cli(args);
        ASSERT_EQ(r.code, kExitOk) << r.err;
    };
    const auto graphs = fs::path(staged) / "graphs";
    ok({"build", "--corpus", corpus});
    ok({"analyze", "--graph", (graphs / "extended_graph.json").string()});
    ok({"analyze", "--graph", (graphs / "highconf_graph.json").string()});
    ok({"validate", "--graph", (graphs / "extended_graph.json").string(), "--reference", "string", "--module"});
    ok({"validate", "--graph", (graphs / "highconf_graph.json").string(), "--reference", "string"});
    ok({"report", "--graph", (graphs / "extended_graph.json").string(), "--module", "Alkaptonuria"});
    ok({"report", "--graph", (graphs / "highconf_graph.json").string(), "--module", "Alkaptonuria"});
    EXPECT_EQ(tree_contents(whole), tree_contents(staged));
}

TEST(Cli, PipelineArtifacts) {
    const auto dir = temp_dir("cli_artifacts");
    const auto config = write_pipeline_config(dir);
    ingest::save_corpus(small_corpus(), dir / "corpus.json");
    const auto out = dir / "out";
    ASSERT_EQ(run_cli({"pipeline", "--config", config.string(), "--corpus", (dir / "corpus.json").string(), "--out",
                       out.string()})
                  .code,
              kExitOk);
    const auto ext = load_graph_file(out / "graphs" / "extended_graph.json");
    const auto hi = load_graph_file(out / "graphs" / "highconf_graph.json");
    EXPECT_TRUE(ext.has_node("MESH:D000474"));
    EXPECT_LE(hi.num_edges(), ext.num_edges());
    for (const auto& [pair, e] : hi.edges()) {
        const auto* x = ext.find_edge(pair.first, pair.second);
        ASSERT_NE(x, nullptr);
        for (const auto k : e.kinds) EXPECT_TRUE(x->kinds.count(k));
    }
    for (const auto& f : {"rankings/extended_graph_ppr.json", "rankings/highconf_graph_katz.json",
                          "rankings/extended_graph_hetesim.json", "rankings/extended_graph_ppr_top.csv",
                          "reports/highconf_graph_string_validation.json", "html/extended_graph.html",
                          "html/highconf_graph_string_overlay.html"}) {
        EXPECT_TRUE(fs::exists(out / f)) << f;
    }
    const auto hetesim = Json::parse(read_text_file(out / "rankings" / "extended_graph_hetesim.json"));
    // Only HGA shares a gene (HGD) with the anchor; nitisinone binds HPD.
    ASSERT_EQ(hetesim.at("rows").size(), 1u);
    EXPECT_EQ(hetesim.at("rows")[0].at("id"), "MESH:D006713");
    EXPECT_DOUBLE_EQ(hetesim.at("rows")[0].at("score").get<double>(), 1.0);
}

TEST(Cli, IngestAgainstMockServices) {
    const auto dir = temp_dir("cli_ingest");
    const std::string body = read_text_file(LITKG_TEST_DATA_DIR "/ingest/biocjson_three_articles.json");
    testgen::MockServer mock;
    mock.server().Get("/esearch.fcgi", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"esearchresult": {"count": "3", "idlist": ["1003", "1002", "1001"]}})", "application/json");
    });
    mock.server().Get("/publications/export/biocjson", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(body, "application/json");
    });
    mock.start();
    const std::string service = R"({"base_url": ")" + mock.url() +
                                R"(", "requests_per_second": 1000, "max_attempts": 1, "backoff_ms": 1, "timeout_seconds": 2})";
    write_text_file(dir / "litkg.json", R"({"literature": )" + service + R"(, "annotation": )" + service +
                                            R"(, "output_dir": "out", "cache_dir": "cache"})");
    const auto r = run_cli({"ingest", "--config", (dir / "litkg.json").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto corpus = ingest::load_corpus(dir / "out" / "graphs" / "corpus.json");
    EXPECT_EQ(corpus.initial_articles, (std::vector<std::string>{"1003", "1002", "1001"}));
    EXPECT_TRUE(corpus.expanded_articles.empty());
    EXPECT_EQ(corpus.annotations.relations.size(), 5u);
    EXPECT_TRUE(fs::exists(dir / "out" / "reports" / "ingest_report.json"));
    EXPECT_TRUE(fs::exists(dir / "cache"));
}

TEST(Cli, IngestWithNoArticlesIsUserError) {
    const auto dir = temp_dir("cli_ingest_empty");
    testgen::MockServer mock;
    mock.server().Get("/esearch.fcgi", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"esearchresult": {"count": "0", "idlist": []}})", "application/json");
    });
    mock.start();
    const std::string service = R"({"base_url": ")" + mock.url() + R"(", "requests_per_second": 1000})";
    write_text_file(dir / "litkg.json",
                    R"({"literature": )" + service + R"(, "annotation": )" + service + R"(, "output_dir": "out"})");
    const auto r = run_cli({"ingest", "--config", (dir / "litkg.json").string()});
    EXPECT_EQ(r.code, kExitUserError);
}
