#include "litkg/report/stages.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "litkg/analyze/cohesion.hpp"
#include "litkg/analyze/metrics.hpp"
#include "litkg/analyze/similarity.hpp"
#include "litkg/error.hpp"
#include "litkg/ingest/corpus.hpp"
#include "litkg/kg_json.hpp"
#include "litkg/report/figures.hpp"
#include "litkg/report/html.hpp"
#include "litkg/util.hpp"
#include "litkg/validate.hpp"

namespace litkg::report {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

void StageResult::merge(StageResult other) {
    artifacts.insert(artifacts.end(), other.artifacts.begin(), other.artifacts.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

namespace {

void emit(StageResult& r, const fs::path& path, std::string_view content) {
    write_text_file(path, content);
    r.artifacts.push_back(path);
    spdlog::info("event=artifact path={}", path.string());
}

void warn(StageResult& r, std::string message) {
    spdlog::warn("event=warning message=\"{}\"", message);
    r.warnings.push_back(std::move(message));
}

std::string dump(const OrderedJson& j) { return j.dump(1) + "\n"; }

std::string resolve_anchor(const KnowledgeGraph& g, const std::string& anchor) {
    const auto id = g.resolve(anchor);
    if (!id) throw MissingNodeError(anchor);
    return *id;
}

ingest::ServiceConfig with_cache(ingest::ServiceConfig s, const std::optional<fs::path>& cache, const char* sub) {
    if (cache) s.cache_dir = *cache / sub;
    return s;
}

// Paths under the output root are recorded relative to it.
std::string display_path(const fs::path& p, const fs::path& root) {
    const auto rel = fs::weakly_canonical(p).lexically_relative(fs::weakly_canonical(root));
    if (rel.empty() || *rel.begin() == "..") return p.string();
    return rel.generic_string();
}

OrderedJson ranking_json(const analyze::RankingTable& t) { return OrderedJson::parse(analyze::ranking_to_json(t)); }

} // namespace

StageResult run_ingest(const RunConfig& config) {
    StageResult result;
    const OutputLayout out{config.output_dir};
    ingest::ServiceClient literature(with_cache(config.literature, config.cache_dir, "literature"));
    ingest::ServiceClient annotation(with_cache(config.annotation, config.cache_dir, "annotation"));
    ingest::LiteratureClient lit(literature);
    ingest::AnnotationClient ann(annotation, config.annotation_batch_size);

    ingest::RetrievalPlan plan;
    plan.seeds = config.initial_seeds;
    plan.policy = config.retrieval;
    plan.expansion_threshold = config.expansion_threshold;
    plan.exclusions.insert(config.expansion_exclusions.begin(), config.expansion_exclusions.end());
    spdlog::info("event=ingest_start seeds={}", plan.seeds.size());
    const auto corpus = ingest::retrieve_corpus(lit, ann, plan);

    for (const auto& f : corpus.annotations.failures) {
        warn(result, fmt::format("annotation batch {} failed ({} articles): {}", f.batch_index, f.article_ids.size(),
                                 f.message));
    }
    emit(result, out.graphs() / "corpus.json", ingest::corpus_to_json(corpus));
    OrderedJson report{{"initial_seeds", corpus.initial_seeds},
                       {"expanded_seeds", corpus.expanded_seeds.size()},
                       {"initial_articles", corpus.initial_articles.size()},
                       {"expanded_articles", corpus.expanded_articles.size()},
                       {"entities", corpus.annotations.entities.size()},
                       {"relations", corpus.annotations.relations.size()},
                       {"failed_batches", corpus.annotations.failures.size()},
                       {"network_calls", literature.network_calls() + annotation.network_calls()},
                       {"cache_hits", literature.cache_hits() + annotation.cache_hits()}};
    emit(result, out.reports() / "ingest_report.json", dump(report));
    return result;
}

StageResult run_build(const RunConfig& config, const fs::path& corpus_path) {
    StageResult result;
    const OutputLayout out{config.output_dir};
    const auto corpus = ingest::load_corpus(corpus_path);
    auto policy = config.filter;
    if (config.blocklist) policy.generic_blocklist = build::load_blocklist(*config.blocklist);
    spdlog::info("event=build_start relations={} entities={}", corpus.annotations.relations.size(),
                 corpus.annotations.entities.size());
    const auto built = build::run_build(corpus.annotations.relations, corpus.annotations.entities, policy, config.anchor);
    emit(result, out.graphs() / "extended_graph.json", serialize(built.extended));
    emit(result, out.graphs() / "highconf_graph.json", serialize(built.high_confidence));
    emit(result, out.reports() / "build_report.json", built.report.to_json());
    for (const auto& id : built.report.prune.not_found) warn(result, "blocklisted entity not in graph: " + id);
    return result;
}

StageResult run_validate(const RunConfig& config, const ValidateRequest& req) {
    StageResult result;
    const OutputLayout out{config.output_dir};
    const std::string label =
        req.label.empty() ? req.graph.stem().string() + "_" + req.reference.name : req.label;

    // Checksums are verified before anything is loaded.
    const ChecksumStatus checksum{req.reference.name, req.reference.path, req.reference.sha256,
                                  sha256_file(req.reference.path)};
    if (!checksum.matches()) {
        warn(result, fmt::format("reference {} differs from its pinned snapshot (expected {}, found {}); results "
                                 "reflect database drift",
                                 req.reference.name, checksum.expected, checksum.actual));
    }

    KnowledgeGraph kg = load_graph_file(req.graph);
    std::optional<std::string> module_of_anchor;
    if (req.module_only) {
        const auto anchor = resolve_anchor(kg, config.anchor);
        const auto partition = analyze::leiden(kg, config.resolution, config.seed);
        kg = analyze::module_of(kg, partition, anchor);
        module_of_anchor = anchor;
        spdlog::info("event=module_restrict anchor={} nodes={} edges={}", anchor, kg.num_nodes(), kg.num_edges());
    }
    const auto loaded = load_reference(req.reference, config, kg);
    const auto classification = validate::classify_edges(kg, loaded.graph);
    const auto coverage = validate::path_coverage(kg, classification);
    const auto overlay = validate::overlay_export(kg, loaded.graph, classification, coverage);
    if (classification.no_shared_nodes) warn(result, "graph and reference " + req.reference.name + " share no node");

    OrderedJson report;
    report["label"] = label;
    report["graph"] = {{"path", display_path(req.graph, out.root)},
                       {"nodes", kg.num_nodes()},
                       {"edges", kg.num_edges()},
                       {"module_of", module_of_anchor ? OrderedJson(*module_of_anchor) : OrderedJson(nullptr)}};
    report["reference"] = {{"name", req.reference.name},
                           {"kind", std::string(ref::to_string(req.reference.kind))},
                           {"format", std::string(to_string(req.reference.format))},
                           {"source", loaded.graph.source()},
                           {"nodes", loaded.graph.num_nodes()},
                           {"edges", loaded.graph.num_edges()},
                           {"rows", loaded.report.rows},
                           {"rows_kept", loaded.report.rows_kept},
                           {"unmapped", loaded.report.unmapped},
                           {"sha256_expected", checksum.expected},
                           {"sha256_actual", checksum.actual},
                           {"drift", !checksum.matches()}};
    report["classification"] = OrderedJson::parse(validate::classification_to_json(classification));
    report["coverage"] = {{"covered", coverage.covered},
                          {"uncovered", coverage.uncovered},
                          {"average_length", coverage.average_length ? OrderedJson(*coverage.average_length)
                                                                     : OrderedJson(nullptr)}};
    emit(result, out.reports() / (label + "_validation.json"), dump(report));
    emit(result, out.reports() / (label + "_classification.csv"), validate::classification_to_csv(classification));
    emit(result, out.reports() / (label + "_coverage.json"), validate::coverage_to_json(coverage));
    emit(result, out.reports() / (label + "_coverage.csv"), validate::coverage_to_csv(coverage));
    emit(result, out.graphs() / (label + "_overlay.json"), validate::overlay_to_json(overlay));
    HtmlOptions html;
    html.seed = config.seed;
    html.render_cap = config.render_cap;
    emit(result, out.html() / (label + "_overlay.html"), emit_html_view(overlay, label, html).html);
    spdlog::info("event=validate label={} green={} red={} blue={} covered={}", label, classification.green.size(),
                 classification.red.size(), classification.blue.size(), coverage.covered);
    return result;
}

StageResult run_analyze(const RunConfig& config, const AnalyzeRequest& req) {
    StageResult result;
    const OutputLayout out{config.output_dir};
    const std::string label = req.label.empty() ? req.graph.stem().string() : req.label;
    const KnowledgeGraph g = load_graph_file(req.graph);
    const std::string anchor = resolve_anchor(g, config.anchor);
    spdlog::info("event=analyze_start label={} nodes={} edges={} anchor={}", label, g.num_nodes(), g.num_edges(), anchor);

    FigureInputs fig;
    fig.top_k = config.top_k;

    if (req.metrics) {
        const auto m = analyze::characterize(g, anchor);
        if (m.warning) warn(result, *m.warning);
        const auto lc = analyze::local_clustering_percentile(g, anchor);
        auto j = OrderedJson::parse(analyze::metrics_to_json(m));
        j["anchor"] = {{"id", anchor},
                       {"local_clustering", lc.coefficient},
                       {"percentile", lc.percentile ? OrderedJson(*lc.percentile) : OrderedJson(nullptr)}};
        emit(result, out.reports() / (label + "_metrics.json"), dump(j));
        fig.metrics = m;
        fig.extra_metrics.emplace_back("anchor_local_clustering", format_double(lc.coefficient, 6));
        fig.extra_metrics.emplace_back("anchor_clustering_percentile",
                                       lc.percentile ? format_double(*lc.percentile * 100, 2) : "");
    }
    if (req.communities) {
        const auto p = req.algorithm == analyze::CommunityAlgorithm::leiden
                           ? analyze::leiden(g, config.resolution, config.seed)
                           : analyze::fast_greedy(g);
        emit(result, out.reports() / (label + "_communities.json"), analyze::partition_to_json(p));
        for (const auto& f : analyze::export_gene_lists(g, p, out.reports() / (label + "_modules"))) {
            result.artifacts.push_back(f);
        }
        const auto module = analyze::module_of(g, p, anchor);
        emit(result, out.graphs() / (label + "_anchor_module.json"), serialize(module));
        fig.extra_metrics.emplace_back("algorithm", std::string(analyze::to_string(p.algorithm)));
        fig.extra_metrics.emplace_back("modularity", p.modularity_undefined ? "" : format_double(p.modularity, 6));
        fig.extra_metrics.emplace_back("communities", std::to_string(p.num_communities()));
        fig.extra_metrics.emplace_back("anchor_module_nodes", std::to_string(module.num_nodes()));
    }
    if (req.cohesion) {
        const auto core = analyze::max_kcore_of(g, anchor);
        const auto cliques = analyze::max_cliques_containing(g, anchor);
        OrderedJson j;
        j["anchor"] = anchor;
        std::vector<std::string> core_nodes;
        for (const auto& [id, n] : core.subgraph.nodes()) core_nodes.push_back(id);
        j["kcore"] = {{"k", core.k}, {"size", core_nodes.size()}, {"nodes", core_nodes}};
        j["cliques"] = {{"count", cliques.size()},
                        {"size", cliques.empty() ? 0 : cliques.front().size()},
                        {"members", cliques}};
        emit(result, out.reports() / (label + "_cohesion.json"), dump(j));
        emit(result, out.graphs() / (label + "_kcore.json"), serialize(core.subgraph));
        fig.extra_metrics.emplace_back("anchor_kcore_index", std::to_string(core.k));
        fig.extra_metrics.emplace_back("anchor_kcore_size", std::to_string(core_nodes.size()));
        fig.extra_metrics.emplace_back("anchor_max_cliques", std::to_string(cliques.size()));
        fig.extra_metrics.emplace_back("anchor_max_clique_size",
                                       std::to_string(cliques.empty() ? 0 : cliques.front().size()));
    }
    if (req.centrality) {
        fig.ppr = analyze::rank_scores("ppr", g, analyze::personalized_pagerank(g, anchor, config.centrality), anchor);
        const auto katz = analyze::personalized_katz(g, anchor, config.centrality);
        fig.katz = analyze::rank_scores("katz", g, katz.scores, anchor);
        auto kj = ranking_json(fig.katz);
        kj["lambda_max"] = katz.lambda_max;
        kj["alpha"] = katz.alpha;
        kj["iterations"] = katz.iterations;
        emit(result, out.rankings() / (label + "_ppr.json"), dump(ranking_json(fig.ppr)));
        emit(result, out.rankings() / (label + "_katz.json"), dump(kj));
    }
    if (req.hetesim) {
        const auto all = analyze::rank_scores("hetesim", g, analyze::hetesim(g, analyze::MetaPath{}, anchor));
        analyze::RankingTable nonzero{"hetesim", {}};
        for (const auto& r : all.rows) {
            if (r.score > 0) nonzero.rows.push_back(r);
        }
        emit(result, out.rankings() / (label + "_hetesim.json"), dump(ranking_json(nonzero)));
        fig.hetesim.rows.assign(nonzero.rows.begin(),
                                nonzero.rows.begin() + static_cast<std::ptrdiff_t>(std::min(config.top_k, nonzero.rows.size())));
        fig.extra_metrics.emplace_back("hetesim_nonzero_chemicals", std::to_string(nonzero.rows.size()));
    }
    if (req.similarity) {
        analyze::SimilarityOptions opts;
        opts.top_q = config.similarity_top_q;
        fig.disease_similarity = analyze::entity_similarity(g, Category::disease, anchor, opts);
        fig.disease_similarity.metric = "disease_similarity";
        emit(result, out.rankings() / (label + "_disease_similarity.json"), dump(ranking_json(fig.disease_similarity)));
        const auto chem = g.resolve(config.similarity_chemical);
        if (chem && g.node(*chem).category == Category::chemical) {
            fig.chemical_similarity = analyze::entity_similarity(g, Category::chemical, *chem, opts);
            fig.chemical_similarity.metric = "chemical_similarity";
            emit(result, out.rankings() / (label + "_chemical_similarity.json"),
                 dump(ranking_json(fig.chemical_similarity)));
        } else {
            warn(result, "similarity chemical '" + config.similarity_chemical + "' is not a chemical node of " + label);
        }
    }
    for (const auto& p : write_figure_tables(emit_figure_tables(fig), out.rankings(), label)) {
        result.artifacts.push_back(p);
    }
    return result;
}

StageResult run_report(const RunConfig& config, const ReportRequest& req) {
    StageResult result;
    const OutputLayout out{config.output_dir};
    const std::string label = req.label.empty() ? req.input.stem().string() : req.label;
    const std::string text = read_text_file(req.input);
    Json probe;
    try {
        probe = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(req.input.string() + ": not valid JSON: " + e.what());
    }
    bool is_overlay = false;
    if (probe.contains("edges") && probe["edges"].is_array() && !probe["edges"].empty()) {
        is_overlay = probe["edges"][0].contains("edge_class");
    }
    HtmlOptions opts;
    opts.seed = config.seed;
    opts.render_cap = config.render_cap;
    opts.module_selector = req.module_selector;
    opts.resolution = config.resolution;
    HtmlResult html;
    if (is_overlay) {
        View v;
        v.title = label;
        v.classified = true;
        for (const auto& n : probe.at("nodes")) {
            const auto cat = parse_category(n.at("category").get<std::string>());
            if (!cat) throw ParseError(req.input.string() + ": unknown category");
            v.nodes.push_back({n.at("id").get<std::string>(), n.value("name", ""), *cat});
        }
        for (const auto& e : probe.at("edges")) {
            v.edges.push_back({e.at("source").get<std::string>(), e.at("target").get<std::string>(),
                               e.at("edge_class").get<std::string>(), e.value("weight", 1.0)});
        }
        if (v.nodes.size() > config.render_cap) {
            throw ConfigError(fmt::format("overlay has {} nodes, over the render cap of {}", v.nodes.size(),
                                          config.render_cap));
        }
        html = render_html(v, config.seed);
    } else {
        html = emit_html_view(load_graph_file(req.input), label, opts);
    }
    if (html.warning) warn(result, *html.warning);
    emit(result, out.html() / (label + ".html"), html.html);
    return result;
}

StageResult run_pipeline(const RunConfig& config, const std::optional<fs::path>& corpus) {
    StageResult result;
    const OutputLayout out{config.output_dir};
    fs::path corpus_path = corpus ? *corpus : out.graphs() / "corpus.json";
    if (!corpus) result.merge(run_ingest(config));
    result.merge(run_build(config, corpus_path));

    const fs::path extended = out.graphs() / "extended_graph.json";
    const fs::path highconf = out.graphs() / "highconf_graph.json";
    for (const auto& g : {extended, highconf}) {
        AnalyzeRequest a;
        a.graph = g;
        result.merge(run_analyze(config, a));
    }
    for (const auto& snapshot : config.references) {
        result.merge(run_validate(config, {extended, snapshot, true, ""}));
        result.merge(run_validate(config, {highconf, snapshot, false, ""}));
    }
    for (const auto& g : {extended, highconf}) {
        result.merge(run_report(config, {g, config.anchor, ""}));
    }
    return result;
}

} // namespace litkg::report
