#include "litkg/report/cli.hpp"

#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "litkg/error.hpp"
#include "litkg/report/stages.hpp"
#include "litkg/util.hpp"

namespace litkg::report {

namespace fs = std::filesystem;

namespace {

struct Overrides {
    std::string config;
    std::string anchor;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> top_k;
    std::optional<double> damping;
    std::optional<double> resolution;
    std::string log_level = "info";
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Run configuration (JSON)");
    cmd->add_option("--anchor", o.anchor, "Anchor entity (id or name)");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--top-k", o.top_k, "Rows per category in figure tables");
    cmd->add_option("--damping", o.damping, "Personalized PageRank damping");
    cmd->add_option("--resolution", o.resolution, "Leiden resolution");
    cmd->add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off");
}

RunConfig resolve_config(const Overrides& o) {
    const auto env = litkg_environment();
    RunConfig c;
    if (!o.config.empty()) {
        c = load_run_config(o.config, env);
    } else if (const auto it = env.find("LITKG_CONFIG"); it != env.end() && !it->second.empty()) {
        c = load_run_config(it->second, env);
    } else {
        c = default_run_config(env);
    }
    if (!o.anchor.empty()) c.anchor = o.anchor;
    if (o.seed) c.seed = *o.seed;
    if (!o.out.empty()) c.output_dir = o.out;
    if (o.top_k) c.top_k = *o.top_k;
    if (o.damping) c.centrality.ppr_damping = *o.damping;
    if (o.resolution) c.resolution = *o.resolution;
    c.validate();
    return c;
}

void setup_logging(const std::string& level) {
    auto logger = std::make_shared<spdlog::logger>("litkg", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    logger->set_pattern("%Y-%m-%dT%H:%M:%S.%e level=%l %v");
    const auto lvl = spdlog::level::from_str(level);
    if (lvl == spdlog::level::off && level != "off") throw ConfigError("unknown log level: " + level);
    logger->set_level(lvl);
    spdlog::set_default_logger(logger);
}

ReferenceSnapshot pick_reference(const RunConfig& c, const std::string& reference, const std::string& kind,
                                 const std::string& format) {
    for (const auto& r : c.references) {
        if (r.name == reference) return r;
    }
    ReferenceSnapshot snap;
    snap.path = reference;
    if (!fs::is_regular_file(snap.path)) throw ConfigError("reference file not found: " + reference);
    snap.name = snap.path.stem().string();
    for (const auto& r : c.references) {
        if (fs::exists(r.path) && fs::equivalent(r.path, snap.path)) snap.sha256 = r.sha256;
    }
    if (kind.empty()) throw ConfigError("--kind is required with a reference file");
    const auto k = ref::parse_reference_kind(kind);
    if (!k) throw ConfigError("unknown reference kind: " + kind + " (gene_gene, drug_gene, pathway)");
    snap.kind = *k;
    if (!format.empty()) {
        const auto f = parse_reference_format(format);
        if (!f) throw ConfigError("unknown reference format: " + format + " (string, dgidb, kegg, json)");
        snap.format = *f;
    } else if (to_lower(snap.path.extension().string()) == ".xml") {
        snap.format = ReferenceFormat::kegg_kgml;
    } else if (to_lower(snap.path.extension().string()) == ".json") {
        snap.format = ReferenceFormat::reference_json;
    } else {
        snap.format = *k == ref::ReferenceKind::drug_gene ? ReferenceFormat::dgidb_tsv : ReferenceFormat::string_tsv;
    }
    return snap;
}

void require_file(const std::string& path, const char* flag) {
    if (path.empty()) throw ConfigError(std::string(flag) + " is required");
    if (!fs::is_regular_file(path)) throw ConfigError(std::string(flag) + ": file not found: " + path);
}

} // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"litkg: literature-mined knowledge graphs for rare-disease analysis", "litkg"};
    app.require_subcommand(1, 1);

    Overrides o;
    std::string corpus, graph, reference, kind, format, label, module, algorithm = "leiden";
    bool module_only = false;
    bool metrics = false, communities = false, cohesion = false, centrality = false, hetesim = false,
         similarity = false;

    auto* ingest_cmd = app.add_subcommand("ingest", "Retrieve articles and annotations into graphs/corpus.json");
    auto* build_cmd = app.add_subcommand("build", "Build the extended and high-confidence graphs from a corpus");
    build_cmd->add_option("--corpus", corpus, "Corpus file (default <out>/graphs/corpus.json)");
    auto* validate_cmd = app.add_subcommand("validate", "Compare a graph with a reference database graph");
    validate_cmd->add_option("--graph", graph, "Graph file")->required();
    validate_cmd->add_option("--reference", reference, "Reference file or configured snapshot name")->required();
    validate_cmd->add_option("--kind", kind, "gene_gene, drug_gene or pathway");
    validate_cmd->add_option("--format", format, "string, dgidb, kegg or json (default from kind/extension)");
    validate_cmd->add_flag("--module", module_only, "Restrict the graph to the anchor's Leiden module");
    validate_cmd->add_option("--label", label, "Artifact prefix");
    auto* analyze_cmd = app.add_subcommand("analyze", "Characterize and rank a graph");
    analyze_cmd->add_option("--graph", graph, "Graph file")->required();
    analyze_cmd->add_flag("--metrics", metrics, "Characterization metrics");
    analyze_cmd->add_flag("--communities", communities, "Community detection and gene lists");
    analyze_cmd->add_flag("--cohesion", cohesion, "Maximum k-core and cliques of the anchor");
    analyze_cmd->add_flag("--centrality", centrality, "Personalized PageRank and Katz rankings");
    analyze_cmd->add_flag("--hetesim", hetesim, "HeteSim chemical ranking");
    analyze_cmd->add_flag("--similarity", similarity, "Disease and chemical similarity");
    analyze_cmd->add_option("--algorithm", algorithm, "leiden or fast_greedy")
        ->check(CLI::IsMember({"leiden", "fast_greedy"}));
    analyze_cmd->add_option("--label", label, "Artifact prefix");
    auto* report_cmd = app.add_subcommand("report", "Write an HTML view of a graph or overlay");
    report_cmd->add_option("--graph", graph, "Graph or overlay file")->required();
    report_cmd->add_option("--module", module, "Node whose module is rendered when the graph exceeds the cap");
    report_cmd->add_option("--label", label, "Output name");
    auto* pipeline_cmd = app.add_subcommand("pipeline", "ingest, build, analyze, validate and report in sequence");
    pipeline_cmd->add_option("--corpus", corpus, "Start from an existing corpus instead of ingesting");
    for (auto* cmd : {ingest_cmd, build_cmd, validate_cmd, analyze_cmd, report_cmd, pipeline_cmd}) add_common(cmd, o);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUserError;
    }

    try {
        setup_logging(o.log_level);
        const RunConfig config = resolve_config(o);
        const OutputLayout layout{config.output_dir};
        StageResult result;
        std::string name;
        if (ingest_cmd->parsed()) {
            name = "ingest";
            result = run_ingest(config);
        } else if (build_cmd->parsed()) {
            name = "build";
            const fs::path c = corpus.empty() ? layout.graphs() / "corpus.json" : fs::path(corpus);
            require_file(c.string(), "--corpus");
            result = run_build(config, c);
        } else if (validate_cmd->parsed()) {
            name = "validate";
            require_file(graph, "--graph");
            result = run_validate(config, {graph, pick_reference(config, reference, kind, format), module_only, label});
        } else if (analyze_cmd->parsed()) {
            name = "analyze";
            require_file(graph, "--graph");
            AnalyzeRequest req;
            req.graph = graph;
            req.label = label;
            if (metrics || communities || cohesion || centrality || hetesim || similarity) {
                req.metrics = metrics;
                req.communities = communities;
                req.cohesion = cohesion;
                req.centrality = centrality;
                req.hetesim = hetesim;
                req.similarity = similarity;
            }
            req.algorithm = algorithm == "fast_greedy" ? analyze::CommunityAlgorithm::fast_greedy
                                                       : analyze::CommunityAlgorithm::leiden;
            result = run_analyze(config, req);
        } else if (report_cmd->parsed()) {
            name = "report";
            require_file(graph, "--graph");
            ReportRequest req{graph, std::nullopt, label};
            if (!module.empty()) req.module_selector = module;
            result = run_report(config, req);
        } else {
            name = "pipeline";
            std::optional<fs::path> c;
            if (!corpus.empty()) {
                require_file(corpus, "--corpus");
                c = fs::path(corpus);
            }
            result = run_pipeline(config, c);
        }
        out << name << ": wrote " << result.artifacts.size() << " artifact(s) under " << config.output_dir.string();
        if (!result.warnings.empty()) out << " with " << result.warnings.size() << " warning(s)";
        out << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const MissingNodeError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const CategoryError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const InvalidQueryError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const EmptyResultError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
    return kExitUserError;
}

int cli_dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_dispatch(args, std::cout, std::cerr);
}

} // namespace litkg::report
