#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "litkg/analyze/community.hpp"
#include "litkg/report/config.hpp"

namespace litkg::report {

/// `<out>/{graphs,reports,rankings,html}`.
struct OutputLayout {
    std::filesystem::path root;

    std::filesystem::path graphs() const { return root / "graphs"; }
    std::filesystem::path reports() const { return root / "reports"; }
    std::filesystem::path rankings() const { return root / "rankings"; }
    std::filesystem::path html() const { return root / "html"; }
};

struct StageResult {
    std::vector<std::filesystem::path> artifacts;
    std::vector<std::string> warnings;

    void merge(StageResult other);
};

/// Two-stage retrieval against the configured services; writes
/// graphs/corpus.json and reports/ingest_report.json.
StageResult run_ingest(const RunConfig& config);

/// Writes graphs/extended_graph.json, graphs/highconf_graph.json and reports/build_report.json.
StageResult run_build(const RunConfig& config, const std::filesystem::path& corpus);

struct ValidateRequest {
    std::filesystem::path graph;
    ReferenceSnapshot reference;
    /// Restrict the KG to the Leiden module of the anchor first.
    bool module_only = false;
    /// Artifact prefix; defaults to `<graph stem>_<reference name>`.
    std::string label;
};

/// Classification, path coverage and overlay (JSON, CSV and HTML).
StageResult run_validate(const RunConfig& config, const ValidateRequest& request);

struct AnalyzeRequest {
    std::filesystem::path graph;
    bool metrics = true;
    bool communities = true;
    bool cohesion = true;
    bool centrality = true;
    bool hetesim = true;
    bool similarity = true;
    analyze::CommunityAlgorithm algorithm = analyze::CommunityAlgorithm::leiden;
    /// Artifact prefix; defaults to the graph stem.
    std::string label;
};

/// Reports per selected analysis plus the six figure tables under rankings/.
StageResult run_analyze(const RunConfig& config, const AnalyzeRequest& request);

struct ReportRequest {
    /// A graph file or an overlay written by the validate stage.
    std::filesystem::path input;
    std::optional<std::string> module_selector;
    std::string label;
};

/// html/<label>.html
StageResult run_report(const RunConfig& config, const ReportRequest& request);

/// ingest (unless a corpus is given) -> build -> analyze both graphs ->
/// validate every configured reference -> HTML views of both graphs.
StageResult run_pipeline(const RunConfig& config, const std::optional<std::filesystem::path>& corpus);

} // namespace litkg::report
