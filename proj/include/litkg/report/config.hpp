#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "litkg/analyze/centrality.hpp"
#include "litkg/build.hpp"
#include "litkg/ingest/query.hpp"
#include "litkg/ingest/service_client.hpp"
#include "litkg/refgraph.hpp"

namespace litkg::report {

enum class ReferenceFormat { string_tsv, dgidb_tsv, kegg_kgml, reference_json };

std::string_view to_string(ReferenceFormat f);
std::optional<ReferenceFormat> parse_reference_format(std::string_view s);

/// One pinned reference snapshot.
struct ReferenceSnapshot {
    std::string name;
    ref::ReferenceKind kind = ref::ReferenceKind::gene_gene;
    ReferenceFormat format = ReferenceFormat::string_tsv;
    std::filesystem::path path;
    /// Expected SHA-256 (hex) of the file; empty when not pinned.
    std::string sha256;
};

struct ChecksumStatus {
    std::string name;
    std::filesystem::path path;
    std::string expected;
    std::string actual;

    bool pinned() const { return !expected.empty(); }
    bool matches() const { return !pinned() || expected == actual; }
};

struct RunConfig {
    ingest::ServiceConfig literature{"https://eutils.ncbi.nlm.nih.gov/entrez/eutils", "", 3.0, 3, 500, 30, {}};
    ingest::ServiceConfig annotation{"https://www.ncbi.nlm.nih.gov/research/pubtator3-api", "", 3.0, 3, 500, 30, {}};
    std::optional<std::filesystem::path> cache_dir;
    build::FilterPolicy filter;
    ingest::RetrievalPolicy retrieval;
    analyze::CentralityParams centrality;

    std::vector<std::string> initial_seeds{"Alkaptonuria", "HGD", "homogentisic acid"};
    double expansion_threshold = 0.7;
    std::vector<std::string> expansion_exclusions{"Death", "Disease"};
    std::size_t annotation_batch_size = 100;

    std::string anchor = "Alkaptonuria";
    std::string similarity_chemical = "nitisinone";
    double resolution = 1.0;
    std::size_t top_k = 20;
    std::size_t render_cap = 5000;
    std::optional<std::size_t> similarity_top_q;

    std::optional<std::filesystem::path> blocklist;
    std::optional<std::filesystem::path> drug_aliases;
    std::optional<std::filesystem::path> compound_aliases;
    std::vector<ReferenceSnapshot> references;

    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 42;

    /// Throws ConfigError naming the first invalid field or missing path.
    void validate() const;
};

using Environment = std::map<std::string, std::string>;

/// The process environment restricted to LITKG_* variables.
Environment litkg_environment();

/// Parses a config document. Relative paths resolve against `base_dir`.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir);

/// Applies LITKG_* overrides (e.g. LITKG_ANCHOR, LITKG_SEED, LITKG_OUTPUT_DIR,
/// LITKG_LITERATURE_API_KEY, LITKG_PPR_DAMPING). Unknown names are returned.
std::vector<std::string> apply_environment(RunConfig& config, const Environment& env);

/// Reads the file (missing file: ConfigError with the path), applies the
/// environment and validates.
RunConfig load_run_config(const std::filesystem::path& path, const Environment& env = litkg_environment());

/// Defaults plus environment, for runs without a config file.
RunConfig default_run_config(const Environment& env = litkg_environment());

std::vector<ChecksumStatus> verify_checksums(const RunConfig& config);

/// Serialized effective configuration (API keys redacted).
std::string config_to_json(const RunConfig& config);

/// Loads a snapshot with the configured alias tables. Gene references are
/// queried with the genes of `kg`.
ref::LoadResult load_reference(const ReferenceSnapshot& snapshot, const RunConfig& config, const KnowledgeGraph& kg);

} // namespace litkg::report
