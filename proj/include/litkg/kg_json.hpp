#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "litkg/model.hpp"

namespace litkg {

/// Field names accepted when reading a graph document. The canonical mapping
/// matches the writer exactly; `published_fixtures()` also accepts the
/// node-link spellings used by common graph libraries ("links", "type",
/// "relation", "pmid", ...).
struct FieldMapping {
    std::vector<std::string> nodes{"nodes"};
    std::vector<std::string> edges{"edges"};
    std::vector<std::string> node_id{"id"};
    std::vector<std::string> node_name{"name"};
    std::vector<std::string> node_category{"category"};
    std::vector<std::string> node_aliases{"aliases"};
    std::vector<std::string> source{"source"};
    std::vector<std::string> target{"target"};
    std::vector<std::string> kinds{"kinds"};
    std::vector<std::string> articles{"pmids"};
    std::vector<std::string> confidences{"confidences"};
    std::vector<std::string> weight{"weight"};
    /// Explicit supporting-article count, used when article ids are absent.
    std::vector<std::string> support_count{};
    /// Whether an edge without article ids may be reconstructed from its
    /// support count or weight (placeholder ids "unlisted:1".."unlisted:n").
    bool allow_weight_only_edges = false;

    static FieldMapping canonical() { return {}; }
    static FieldMapping published_fixtures();
};

/// Canonical JSON: nodes ordered by id, edges by endpoint pair, fixed key order,
/// shortest round-trip doubles. Equal graphs produce identical bytes.
std::string serialize(const KnowledgeGraph& graph);

/// Strict reader for the canonical schema.
KnowledgeGraph deserialize(std::string_view text);

KnowledgeGraph deserialize(std::string_view text, const FieldMapping& mapping);

/// Reads a graph file, accepting both the canonical schema and the published
/// fixture spellings.
KnowledgeGraph load_graph_file(const std::filesystem::path& path);
void save_graph_file(const KnowledgeGraph& graph, const std::filesystem::path& path);

} // namespace litkg
