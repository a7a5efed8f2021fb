#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "litkg/model.hpp"

namespace litkg::ref {

enum class ReferenceKind { gene_gene, drug_gene, pathway };

std::string_view to_string(ReferenceKind k);
std::optional<ReferenceKind> parse_reference_kind(std::string_view s);

/// Whether a KG edge between categories `a` and `b` is comparable with edges of
/// this reference kind (gene-gene, chemical-gene, or gene/chemical pairs).
bool admits(ReferenceKind kind, Category a, Category b);

struct ReferenceNode {
    std::string name;
    Category category = Category::gene;

    bool operator==(const ReferenceNode&) const = default;
};

/// Curated-database graph used as validation ground truth. Simple and
/// undirected; each edge carries the evidence tags that produced it.
class ReferenceGraph {
public:
    ReferenceGraph() = default;
    ReferenceGraph(ReferenceKind kind, std::string source) : kind_(kind), source_(std::move(source)) {}

    void add_node(const std::string& id, std::string name, Category category);
    /// Adds (or tags) an edge. Self-loops are ignored; endpoints must exist and
    /// their categories must be admitted by the graph kind.
    void add_edge(const std::string& a, const std::string& b, const std::string& tag);

    ReferenceKind kind() const { return kind_; }
    const std::string& source() const { return source_; }
    void set_source(std::string s) { source_ = std::move(s); }

    const std::map<std::string, ReferenceNode>& nodes() const { return nodes_; }
    const std::map<NodePair, std::set<std::string>>& edges() const { return edges_; }
    bool has_node(std::string_view id) const { return nodes_.count(std::string(id)) != 0; }
    bool has_edge(const std::string& a, const std::string& b) const { return edges_.count(NodePair(a, b)) != 0; }
    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    bool operator==(const ReferenceGraph&) const = default;

private:
    ReferenceKind kind_ = ReferenceKind::gene_gene;
    std::string source_;
    std::map<std::string, ReferenceNode> nodes_;
    std::map<NodePair, std::set<std::string>> edges_;
};

/// Case-insensitive key -> KG id mapping read from a two-column TSV.
class AliasTable {
public:
    AliasTable() = default;

    static AliasTable load(const std::filesystem::path& path);

    void add(std::string_view key, std::string id);
    std::optional<std::string> lookup(std::string_view key) const;
    std::size_t size() const { return map_.size(); }

private:
    std::map<std::string, std::string> map_;
};

/// Query genes: symbol -> KG gene id, plus the symbols that could not be mapped.
struct GeneQuery {
    std::map<std::string, std::string> symbol_to_id;
    std::vector<std::string> unmapped;
};

/// Maps symbols through `aliases`. Symbols missing from the table are unmapped.
GeneQuery make_gene_query(const std::vector<std::string>& symbols, const AliasTable& aliases);

/// Gene query built from a KG: every gene node by name, with alias-table
/// overrides applied to the symbol lookup.
GeneQuery gene_query_from_graph(const KnowledgeGraph& graph);

struct LoadReport {
    std::vector<std::string> unmapped;
    std::size_t rows = 0;
    std::size_t rows_kept = 0;
};

struct LoadResult {
    ReferenceGraph graph;
    LoadReport report;
};

struct StringOptions {
    /// Evidence channels that may justify an edge.
    std::set<std::string> channels{"experimental", "database"};
    /// A channel supports the edge when its score exceeds this cutoff.
    double min_channel_score = 0.0;
};

/// STRING interaction export (tab-separated, header row). Nodes are the query
/// genes present in the file; edges need a positive score in an allowed channel.
LoadResult load_string(std::istream& in, const GeneQuery& query, const StringOptions& options = {});
LoadResult load_string(const std::filesystem::path& path, const GeneQuery& query, const StringOptions& options = {});

/// DGIdb interaction export. Drug names go through `drug_aliases`; unmapped
/// drugs keep a "DGIDB:" id and are reported.
LoadResult load_dgidb(std::istream& in, const GeneQuery& query, const AliasTable& drug_aliases = {});
LoadResult load_dgidb(const std::filesystem::path& path, const GeneQuery& query, const AliasTable& drug_aliases = {});

/// KGML pathway. Per reaction: substrate pairs, substrate->product, and
/// substrate->catalyzing enzyme gene. Compounds map through `aliases`
/// ("cpd:C00082" or "C00082"); unmapped ones keep a "KEGG:" id and are reported.
/// Genes map through `aliases`, falling back to "GENE:<entrez>" for "org:<digits>".
LoadResult load_kegg(std::istream& in, const AliasTable& aliases = {});
LoadResult load_kegg(const std::filesystem::path& path, const AliasTable& aliases = {});

std::string to_json(const ReferenceGraph& graph);
ReferenceGraph reference_from_json(std::string_view text);

} // namespace litkg::ref
