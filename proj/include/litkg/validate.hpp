#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litkg/model.hpp"
#include "litkg/refgraph.hpp"

namespace litkg::validate {

enum class EdgeClass { green, red, blue, path };

std::string_view to_string(EdgeClass c);

/// Overlap of a KG with a reference graph over their shared nodes.
struct EdgeClassification {
    ref::ReferenceKind kind = ref::ReferenceKind::gene_gene;
    std::set<std::string> shared_nodes;
    std::set<NodePair> green;  // in both
    std::set<NodePair> red;    // KG only
    std::set<NodePair> blue;   // reference only
    /// Set when the graphs share no node.
    bool no_shared_nodes = false;

    std::size_t total() const { return green.size() + red.size() + blue.size(); }
    /// Share of `c` among all classified edges, in percent (0 when empty).
    double percent(EdgeClass c) const;
    const std::set<NodePair>& edges(EdgeClass c) const;
};

EdgeClassification classify_edges(const KnowledgeGraph& kg, const ref::ReferenceGraph& reference);

struct CoveredEdge {
    NodePair edge;
    /// Node sequence from edge.first to edge.second; empty when uncovered.
    std::vector<std::string> path;

    bool covered() const { return !path.empty(); }
    std::size_t length() const { return path.empty() ? 0 : path.size() - 1; }
};

struct PathCoverageReport {
    std::vector<CoveredEdge> entries;
    std::size_t covered = 0;
    std::size_t uncovered = 0;
    /// Mean path length in edges over covered entries; nullopt when none.
    std::optional<double> average_length;
};

/// Unweighted shortest path in `kg` for every blue edge. Among equally short
/// paths the lexicographically smallest node sequence is chosen.
PathCoverageReport path_coverage(const KnowledgeGraph& kg, const EdgeClassification& classification);

struct OverlayEdge {
    EdgeClass cls = EdgeClass::green;
    std::optional<RelationEdge> relation;  // absent for reference-only edges
    std::set<std::string> reference_tags;
};

struct Overlay {
    std::map<std::string, EntityNode> nodes;
    std::map<NodePair, OverlayEdge> edges;

    std::map<EdgeClass, std::size_t> class_counts() const;
};

/// Classified edges plus the KG edges on covering paths (class `path`, unless
/// already green or red). Node data comes from the KG, else from the reference.
Overlay overlay_export(const KnowledgeGraph& kg, const ref::ReferenceGraph& reference,
                       const EdgeClassification& classification, const PathCoverageReport& coverage);

/// KG JSON schema plus a per-edge "edge_class".
std::string overlay_to_json(const Overlay& overlay);

std::string classification_to_json(const EdgeClassification& c);
/// Rows: class,source,target.
std::string classification_to_csv(const EdgeClassification& c);
std::string coverage_to_json(const PathCoverageReport& r);
/// Rows: source,target,length,path (path nodes joined by ';', empty if uncovered).
std::string coverage_to_csv(const PathCoverageReport& r);

} // namespace litkg::validate
