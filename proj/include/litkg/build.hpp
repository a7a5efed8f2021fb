#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "litkg/ingest/annotations.hpp"
#include "litkg/model.hpp"

namespace litkg::build {

struct FilterPolicy {
    double hi_conf_threshold = 0.7;
    double lo_conf_threshold = 0.5;
    /// "More than three publications".
    std::size_t lo_conf_min_pubs = 4;
    std::set<std::string> drop_kinds{"comparison"};
    /// Names (or ids) of generic entities, matched case-insensitively.
    std::set<std::string> generic_blocklist;
    /// Blocklisted nodes are removed only when their degree reaches this value.
    std::size_t generic_degree_floor = 11;

    void validate() const;
};

/// All raw relations for one (unordered pair, kind).
struct RelationGroup {
    ingest::EntityRef a;
    ingest::EntityRef b;
    std::string kind;
    /// article id -> confidence (max over duplicate records of the same article)
    std::map<std::string, double> articles;
    double mean_confidence = 0.0;

    std::size_t article_count() const { return articles.size(); }
};

/// Groups relations by (pair, kind); mean confidence is taken over every
/// matching record.
std::vector<RelationGroup> group_relations(const std::vector<ingest::RawRelation>& relations);

/// Groups whose kind is not dropped and whose mean confidence exceeds the high
/// threshold, or exceeds the low threshold with enough distinct articles.
std::vector<RelationGroup> filter_relations(const std::vector<ingest::RawRelation>& relations,
                                            const FilterPolicy& policy);
bool retain_group(const RelationGroup& group, const FilterPolicy& policy);

/// Builds a graph from retained groups. `entities` supplies names, aliases and
/// variant parents; ids only seen in relations get their relation-side name.
KnowledgeGraph assemble_graph(const std::vector<RelationGroup>& groups,
                              const std::vector<EntityNode>& entities = {});

/// Merges each variant with a known parent gene into that gene node.
KnowledgeGraph collapse_variants(const KnowledgeGraph& graph);

struct PruneReport {
    struct Removed {
        std::string id;
        std::string name;
        std::size_t degree = 0;
    };
    std::vector<Removed> removed;
    /// Blocklisted nodes kept because their degree is below the floor.
    std::vector<Removed> kept_below_floor;
    std::vector<std::string> not_found;
};

struct PruneResult {
    KnowledgeGraph graph;
    PruneReport report;
};

PruneResult prune_generic(const KnowledgeGraph& graph, const FilterPolicy& policy);

/// Node ids reachable from `start` (inclusive).
std::set<std::string> connected_component(const KnowledgeGraph& graph, const std::string& start);

/// Induced subgraph on the connected component containing `anchor` (id or name).
KnowledgeGraph extract_component(const KnowledgeGraph& graph, const std::string& anchor);

/// Keeps edges with at least `min_support` articles, then the anchor's component.
KnowledgeGraph derive_high_confidence(const KnowledgeGraph& extended, const std::string& anchor,
                                      std::size_t min_support = 2);

struct StageCount {
    std::string stage;
    std::size_t nodes = 0;
    std::size_t edges = 0;
};

struct BuildReport {
    std::vector<StageCount> stages;
    std::size_t raw_relations = 0;
    std::size_t groups_total = 0;
    std::size_t groups_retained = 0;
    PruneReport prune;

    std::string to_json() const;
};

struct BuildResult {
    KnowledgeGraph extended;
    KnowledgeGraph high_confidence;
    BuildReport report;
};

/// filter -> assemble -> collapse variants -> prune -> anchor component,
/// then the high-confidence derivation.
BuildResult run_build(const std::vector<ingest::RawRelation>& relations, const std::vector<EntityNode>& entities,
                      const FilterPolicy& policy, const std::string& anchor);

/// One name per line; blank lines and '#' comments ignored.
std::set<std::string> load_blocklist(const std::filesystem::path& path);

} // namespace litkg::build
