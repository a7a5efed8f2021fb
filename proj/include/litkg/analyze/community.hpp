#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "litkg/model.hpp"

namespace litkg::analyze {

enum class CommunityAlgorithm { leiden, fast_greedy };

std::string_view to_string(CommunityAlgorithm a);

struct CommunityPartition {
    /// Node id -> community. Communities are numbered by size (descending),
    /// then by smallest member id.
    std::map<std::string, std::size_t> assignment;
    double modularity = 0.0;
    /// Set when modularity is undefined (no edges); `modularity` is then 0.
    bool modularity_undefined = false;
    CommunityAlgorithm algorithm = CommunityAlgorithm::leiden;
    double resolution = 1.0;
    std::uint64_t seed = 0;

    std::size_t num_communities() const;
    /// Member ids per community, each sorted.
    std::vector<std::vector<std::string>> communities() const;
};

/// Weighted Newman modularity of `assignment` at `resolution`. Zero for an
/// edgeless graph.
double modularity(const KnowledgeGraph& graph, const std::map<std::string, std::size_t>& assignment,
                  double resolution = 1.0);

/// Leiden (local moving, refinement, aggregation) on the weighted graph,
/// repeated until the partition is stable. Deterministic for a fixed seed.
CommunityPartition leiden(const KnowledgeGraph& graph, double resolution = 1.0, std::uint64_t seed = 42);

/// Clauset-Newman-Moore greedy agglomeration on the weighted graph. Merges
/// the pair with the largest positive modularity gain, ties by community id.
CommunityPartition fast_greedy(const KnowledgeGraph& graph);

/// Subgraph induced by the community of `node`.
KnowledgeGraph module_of(const KnowledgeGraph& graph, const CommunityPartition& partition, const std::string& node);

/// Writes module_<idx>.txt per community: gene names, one per line, sorted.
/// A module without genes gets a single comment line.
std::vector<std::filesystem::path> export_gene_lists(const KnowledgeGraph& graph, const CommunityPartition& partition,
                                                     const std::filesystem::path& dir);

std::string partition_to_json(const CommunityPartition& p);

} // namespace litkg::analyze
