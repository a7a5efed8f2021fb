#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "litkg/model.hpp"

namespace litkg::analyze {

struct LocalClustering {
    double coefficient = 0.0;
    /// Fraction of degree >= 2 nodes with a strictly smaller coefficient;
    /// undefined when the node itself has degree < 2.
    std::optional<double> percentile;
};

struct MetricsRecord {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    long diameter = 0;
    long radius = 0;
    std::vector<std::string> center_nodes;
    /// Closeness (n-1)/sum of distances, reported for center nodes only.
    std::map<std::string, double> center_closeness;
    double average_clustering = 0.0;
    double transitivity = 0.0;
    /// Undefined when every edge joins nodes of equal degree.
    std::optional<double> degree_assortativity;
    std::map<std::size_t, std::size_t> degree_histogram;
    std::map<std::string, double> local_clustering;
    /// Set when the input was disconnected and the metrics describe one component.
    std::optional<std::string> warning;
};

/// Exact diameter and eccentricity center (bounded eccentricity search),
/// clustering, transitivity and degree assortativity on the unweighted graph.
/// A disconnected graph is reduced to the component of `anchor`, or to its
/// largest component when no anchor is given.
MetricsRecord characterize(const KnowledgeGraph& graph, const std::optional<std::string>& anchor = std::nullopt);

LocalClustering local_clustering_percentile(const KnowledgeGraph& graph, const std::string& node);

std::string metrics_to_json(const MetricsRecord& m);

} // namespace litkg::analyze
