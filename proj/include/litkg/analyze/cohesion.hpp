#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "litkg/model.hpp"

namespace litkg::analyze {

struct KCoreResult {
    std::size_t k = 0;
    KnowledgeGraph subgraph;
};

/// Core number of every node (Batagelj-Zaversnik peeling).
std::map<std::string, std::size_t> core_numbers(const KnowledgeGraph& graph);

/// k = core number of `node`; subgraph = its connected component within the k-core.
KCoreResult max_kcore_of(const KnowledgeGraph& graph, const std::string& node);

/// All maximum-size maximal cliques containing `node`, each sorted by id,
/// the list sorted lexicographically.
std::vector<std::vector<std::string>> max_cliques_containing(const KnowledgeGraph& graph, const std::string& node);

} // namespace litkg::analyze
