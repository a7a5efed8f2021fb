#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

#include "litkg/analyze/centrality.hpp"
#include "litkg/model.hpp"

namespace litkg::analyze {

struct MetaPath {
    std::array<Category, 3> categories{Category::chemical, Category::gene, Category::disease};

    MetaPath mirrored() const { return {{categories[2], categories[1], categories[0]}}; }
    void validate() const;
};

/// HeteSim along a length-2 meta-path split at its gene midpoint: cosine of
/// the row-normalized weight vectors of each source-category node and of
/// `target` over their gene neighbors. Scores every node of the first category.
ScoreMap hetesim(const KnowledgeGraph& graph, const MetaPath& path, const std::string& target);

struct SimilarityOptions {
    /// Keep only the q strongest associations per node and profile.
    std::optional<std::size_t> top_q;
};

/// IDF-weighted cosine similarity of `reference` to every other node of
/// `category` (disease or chemical). Profiles: genes, plus chemicals for
/// diseases or diseases for chemicals; defined profile scores are averaged.
RankingTable entity_similarity(const KnowledgeGraph& graph, Category category, const std::string& reference,
                               const SimilarityOptions& options = {});

/// Similarity of one pair under the same weighting (a node with itself included).
double entity_similarity_between(const KnowledgeGraph& graph, Category category, const std::string& a,
                                 const std::string& b, const SimilarityOptions& options = {});

} // namespace litkg::analyze
