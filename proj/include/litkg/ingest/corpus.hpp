#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "litkg/ingest/annotations.hpp"
#include "litkg/ingest/pubmed.hpp"
#include "litkg/ingest/query.hpp"

namespace litkg::ingest {

/// Everything retrieved by the two-stage procedure; the input of graph building.
struct Corpus {
    std::vector<std::string> initial_seeds;
    std::vector<std::string> expanded_seeds;
    std::vector<std::string> initial_articles;
    /// Articles found by the expanded seeds and not already in the initial set.
    std::vector<std::string> expanded_articles;
    AnnotationResult annotations;
};

/// Canonical JSON (entities by id, relations by (a, b, kind, article)).
std::string corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(std::string_view text);

struct RetrievalPlan {
    std::vector<std::string> seeds;
    RetrievalPolicy policy;
    double expansion_threshold = 0.7;
    std::set<std::string> exclusions;
};

/// Ids of entities whose name or alias equals one of `terms` (case-insensitive).
std::set<std::string> resolve_terms(const std::vector<EntityNode>& entities, const std::vector<std::string>& terms);

/// Initial seeds -> articles -> annotations -> expanded seeds -> new articles
/// -> annotations. Both annotation sets are merged and canonicalized.
Corpus retrieve_corpus(LiteratureClient& literature, AnnotationClient& annotations, const RetrievalPlan& plan);

Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

} // namespace litkg::ingest
