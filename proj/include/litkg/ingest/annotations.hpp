#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "litkg/ingest/service_client.hpp"
#include "litkg/model.hpp"

namespace litkg::ingest {

struct EntityRef {
    std::string id;
    std::string name;
    Category category = Category::gene;

    bool operator==(const EntityRef&) const = default;
};

/// One extracted relation in one article. `kind` is the normalized
/// lower-case relation type, which may be a type the graph never stores
/// (e.g. "comparison").
struct RawRelation {
    EntityRef a;
    EntityRef b;
    std::string kind;
    std::string article_id;
    double confidence = 0.0;

    bool operator==(const RawRelation&) const = default;
};

struct BatchFailure {
    std::size_t batch_index = 0;
    std::vector<std::string> article_ids;
    std::string message;
};

struct AnnotationResult {
    std::vector<EntityNode> entities;
    std::vector<RawRelation> relations;
    std::vector<BatchFailure> failures;
};

/// Maps an annotation-service identifier onto the namespaced ids used by
/// EntityNode ("3081" gene -> "GENE:3081", "D000474" -> "MESH:D000474",
/// variants -> "VARIANT:...").
std::optional<std::string> normalize_entity_id(std::string_view identifier, Category category);

/// Parent gene id encoded in a variant identifier ("...;CorrespondingGene:3081;...").
std::optional<std::string> variant_parent_gene(std::string_view identifier);

/// Parses one BioC-JSON export body (wrapped "PubTator3" array, plain array,
/// single document, or newline-delimited documents) and appends to `out`.
void parse_bioc_documents(std::string_view body, AnnotationResult& out);

/// Client for a PubTator3 style `publications/export/biocjson` endpoint.
class AnnotationClient {
public:
    explicit AnnotationClient(ServiceClient& client, std::size_t batch_size = 100)
        : client_(client), batch_size_(batch_size) {}

    /// Entities deduplicated by id, relations by (pair, kind, article). A
    /// failed batch is recorded and the remaining batches still run.
    AnnotationResult fetch_annotations(const std::vector<std::string>& article_ids);

private:
    ServiceClient& client_;
    std::size_t batch_size_;
};

/// Sorts and deduplicates both lists in place (entities merged by id).
void canonicalize(AnnotationResult& result);

} // namespace litkg::ingest
