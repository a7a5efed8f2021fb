#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace litkg {

enum class Category { gene, disease, chemical, variant };

/// Relation types carried by knowledge-graph edges. `other` holds annotation
/// types outside the six published ones (e.g. from third-party fixtures).
enum class RelationKind {
    positive_correlation,
    negative_correlation,
    association,
    cotreatment,
    bind,
    drug_interaction,
    other,
};

std::string_view to_string(Category c);
std::string_view to_string(RelationKind k);

/// Accepts canonical names plus the spellings used by annotation services
/// ("Gene", "Disease", "DNAMutation", "Positive_Correlation", ...).
std::optional<Category> parse_category(std::string_view s);
std::optional<RelationKind> parse_relation_kind(std::string_view s);

/// Unordered node pair stored with `first < second`.
struct NodePair {
    std::string first;
    std::string second;

    NodePair() = default;
    NodePair(std::string a, std::string b);

    bool contains(std::string_view id) const { return first == id || second == id; }
    const std::string& other(std::string_view id) const { return first == id ? second : first; }

    auto operator<=>(const NodePair&) const = default;
    bool operator==(const NodePair&) const = default;
};

struct EntityNode {
    std::string id;
    std::string name;
    Category category = Category::gene;
    std::set<std::string> aliases;
    /// Variants only: id of the gene the variant belongs to, when known.
    std::optional<std::string> parent_gene;

    bool operator==(const EntityNode&) const = default;
};

/// 1 - 2^-n for n >= 1 supporting articles.
double edge_weight(long long n);

struct RelationEdge {
    NodePair endpoints;
    std::set<RelationKind> kinds;
    /// article id -> per-article confidence; NaN when the source did not record one.
    std::map<std::string, double> evidence;
    double weight = 0.0;

    std::size_t support() const { return evidence.size(); }
    /// Single kind name, or "multitype" when more than one kind is present.
    std::string kind_label() const;
    /// Mean of the recorded confidences; NaN when none are recorded.
    double mean_confidence() const;

    bool operator==(const RelationEdge& o) const;
};

/// Simple undirected weighted graph over typed entities. Nodes and edges are
/// kept in id order so iteration (and serialization) is canonical.
class KnowledgeGraph {
public:
    using NodeMap = std::map<std::string, EntityNode>;
    using EdgeMap = std::map<NodePair, RelationEdge>;

    /// Inserts a node, or merges aliases into an existing node of the same
    /// category. A category clash throws ValidationError.
    void add_node(EntityNode node);
    void remove_node(const std::string& id);

    bool has_node(std::string_view id) const;
    const EntityNode& node(std::string_view id) const;
    const EntityNode* find_node(std::string_view id) const;
    EntityNode& mutable_node(std::string_view id);

    /// Adds one piece of evidence for `(a, b)`. Re-adding an article that is
    /// already recorded only extends the kind set; the weight is always
    /// recomputed from the number of distinct articles.
    const RelationEdge& merge_evidence(const std::string& a, const std::string& b, RelationKind kind,
                                       const std::string& article_id, double confidence);

    /// Unions a whole edge into the graph (kinds and evidence merged).
    const RelationEdge& insert_edge(const RelationEdge& edge);
    void remove_edge(const NodePair& pair);

    bool has_edge(std::string_view a, std::string_view b) const;
    const RelationEdge* find_edge(std::string_view a, std::string_view b) const;

    const NodeMap& nodes() const { return nodes_; }
    const EdgeMap& edges() const { return edges_; }
    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    const std::set<std::string>& neighbors(std::string_view id) const;
    std::size_t degree(std::string_view id) const { return neighbors(id).size(); }

    std::map<Category, std::size_t> category_counts() const;

    /// Subgraph induced by `ids` (unknown ids are ignored).
    KnowledgeGraph induced_subgraph(const std::set<std::string>& ids) const;

    /// Resolves an anchor given either as an id or as a (case-insensitive) name.
    std::optional<std::string> resolve(std::string_view id_or_name) const;

    /// Human-readable descriptions of every invariant violation.
    std::vector<std::string> invariant_violations() const;

    std::map<std::string, std::string>& provenance() { return provenance_; }
    const std::map<std::string, std::string>& provenance() const { return provenance_; }

    /// Graph equality: nodes, edges, kinds, evidence and weights. Provenance is ignored.
    bool operator==(const KnowledgeGraph& o) const;

private:
    RelationEdge& edge_slot(const std::string& a, const std::string& b);

    NodeMap nodes_;
    EdgeMap edges_;
    std::map<std::string, std::set<std::string>, std::less<>> adjacency_;
    std::map<std::string, std::string> provenance_;
};

/// Free-function form of KnowledgeGraph::merge_evidence on a copy.
KnowledgeGraph merge_evidence(KnowledgeGraph graph, const NodePair& pair, RelationKind kind,
                              const std::string& article_id, double confidence);

} // namespace litkg
