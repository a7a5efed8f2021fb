#include "litkg/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "litkg/error.hpp"
#include "litkg/util.hpp"

namespace litkg {

namespace {

std::string normalize_token(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == ' ' || c == '-') {
            out.push_back('_');
        } else {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

const std::set<std::string> kEmptyNeighbors;

} // namespace

std::string_view to_string(Category c) {
    switch (c) {
    case Category::gene: return "gene";
    case Category::disease: return "disease";
    case Category::chemical: return "chemical";
    case Category::variant: return "variant";
    }
    return "gene";
}

std::string_view to_string(RelationKind k) {
    switch (k) {
    case RelationKind::positive_correlation: return "positive_correlation";
    case RelationKind::negative_correlation: return "negative_correlation";
    case RelationKind::association: return "association";
    case RelationKind::cotreatment: return "cotreatment";
    case RelationKind::bind: return "bind";
    case RelationKind::drug_interaction: return "drug_interaction";
    case RelationKind::other: return "other";
    }
    return "other";
}

std::optional<Category> parse_category(std::string_view s) {
    const std::string t = normalize_token(s);
    if (t == "gene") return Category::gene;
    if (t == "disease") return Category::disease;
    if (t == "chemical") return Category::chemical;
    if (t == "variant" || t == "gene_variant" || t == "dnamutation" || t == "proteinmutation" ||
        t == "snp" || t == "mutation" || t == "dnaacidchange" || t == "proteinacidchange") {
        return Category::variant;
    }
    return std::nullopt;
}

std::optional<RelationKind> parse_relation_kind(std::string_view s) {
    const std::string t = normalize_token(s);
    if (t == "positive_correlation") return RelationKind::positive_correlation;
    if (t == "negative_correlation") return RelationKind::negative_correlation;
    if (t == "association") return RelationKind::association;
    if (t == "cotreatment" || t == "co_treatment") return RelationKind::cotreatment;
    if (t == "bind") return RelationKind::bind;
    if (t == "drug_interaction") return RelationKind::drug_interaction;
    if (t == "other") return RelationKind::other;
    return std::nullopt;
}

NodePair::NodePair(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    first = std::move(a);
    second = std::move(b);
}

double edge_weight(long long n) {
    if (n < 1) {
        throw InvalidEvidenceError("edge weight needs at least one supporting article, got " +
                                   std::to_string(n));
    }
    return 1.0 - std::ldexp(1.0, static_cast<int>(std::min<long long>(n, 2000)) * -1);
}

std::string RelationEdge::kind_label() const {
    if (kinds.size() > 1) return "multitype";
    if (kinds.empty()) return "";
    return std::string(to_string(*kinds.begin()));
}

double RelationEdge::mean_confidence() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& [article, conf] : evidence) {
        if (std::isnan(conf)) continue;
        sum += conf;
        ++n;
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

bool RelationEdge::operator==(const RelationEdge& o) const {
    if (endpoints != o.endpoints || kinds != o.kinds || weight != o.weight) return false;
    if (evidence.size() != o.evidence.size()) return false;
    auto it = o.evidence.begin();
    for (const auto& [article, conf] : evidence) {
        if (article != it->first) return false;
        const bool both_nan = std::isnan(conf) && std::isnan(it->second);
        if (!both_nan && conf != it->second) return false;
        ++it;
    }
    return true;
}

void KnowledgeGraph::add_node(EntityNode node) {
    auto it = nodes_.find(node.id);
    if (it == nodes_.end()) {
        adjacency_.try_emplace(node.id);
        const std::string id = node.id;
        nodes_.emplace(id, std::move(node));
        return;
    }
    if (it->second.category != node.category) {
        throw ValidationError("node category clash", {node.id});
    }
    it->second.aliases.insert(node.aliases.begin(), node.aliases.end());
    if (it->second.name.empty()) it->second.name = node.name;
    if (!it->second.parent_gene && node.parent_gene) it->second.parent_gene = node.parent_gene;
}

void KnowledgeGraph::remove_node(const std::string& id) {
    auto adj = adjacency_.find(id);
    if (adj == adjacency_.end()) return;
    for (const auto& nb : adj->second) {
        edges_.erase(NodePair(id, nb));
        adjacency_.find(nb)->second.erase(id);
    }
    adjacency_.erase(adj);
    nodes_.erase(id);
}

bool KnowledgeGraph::has_node(std::string_view id) const {
    return adjacency_.find(id) != adjacency_.end();
}

const EntityNode* KnowledgeGraph::find_node(std::string_view id) const {
    auto it = nodes_.find(std::string(id));
    return it == nodes_.end() ? nullptr : &it->second;
}

const EntityNode& KnowledgeGraph::node(std::string_view id) const {
    const EntityNode* n = find_node(id);
    if (n == nullptr) throw MissingNodeError(std::string(id));
    return *n;
}

EntityNode& KnowledgeGraph::mutable_node(std::string_view id) {
    auto it = nodes_.find(std::string(id));
    if (it == nodes_.end()) throw MissingNodeError(std::string(id));
    return it->second;
}

RelationEdge& KnowledgeGraph::edge_slot(const std::string& a, const std::string& b) {
    if (a == b) throw InvalidEdgeError("self-loop on " + a);
    if (!has_node(a)) throw MissingNodeError(a);
    if (!has_node(b)) throw MissingNodeError(b);
    NodePair pair(a, b);
    auto [it, inserted] = edges_.try_emplace(pair);
    if (inserted) {
        it->second.endpoints = pair;
        adjacency_.find(a)->second.insert(b);
        adjacency_.find(b)->second.insert(a);
    }
    return it->second;
}

const RelationEdge& KnowledgeGraph::merge_evidence(const std::string& a, const std::string& b,
                                                   RelationKind kind, const std::string& article_id,
                                                   double confidence) {
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
        throw InvalidEvidenceError("confidence outside [0,1] for article " + article_id);
    }
    RelationEdge& e = edge_slot(a, b);
    e.kinds.insert(kind);
    auto [it, inserted] = e.evidence.try_emplace(article_id, confidence);
    if (!inserted && (std::isnan(it->second) || confidence > it->second)) it->second = confidence;
    e.weight = edge_weight(static_cast<long long>(e.evidence.size()));
    return e;
}

const RelationEdge& KnowledgeGraph::insert_edge(const RelationEdge& edge) {
    if (edge.evidence.empty()) {
        throw InvalidEvidenceError("edge " + edge.endpoints.first + "--" + edge.endpoints.second +
                                   " has no evidence");
    }
    RelationEdge& e = edge_slot(edge.endpoints.first, edge.endpoints.second);
    e.kinds.insert(edge.kinds.begin(), edge.kinds.end());
    for (const auto& [article, conf] : edge.evidence) {
        auto [it, inserted] = e.evidence.try_emplace(article, conf);
        if (!inserted && !std::isnan(conf) && (std::isnan(it->second) || conf > it->second)) {
            it->second = conf;
        }
    }
    e.weight = edge_weight(static_cast<long long>(e.evidence.size()));
    return e;
}

void KnowledgeGraph::remove_edge(const NodePair& pair) {
    if (edges_.erase(pair) == 0) return;
    adjacency_.find(pair.first)->second.erase(pair.second);
    adjacency_.find(pair.second)->second.erase(pair.first);
}

const RelationEdge* KnowledgeGraph::find_edge(std::string_view a, std::string_view b) const {
    auto it = edges_.find(NodePair(std::string(a), std::string(b)));
    return it == edges_.end() ? nullptr : &it->second;
}

bool KnowledgeGraph::has_edge(std::string_view a, std::string_view b) const {
    return find_edge(a, b) != nullptr;
}

const std::set<std::string>& KnowledgeGraph::neighbors(std::string_view id) const {
    auto it = adjacency_.find(id);
    return it == adjacency_.end() ? kEmptyNeighbors : it->second;
}

std::map<Category, std::size_t> KnowledgeGraph::category_counts() const {
    std::map<Category, std::size_t> counts;
    for (const auto& [id, n] : nodes_) ++counts[n.category];
    return counts;
}

KnowledgeGraph KnowledgeGraph::induced_subgraph(const std::set<std::string>& ids) const {
    KnowledgeGraph sub;
    for (const auto& id : ids) {
        if (const EntityNode* n = find_node(id)) sub.add_node(*n);
    }
    for (const auto& id : ids) {
        for (const auto& nb : neighbors(id)) {
            if (id < nb && ids.count(nb) != 0) sub.insert_edge(edges_.at(NodePair(id, nb)));
        }
    }
    sub.provenance_ = provenance_;
    return sub;
}

std::optional<std::string> KnowledgeGraph::resolve(std::string_view id_or_name) const {
    if (has_node(id_or_name)) return std::string(id_or_name);
    for (const auto& [id, n] : nodes_) {
        if (iequals(n.name, id_or_name)) return id;
    }
    for (const auto& [id, n] : nodes_) {
        for (const auto& alias : n.aliases) {
            if (iequals(alias, id_or_name)) return id;
        }
    }
    return std::nullopt;
}

std::vector<std::string> KnowledgeGraph::invariant_violations() const {
    std::vector<std::string> out;
    for (const auto& [pair, e] : edges_) {
        const std::string label = pair.first + "--" + pair.second;
        if (pair.first == pair.second) out.push_back(label + ": self-loop");
        if (!has_node(pair.first) || !has_node(pair.second)) out.push_back(label + ": dangling endpoint");
        if (e.kinds.empty()) out.push_back(label + ": no relation kind");
        if (e.evidence.empty()) {
            out.push_back(label + ": no evidence");
            continue;
        }
        const double expected = edge_weight(static_cast<long long>(e.evidence.size()));
        if (std::abs(e.weight - expected) > 1e-12) out.push_back(label + ": weight inconsistent with evidence");
        for (const auto& [article, conf] : e.evidence) {
            if (!std::isnan(conf) && (conf < 0.0 || conf > 1.0)) {
                out.push_back(label + ": confidence out of range for " + article);
            }
        }
    }
    return out;
}

bool KnowledgeGraph::operator==(const KnowledgeGraph& o) const {
    return nodes_ == o.nodes_ && edges_ == o.edges_;
}

KnowledgeGraph merge_evidence(KnowledgeGraph graph, const NodePair& pair, RelationKind kind,
                              const std::string& article_id, double confidence) {
    graph.merge_evidence(pair.first, pair.second, kind, article_id, confidence);
    return graph;
}

} // namespace litkg
