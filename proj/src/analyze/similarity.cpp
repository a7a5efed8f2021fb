#include "litkg/analyze/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "litkg/error.hpp"

namespace litkg::analyze {

namespace {

using Vector = std::map<std::string, double>;

double cosine(const Vector& a, const Vector& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [k, v] : a) {
        na += v * v;
        if (auto it = b.find(k); it != b.end()) dot += v * it->second;
    }
    for (const auto& [k, v] : b) nb += v * v;
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

std::optional<double> cosine_if_defined(const Vector& a, const Vector& b) {
    auto nonzero = [](const Vector& v) {
        return std::any_of(v.begin(), v.end(), [](const auto& kv) { return kv.second != 0.0; });
    };
    if (!nonzero(a) || !nonzero(b)) return std::nullopt;
    return cosine(a, b);
}

Vector gene_distribution(const KnowledgeGraph& graph, const std::string& id) {
    Vector v;
    double total = 0.0;
    for (const auto& nb : graph.neighbors(id)) {
        if (graph.node(nb).category != Category::gene) continue;
        const double w = graph.find_edge(id, nb)->weight;
        v[nb] = w;
        total += w;
    }
    if (total > 0.0) {
        for (auto& [k, x] : v) x /= total;
    }
    return v;
}

} // namespace

void MetaPath::validate() const {
    if (categories[1] != Category::gene) throw CategoryError("meta-path midpoint must be the gene category");
}

ScoreMap hetesim(const KnowledgeGraph& graph, const MetaPath& path, const std::string& target) {
    path.validate();
    const EntityNode* t = graph.find_node(target);
    if (t == nullptr) throw MissingNodeError(target);
    if (t->category != path.categories[2]) {
        throw CategoryError("HeteSim target " + target + " is a " + std::string(to_string(t->category)) +
                            ", expected " + std::string(to_string(path.categories[2])));
    }
    const Vector v = gene_distribution(graph, target);
    ScoreMap out;
    for (const auto& [id, n] : graph.nodes()) {
        if (n.category != path.categories[0] || id == target) continue;
        out[id] = cosine(gene_distribution(graph, id), v);
    }
    return out;
}

namespace {

ScoreMap similarity_scores(const KnowledgeGraph& graph, Category category, const std::string& reference,
                           const SimilarityOptions& options, bool include_reference) {
    if (category != Category::disease && category != Category::chemical) {
        throw CategoryError("entity similarity is defined for diseases and chemicals");
    }
    const EntityNode* ref = graph.find_node(reference);
    if (ref == nullptr) throw MissingNodeError(reference);
    if (ref->category != category) {
        throw CategoryError("reference " + reference + " is not a " + std::string(to_string(category)));
    }
    const std::array<Category, 2> feature_kinds{Category::gene,
                                                category == Category::disease ? Category::chemical : Category::disease};

    std::vector<std::string> members;
    for (const auto& [id, n] : graph.nodes()) {
        if (n.category == category) members.push_back(id);
    }
    const double population = static_cast<double>(members.size());

    // Raw association weights per member and profile, after the top-q cut.
    std::array<std::map<std::string, Vector>, 2> raw;
    std::array<std::map<std::string, std::size_t>, 2> df;
    for (std::size_t f = 0; f < 2; ++f) {
        for (const auto& id : members) {
            std::vector<std::pair<double, std::string>> assoc;
            for (const auto& nb : graph.neighbors(id)) {
                if (graph.node(nb).category == feature_kinds[f]) assoc.push_back({graph.find_edge(id, nb)->weight, nb});
            }
            std::sort(assoc.begin(), assoc.end(), [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
            });
            if (options.top_q && assoc.size() > *options.top_q) assoc.resize(*options.top_q);
            Vector& profile = raw[f][id];
            for (const auto& [w, feature] : assoc) {
                profile[feature] = w;
                ++df[f][feature];
            }
        }
    }
    auto weighted = [&](std::size_t f, const std::string& id) {
        Vector v = raw[f].at(id);
        for (auto& [feature, w] : v) w *= std::log(population / static_cast<double>(df[f].at(feature)));
        return v;
    };

    ScoreMap scores;
    const std::array<Vector, 2> ref_profiles{weighted(0, reference), weighted(1, reference)};
    for (const auto& id : members) {
        if (id == reference && !include_reference) continue;
        double sum = 0.0;
        int defined = 0;
        for (std::size_t f = 0; f < 2; ++f) {
            if (auto c = cosine_if_defined(ref_profiles[f], weighted(f, id))) {
                sum += *c;
                ++defined;
            }
        }
        scores[id] = defined > 0 ? sum / defined : 0.0;
    }
    return scores;
}

} // namespace

RankingTable entity_similarity(const KnowledgeGraph& graph, Category category, const std::string& reference,
                               const SimilarityOptions& options) {
    return rank_scores(category == Category::disease ? "disease_similarity" : "chemical_similarity", graph,
                       similarity_scores(graph, category, reference, options, false));
}

double entity_similarity_between(const KnowledgeGraph& graph, Category category, const std::string& a,
                                 const std::string& b, const SimilarityOptions& options) {
    const auto scores = similarity_scores(graph, category, a, options, true);
    auto it = scores.find(b);
    if (it == scores.end()) throw CategoryError(b + " is not a " + std::string(to_string(category)));
    return it->second;
}

} // namespace litkg::analyze
