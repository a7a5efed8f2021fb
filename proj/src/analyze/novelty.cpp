#include "litkg/analyze/novelty.hpp"

#include "litkg/build.hpp"

namespace litkg::analyze {

KnowledgeGraph novelty_merge(const validate::EdgeClassification& a, const validate::EdgeClassification& b,
                             const KnowledgeGraph& kg) {
    auto eligible = [&](const std::string& id) {
        const EntityNode* n = kg.find_node(id);
        return n != nullptr && (n->category == Category::gene || n->category == Category::chemical);
    };
    KnowledgeGraph merged;
    for (const auto* c : {&a, &b}) {
        for (const auto* edges : {&c->green, &c->red}) {
            for (const auto& pair : *edges) {
                const RelationEdge* e = kg.find_edge(pair.first, pair.second);
                if (e == nullptr || !eligible(pair.first) || !eligible(pair.second)) continue;
                if (merged.has_edge(pair.first, pair.second)) continue;
                merged.add_node(kg.node(pair.first));
                merged.add_node(kg.node(pair.second));
                merged.insert_edge(*e);
            }
        }
    }
    // Giant component; equal sizes resolve to the one holding the smallest id.
    std::set<std::string> best;
    std::set<std::string> seen;
    for (const auto& [id, n] : merged.nodes()) {
        if (seen.count(id)) continue;
        auto component = build::connected_component(merged, id);
        seen.insert(component.begin(), component.end());
        if (component.size() > best.size()) best = std::move(component);
    }
    return merged.induced_subgraph(best);
}

} // namespace litkg::analyze
