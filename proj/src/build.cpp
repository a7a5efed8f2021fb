#include "litkg/build.hpp"

#include <deque>
#include <tuple>

#include <nlohmann/json.hpp>

#include "litkg/error.hpp"
#include "litkg/util.hpp"

namespace litkg::build {

void FilterPolicy::validate() const {
    if (!(0.0 < lo_conf_threshold && lo_conf_threshold < hi_conf_threshold && hi_conf_threshold < 1.0)) {
        throw ConfigError("filter thresholds must satisfy 0 < lo < hi < 1");
    }
}

std::vector<RelationGroup> group_relations(const std::vector<ingest::RawRelation>& relations) {
    struct Acc {
        RelationGroup group;
        double sum = 0.0;
        std::size_t records = 0;
    };
    std::map<std::tuple<std::string, std::string, std::string>, Acc> acc;
    for (const auto& r : relations) {
        if (r.a.id == r.b.id) continue;
        const bool swap = r.b.id < r.a.id;
        const auto& a = swap ? r.b : r.a;
        const auto& b = swap ? r.a : r.b;
        Acc& slot = acc[{a.id, b.id, r.kind}];
        if (slot.records == 0) {
            slot.group.a = a;
            slot.group.b = b;
            slot.group.kind = r.kind;
        }
        auto [it, inserted] = slot.group.articles.try_emplace(r.article_id, r.confidence);
        if (!inserted && r.confidence > it->second) it->second = r.confidence;
        slot.sum += r.confidence;
        ++slot.records;
    }
    std::vector<RelationGroup> out;
    out.reserve(acc.size());
    for (auto& [key, slot] : acc) {
        slot.group.mean_confidence = slot.sum / static_cast<double>(slot.records);
        out.push_back(std::move(slot.group));
    }
    return out;
}

bool retain_group(const RelationGroup& group, const FilterPolicy& policy) {
    if (policy.drop_kinds.count(group.kind) != 0) return false;
    if (group.mean_confidence > policy.hi_conf_threshold) return true;
    return group.mean_confidence > policy.lo_conf_threshold && group.article_count() >= policy.lo_conf_min_pubs;
}

std::vector<RelationGroup> filter_relations(const std::vector<ingest::RawRelation>& relations,
                                            const FilterPolicy& policy) {
    policy.validate();
    std::vector<RelationGroup> out;
    for (auto& g : group_relations(relations)) {
        if (retain_group(g, policy)) out.push_back(std::move(g));
    }
    return out;
}

KnowledgeGraph assemble_graph(const std::vector<RelationGroup>& groups, const std::vector<EntityNode>& entities) {
    std::map<std::string, const EntityNode*> known;
    for (const auto& e : entities) known.emplace(e.id, &e);

    KnowledgeGraph g;
    auto ensure = [&](const ingest::EntityRef& ref) {
        if (g.has_node(ref.id)) return;
        if (auto it = known.find(ref.id); it != known.end()) {
            g.add_node(*it->second);
        } else {
            g.add_node({ref.id, ref.name.empty() ? ref.id : ref.name, ref.category, {}, {}});
        }
    };
    for (const auto& group : groups) {
        ensure(group.a);
        ensure(group.b);
        const RelationKind kind = parse_relation_kind(group.kind).value_or(RelationKind::other);
        for (const auto& [article, conf] : group.articles) {
            g.merge_evidence(group.a.id, group.b.id, kind, article, conf);
        }
    }
    return g;
}

KnowledgeGraph collapse_variants(const KnowledgeGraph& graph) {
    std::map<std::string, std::string> target;  // variant id -> gene id
    for (const auto& [id, n] : graph.nodes()) {
        if (n.category == Category::variant && n.parent_gene) target.emplace(id, *n.parent_gene);
    }
    if (target.empty()) return graph;

    KnowledgeGraph out;
    out.provenance() = graph.provenance();
    for (const auto& [id, n] : graph.nodes()) {
        if (target.count(id) == 0) out.add_node(n);
    }
    for (const auto& [variant, gene] : target) {
        if (out.has_node(gene)) {
            out.mutable_node(gene).aliases.insert(graph.node(variant).name);
        } else {
            // Parent gene never annotated on its own: materialize it.
            out.add_node({gene, gene, Category::gene, {graph.node(variant).name}, {}});
        }
    }
    auto map_id = [&](const std::string& id) {
        auto it = target.find(id);
        return it == target.end() ? id : it->second;
    };
    for (const auto& [pair, e] : graph.edges()) {
        const std::string a = map_id(pair.first);
        const std::string b = map_id(pair.second);
        if (a == b) continue;  // variant to its own gene
        RelationEdge moved = e;
        moved.endpoints = NodePair(a, b);
        out.insert_edge(moved);
    }
    return out;
}

PruneResult prune_generic(const KnowledgeGraph& graph, const FilterPolicy& policy) {
    std::set<std::string> wanted;
    for (const auto& name : policy.generic_blocklist) wanted.insert(to_lower(name));

    PruneResult result{graph, {}};
    std::set<std::string> matched;
    std::vector<std::string> doomed;
    for (const auto& [id, n] : graph.nodes()) {
        std::string hit;
        if (wanted.count(to_lower(n.name)) != 0) {
            hit = to_lower(n.name);
        } else if (wanted.count(to_lower(id)) != 0) {
            hit = to_lower(id);
        }
        if (hit.empty()) continue;
        matched.insert(hit);
        const std::size_t degree = graph.degree(id);
        PruneReport::Removed entry{id, n.name, degree};
        if (degree >= policy.generic_degree_floor) {
            doomed.push_back(id);
            result.report.removed.push_back(std::move(entry));
        } else {
            result.report.kept_below_floor.push_back(std::move(entry));
        }
    }
    for (const auto& id : doomed) result.graph.remove_node(id);
    for (const auto& name : policy.generic_blocklist) {
        if (matched.count(to_lower(name)) == 0) result.report.not_found.push_back(name);
    }
    return result;
}

std::set<std::string> connected_component(const KnowledgeGraph& graph, const std::string& start) {
    if (!graph.has_node(start)) throw MissingNodeError(start);
    std::set<std::string> seen{start};
    std::deque<std::string> queue{start};
    while (!queue.empty()) {
        const std::string cur = std::move(queue.front());
        queue.pop_front();
        for (const auto& nb : graph.neighbors(cur)) {
            if (seen.insert(nb).second) queue.push_back(nb);
        }
    }
    return seen;
}

KnowledgeGraph extract_component(const KnowledgeGraph& graph, const std::string& anchor) {
    const auto id = graph.resolve(anchor);
    if (!id) throw MissingNodeError(anchor);
    return graph.induced_subgraph(connected_component(graph, *id));
}

KnowledgeGraph derive_high_confidence(const KnowledgeGraph& extended, const std::string& anchor,
                                      std::size_t min_support) {
    const auto id = extended.resolve(anchor);
    if (!id) throw MissingNodeError(anchor);
    KnowledgeGraph filtered;
    for (const auto& [nid, n] : extended.nodes()) filtered.add_node(n);
    for (const auto& [pair, e] : extended.edges()) {
        if (e.support() >= min_support) filtered.insert_edge(e);
    }
    if (filtered.degree(*id) == 0) {
        throw EmptyResultError("anchor " + *id + " has no edge supported by " + std::to_string(min_support) +
                               " or more articles");
    }
    KnowledgeGraph out = filtered.induced_subgraph(connected_component(filtered, *id));
    out.provenance() = extended.provenance();
    out.provenance()["min_support"] = std::to_string(min_support);
    return out;
}

std::string BuildReport::to_json() const {
    nlohmann::ordered_json j;
    j["raw_relations"] = raw_relations;
    j["groups_total"] = groups_total;
    j["groups_retained"] = groups_retained;
    auto stages_json = nlohmann::ordered_json::array();
    for (const auto& s : stages) stages_json.push_back({{"stage", s.stage}, {"nodes", s.nodes}, {"edges", s.edges}});
    j["stages"] = std::move(stages_json);
    auto entries = [](const std::vector<PruneReport::Removed>& list) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : list) arr.push_back({{"id", r.id}, {"name", r.name}, {"degree", r.degree}});
        return arr;
    };
    j["pruned"] = entries(prune.removed);
    j["blocklisted_below_floor"] = entries(prune.kept_below_floor);
    j["blocklist_not_found"] = prune.not_found;
    return j.dump(2) + "\n";
}

BuildResult run_build(const std::vector<ingest::RawRelation>& relations, const std::vector<EntityNode>& entities,
                      const FilterPolicy& policy, const std::string& anchor) {
    policy.validate();
    BuildResult result;
    auto& report = result.report;
    report.raw_relations = relations.size();

    auto groups = group_relations(relations);
    report.groups_total = groups.size();
    std::vector<RelationGroup> kept;
    for (auto& g : groups) {
        if (retain_group(g, policy)) kept.push_back(std::move(g));
    }
    report.groups_retained = kept.size();

    auto stage = [&](const char* name, const KnowledgeGraph& g) {
        report.stages.push_back({name, g.num_nodes(), g.num_edges()});
    };
    KnowledgeGraph g = assemble_graph(kept, entities);
    stage("assemble", g);
    g = collapse_variants(g);
    stage("collapse_variants", g);
    auto pruned = prune_generic(g, policy);
    report.prune = std::move(pruned.report);
    stage("prune_generic", pruned.graph);
    result.extended = extract_component(pruned.graph, anchor);
    stage("extract_component", result.extended);
    result.high_confidence = derive_high_confidence(result.extended, anchor);
    stage("high_confidence", result.high_confidence);
    return result;
}

std::set<std::string> load_blocklist(const std::filesystem::path& path) {
    std::set<std::string> out;
    for (const auto& raw : split(read_text_file(path), '\n')) {
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        out.emplace(line);
    }
    return out;
}

} // namespace litkg::build
