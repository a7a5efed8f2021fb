#include "litkg/validate.hpp"

#include <cmath>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "litkg/topology.hpp"
#include "litkg/util.hpp"

namespace litkg::validate {

using OrderedJson = nlohmann::ordered_json;

std::string_view to_string(EdgeClass c) {
    switch (c) {
    case EdgeClass::green: return "green";
    case EdgeClass::red: return "red";
    case EdgeClass::blue: return "blue";
    case EdgeClass::path: return "path";
    }
    return "green";
}

const std::set<NodePair>& EdgeClassification::edges(EdgeClass c) const {
    static const std::set<NodePair> none;
    switch (c) {
    case EdgeClass::green: return green;
    case EdgeClass::red: return red;
    case EdgeClass::blue: return blue;
    case EdgeClass::path: return none;
    }
    return none;
}

double EdgeClassification::percent(EdgeClass c) const {
    const std::size_t n = total();
    if (n == 0) return 0.0;
    return 100.0 * static_cast<double>(edges(c).size()) / static_cast<double>(n);
}

EdgeClassification classify_edges(const KnowledgeGraph& kg, const ref::ReferenceGraph& reference) {
    EdgeClassification c;
    c.kind = reference.kind();
    for (const auto& [id, n] : reference.nodes()) {
        if (kg.has_node(id)) c.shared_nodes.insert(id);
    }
    if (c.shared_nodes.empty()) {
        c.no_shared_nodes = true;
        return c;
    }
    auto shared = [&](const NodePair& p) { return c.shared_nodes.count(p.first) && c.shared_nodes.count(p.second); };
    for (const auto& [pair, e] : kg.edges()) {
        if (!shared(pair)) continue;
        if (reference.edges().count(pair)) {
            c.green.insert(pair);
        } else if (ref::admits(c.kind, kg.node(pair.first).category, kg.node(pair.second).category)) {
            c.red.insert(pair);
        }
    }
    for (const auto& [pair, tags] : reference.edges()) {
        if (shared(pair) && !kg.has_edge(pair.first, pair.second)) c.blue.insert(pair);
    }
    return c;
}

PathCoverageReport path_coverage(const KnowledgeGraph& kg, const EdgeClassification& classification) {
    const Topology topo(kg);
    PathCoverageReport report;
    std::unordered_map<std::size_t, std::vector<long>> dist_to;
    std::size_t total_length = 0;
    for (const auto& edge : classification.blue) {
        CoveredEdge entry{edge, {}};
        const auto s = topo.index(edge.first);
        const auto t = topo.index(edge.second);
        if (s && t) {
            auto it = dist_to.find(*t);
            if (it == dist_to.end()) it = dist_to.emplace(*t, topo.bfs(*t)).first;
            const auto& dist = it->second;
            if (dist[*s] > 0) {
                std::size_t cur = *s;
                entry.path.push_back(topo.id(cur));
                while (cur != *t) {
                    // Neighbors are in id order, so the first step down is the smallest.
                    for (std::size_t v : topo.neighbors(cur)) {
                        if (dist[v] == dist[cur] - 1) {
                            cur = v;
                            break;
                        }
                    }
                    entry.path.push_back(topo.id(cur));
                }
            }
        }
        if (entry.covered()) {
            ++report.covered;
            total_length += entry.length();
        } else {
            ++report.uncovered;
        }
        report.entries.push_back(std::move(entry));
    }
    if (report.covered > 0) report.average_length = static_cast<double>(total_length) / report.covered;
    return report;
}

std::map<EdgeClass, std::size_t> Overlay::class_counts() const {
    std::map<EdgeClass, std::size_t> out;
    for (const auto& [pair, e] : edges) ++out[e.cls];
    return out;
}

Overlay overlay_export(const KnowledgeGraph& kg, const ref::ReferenceGraph& reference,
                       const EdgeClassification& classification, const PathCoverageReport& coverage) {
    Overlay overlay;
    auto add_node = [&](const std::string& id) {
        if (overlay.nodes.count(id)) return;
        if (const EntityNode* n = kg.find_node(id)) {
            overlay.nodes.emplace(id, *n);
        } else if (auto it = reference.nodes().find(id); it != reference.nodes().end()) {
            overlay.nodes.emplace(id, EntityNode{id, it->second.name, it->second.category, {}, {}});
        }
    };
    auto add_edge = [&](const NodePair& pair, EdgeClass cls) {
        add_node(pair.first);
        add_node(pair.second);
        OverlayEdge e;
        e.cls = cls;
        if (const RelationEdge* r = kg.find_edge(pair.first, pair.second)) e.relation = *r;
        if (auto it = reference.edges().find(pair); it != reference.edges().end()) e.reference_tags = it->second;
        overlay.edges.emplace(pair, std::move(e));
    };
    for (const auto& p : classification.green) add_edge(p, EdgeClass::green);
    for (const auto& p : classification.red) add_edge(p, EdgeClass::red);
    for (const auto& p : classification.blue) add_edge(p, EdgeClass::blue);
    for (const auto& entry : coverage.entries) {
        for (std::size_t i = 0; i + 1 < entry.path.size(); ++i) {
            const NodePair p(entry.path[i], entry.path[i + 1]);
            if (!overlay.edges.count(p)) add_edge(p, EdgeClass::path);
        }
    }
    return overlay;
}

std::string overlay_to_json(const Overlay& overlay) {
    OrderedJson nodes = OrderedJson::array();
    for (const auto& [id, n] : overlay.nodes) {
        OrderedJson jn;
        jn["id"] = id;
        jn["name"] = n.name;
        jn["category"] = std::string(to_string(n.category));
        jn["aliases"] = std::vector<std::string>(n.aliases.begin(), n.aliases.end());
        nodes.push_back(std::move(jn));
    }
    OrderedJson edges = OrderedJson::array();
    for (const auto& [pair, e] : overlay.edges) {
        OrderedJson je;
        je["source"] = pair.first;
        je["target"] = pair.second;
        OrderedJson kinds = OrderedJson::array(), pmids = OrderedJson::array(), confs = OrderedJson::array();
        double weight = 0.0;
        if (e.relation) {
            for (RelationKind k : e.relation->kinds) kinds.push_back(std::string(to_string(k)));
            for (const auto& [article, conf] : e.relation->evidence) {
                pmids.push_back(article);
                if (std::isnan(conf)) {
                    confs.push_back(nullptr);
                } else {
                    confs.push_back(conf);
                }
            }
            weight = e.relation->weight;
        }
        je["kinds"] = std::move(kinds);
        je["pmids"] = std::move(pmids);
        je["confidences"] = std::move(confs);
        je["weight"] = weight;
        je["edge_class"] = std::string(to_string(e.cls));
        if (!e.reference_tags.empty()) {
            je["reference_evidence"] = std::vector<std::string>(e.reference_tags.begin(), e.reference_tags.end());
        }
        edges.push_back(std::move(je));
    }
    OrderedJson root;
    root["nodes"] = std::move(nodes);
    root["edges"] = std::move(edges);
    return root.dump(1) + "\n";
}

std::string classification_to_json(const EdgeClassification& c) {
    OrderedJson root;
    root["reference_kind"] = std::string(ref::to_string(c.kind));
    root["shared_nodes"] = c.shared_nodes.size();
    root["warning"] = c.no_shared_nodes ? OrderedJson("no shared nodes") : OrderedJson(nullptr);
    root["total_edges"] = c.total();
    for (EdgeClass cls : {EdgeClass::green, EdgeClass::red, EdgeClass::blue}) {
        OrderedJson jc;
        jc["count"] = c.edges(cls).size();
        jc["percent"] = c.percent(cls);
        OrderedJson list = OrderedJson::array();
        for (const auto& p : c.edges(cls)) list.push_back({p.first, p.second});
        jc["edges"] = std::move(list);
        root[std::string(to_string(cls))] = std::move(jc);
    }
    return root.dump(2) + "\n";
}

std::string classification_to_csv(const EdgeClassification& c) {
    std::string out = "class,source,target\n";
    for (EdgeClass cls : {EdgeClass::green, EdgeClass::red, EdgeClass::blue}) {
        for (const auto& p : c.edges(cls)) {
            out += std::string(to_string(cls)) + "," + csv_field(p.first) + "," + csv_field(p.second) + "\n";
        }
    }
    return out;
}

std::string coverage_to_json(const PathCoverageReport& r) {
    OrderedJson root;
    root["covered"] = r.covered;
    root["uncovered"] = r.uncovered;
    root["average_length"] = r.average_length ? OrderedJson(*r.average_length) : OrderedJson(nullptr);
    OrderedJson entries = OrderedJson::array();
    for (const auto& e : r.entries) {
        OrderedJson je;
        je["source"] = e.edge.first;
        je["target"] = e.edge.second;
        if (e.covered()) {
            je["length"] = e.length();
            je["path"] = e.path;
        } else {
            je["length"] = nullptr;
            je["path"] = "uncovered";
        }
        entries.push_back(std::move(je));
    }
    root["entries"] = std::move(entries);
    return root.dump(2) + "\n";
}

std::string coverage_to_csv(const PathCoverageReport& r) {
    std::string out = "source,target,length,path\n";
    for (const auto& e : r.entries) {
        std::string path;
        for (std::size_t i = 0; i < e.path.size(); ++i) path += (i ? ";" : "") + e.path[i];
        out += csv_field(e.edge.first) + "," + csv_field(e.edge.second) + "," +
               (e.covered() ? std::to_string(e.length()) : "") + "," + csv_field(path) + "\n";
    }
    return out;
}

} // namespace litkg::validate
