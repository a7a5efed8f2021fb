#include "litkg/kg_json.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include <nlohmann/json.hpp>

#include "litkg/error.hpp"
#include "litkg/util.hpp"

namespace litkg {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

const Json* find_field(const Json& obj, const std::vector<std::string>& keys) {
    for (const auto& k : keys) {
        auto it = obj.find(k);
        if (it != obj.end() && !it->is_null()) return &*it;
    }
    return nullptr;
}

std::optional<std::string> as_id(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    return std::nullopt;
}

std::vector<Json> as_list(const Json& v) {
    if (v.is_array()) return {v.begin(), v.end()};
    return {v};
}

ParseError parse_error_at(std::string_view text, std::size_t byte, const std::string& what) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return ParseError(what, line, col);
}

} // namespace

FieldMapping FieldMapping::published_fixtures() {
    FieldMapping m;
    m.edges = {"edges", "links"};
    m.node_name = {"name", "label", "text", "title"};
    m.node_category = {"category", "type", "node_type", "group", "entity_type"};
    m.node_aliases = {"aliases", "synonyms"};
    m.kinds = {"kinds", "relation", "relations", "relation_type", "type", "kind", "label"};
    m.articles = {"pmids", "articles", "pmid", "papers", "publications", "article_ids"};
    m.confidences = {"confidences", "scores", "confidence"};
    m.support_count = {"n", "count", "num_articles", "support", "n_articles"};
    m.allow_weight_only_edges = true;
    return m;
}

std::string serialize(const KnowledgeGraph& graph) {
    OrderedJson root = OrderedJson::object();
    OrderedJson nodes = OrderedJson::array();
    for (const auto& [id, n] : graph.nodes()) {
        OrderedJson jn = OrderedJson::object();
        jn["id"] = n.id;
        jn["name"] = n.name;
        jn["category"] = std::string(to_string(n.category));
        jn["aliases"] = OrderedJson(std::vector<std::string>(n.aliases.begin(), n.aliases.end()));
        if (n.parent_gene) jn["parent_gene"] = *n.parent_gene;
        nodes.push_back(std::move(jn));
    }
    OrderedJson edges = OrderedJson::array();
    for (const auto& [pair, e] : graph.edges()) {
        OrderedJson je = OrderedJson::object();
        je["source"] = pair.first;
        je["target"] = pair.second;
        OrderedJson kinds = OrderedJson::array();
        for (RelationKind k : e.kinds) kinds.push_back(std::string(to_string(k)));
        je["kinds"] = std::move(kinds);
        OrderedJson pmids = OrderedJson::array();
        OrderedJson confs = OrderedJson::array();
        for (const auto& [article, conf] : e.evidence) {
            pmids.push_back(article);
            if (std::isnan(conf)) {
                confs.push_back(nullptr);
            } else {
                confs.push_back(conf);
            }
        }
        je["pmids"] = std::move(pmids);
        je["confidences"] = std::move(confs);
        je["weight"] = e.weight;
        edges.push_back(std::move(je));
    }
    root["nodes"] = std::move(nodes);
    root["edges"] = std::move(edges);
    if (!graph.provenance().empty()) {
        OrderedJson prov = OrderedJson::object();
        for (const auto& [k, v] : graph.provenance()) prov[k] = v;
        root["provenance"] = std::move(prov);
    }
    return root.dump(1) + "\n";
}

KnowledgeGraph deserialize(std::string_view text) { return deserialize(text, FieldMapping::canonical()); }

KnowledgeGraph deserialize(std::string_view text, const FieldMapping& mapping) {
    Json root;
    try {
        root = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw parse_error_at(text, e.byte == 0 ? 0 : e.byte - 1, std::string("malformed graph JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("graph JSON must be an object", 1, 1);

    const Json* jnodes = find_field(root, mapping.nodes);
    const Json* jedges = find_field(root, mapping.edges);
    if (jnodes == nullptr || !jnodes->is_array()) throw ValidationError("graph JSON lacks a node array", {"nodes"});
    if (jedges != nullptr && !jedges->is_array()) throw ValidationError("edge field is not an array", {"edges"});

    KnowledgeGraph graph;
    std::vector<std::string> offenders;

    std::size_t index = 0;
    for (const auto& jn : *jnodes) {
        const std::string where = "node[" + std::to_string(index++) + "]";
        if (!jn.is_object()) {
            offenders.push_back(where + ": not an object");
            continue;
        }
        const Json* jid = find_field(jn, mapping.node_id);
        std::optional<std::string> id = jid ? as_id(*jid) : std::nullopt;
        if (!id || id->empty()) {
            offenders.push_back(where + ": missing id");
            continue;
        }
        EntityNode node;
        node.id = *id;
        const Json* jname = find_field(jn, mapping.node_name);
        node.name = (jname && jname->is_string()) ? jname->get<std::string>() : *id;
        const Json* jcat = find_field(jn, mapping.node_category);
        std::optional<Category> cat;
        if (jcat && jcat->is_string()) cat = parse_category(jcat->get<std::string>());
        if (!cat) {
            offenders.push_back(*id + ": unknown category " + (jcat ? jcat->dump() : "(missing)"));
            continue;
        }
        node.category = *cat;
        if (const Json* jal = find_field(jn, mapping.node_aliases)) {
            for (const auto& a : as_list(*jal)) {
                if (a.is_string()) node.aliases.insert(a.get<std::string>());
            }
        }
        if (auto it = jn.find("parent_gene"); it != jn.end() && it->is_string()) {
            node.parent_gene = it->get<std::string>();
        }
        if (graph.has_node(node.id)) {
            offenders.push_back(node.id + ": duplicate node id");
            continue;
        }
        graph.add_node(std::move(node));
    }

    index = 0;
    if (jedges != nullptr) {
        for (const auto& je : *jedges) {
            const std::string where = "edge[" + std::to_string(index++) + "]";
            if (!je.is_object()) {
                offenders.push_back(where + ": not an object");
                continue;
            }
            const Json* js = find_field(je, mapping.source);
            const Json* jt = find_field(je, mapping.target);
            auto src = js ? as_id(*js) : std::nullopt;
            auto dst = jt ? as_id(*jt) : std::nullopt;
            if (!src || !dst) {
                offenders.push_back(where + ": missing endpoint");
                continue;
            }
            const std::string label = *src + "--" + *dst;
            if (*src == *dst) {
                offenders.push_back(label + ": self-loop");
                continue;
            }
            if (!graph.has_node(*src) || !graph.has_node(*dst)) {
                offenders.push_back(label + ": unknown endpoint");
                continue;
            }

            RelationEdge edge;
            edge.endpoints = NodePair(*src, *dst);
            if (const Json* jk = find_field(je, mapping.kinds)) {
                for (const auto& k : as_list(*jk)) {
                    if (!k.is_string()) continue;
                    for (const auto& part : split(k.get<std::string>(), '|')) {
                        const auto token = trim(part);
                        if (token.empty()) continue;
                        if (auto kind = parse_relation_kind(token)) {
                            edge.kinds.insert(*kind);
                        } else if (mapping.allow_weight_only_edges) {
                            edge.kinds.insert(RelationKind::other);
                        } else {
                            offenders.push_back(label + ": unknown relation kind " + std::string(token));
                        }
                    }
                }
            }
            if (edge.kinds.empty()) {
                if (!mapping.allow_weight_only_edges) {
                    offenders.push_back(label + ": no relation kind");
                    continue;
                }
                edge.kinds.insert(RelationKind::other);
            }

            std::vector<std::string> articles;
            if (const Json* ja = find_field(je, mapping.articles)) {
                for (const auto& a : as_list(*ja)) {
                    if (auto s = as_id(a)) articles.push_back(*s);
                }
            }
            std::vector<double> confs(articles.size(), std::numeric_limits<double>::quiet_NaN());
            if (const Json* jc = find_field(je, mapping.confidences); jc && !articles.empty()) {
                const auto list = as_list(*jc);
                if (list.size() != articles.size()) {
                    offenders.push_back(label + ": confidences and article ids differ in length");
                    continue;
                }
                for (std::size_t i = 0; i < list.size(); ++i) {
                    if (list[i].is_number()) confs[i] = list[i].get<double>();
                }
            }
            std::optional<double> weight;
            if (const Json* jw = find_field(je, mapping.weight); jw && jw->is_number()) {
                weight = jw->get<double>();
            }

            if (articles.empty()) {
                if (!mapping.allow_weight_only_edges) {
                    offenders.push_back(label + ": no supporting articles");
                    continue;
                }
                long long n = 0;
                if (const Json* jn = find_field(je, mapping.support_count); jn && jn->is_number()) {
                    n = jn->get<long long>();
                } else if (weight && *weight > 0.0 && *weight < 1.0) {
                    n = std::llround(-std::log2(1.0 - *weight));
                } else if (!weight) {
                    n = 1;
                }
                if (n < 1) {
                    offenders.push_back(label + ": cannot recover article count");
                    continue;
                }
                for (long long i = 1; i <= n; ++i) articles.push_back("unlisted:" + std::to_string(i));
                confs.assign(articles.size(), std::numeric_limits<double>::quiet_NaN());
            }

            bool bad_conf = false;
            for (std::size_t i = 0; i < articles.size(); ++i) {
                if (!std::isnan(confs[i]) && (confs[i] < 0.0 || confs[i] > 1.0)) bad_conf = true;
                auto [it, inserted] = edge.evidence.try_emplace(articles[i], confs[i]);
                if (!inserted && !std::isnan(confs[i]) && (std::isnan(it->second) || confs[i] > it->second)) {
                    it->second = confs[i];
                }
            }
            if (bad_conf) {
                offenders.push_back(label + ": confidence outside [0,1]");
                continue;
            }
            edge.weight = edge_weight(static_cast<long long>(edge.evidence.size()));
            if (weight && std::abs(*weight - edge.weight) > 1e-9) {
                offenders.push_back(label + ": weight inconsistent with evidence count");
                continue;
            }
            graph.insert_edge(edge);
        }
    }

    if (auto it = root.find("provenance"); it != root.end() && it->is_object()) {
        for (const auto& [k, v] : it->items()) graph.provenance()[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }

    if (!offenders.empty()) throw ValidationError("graph JSON violates the schema", std::move(offenders));
    return graph;
}

KnowledgeGraph load_graph_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    return deserialize(text, FieldMapping::published_fixtures());
}

void save_graph_file(const KnowledgeGraph& graph, const std::filesystem::path& path) {
    write_text_file(path, serialize(graph));
}

} // namespace litkg
