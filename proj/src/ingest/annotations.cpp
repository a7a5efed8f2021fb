#include "litkg/ingest/annotations.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <nlohmann/json.hpp>

#include "litkg/error.hpp"
#include "litkg/util.hpp"

namespace litkg::ingest {

namespace {

using Json = nlohmann::json;

std::string json_string(const Json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) return {};
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
    return {};
}

std::optional<double> json_number(const Json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (it->is_number()) return it->get<double>();
    if (it->is_string()) {
        try {
            return std::stod(it->get<std::string>());
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::string normalize_kind(std::string_view s) {
    std::string out = to_lower(trim(s));
    std::replace(out.begin(), out.end(), ' ', '_');
    std::replace(out.begin(), out.end(), '-', '_');
    return out;
}

struct Role {
    std::string identifier;
    std::string type;
    std::string name;
};

std::optional<Role> parse_role(const Json& v) {
    Role r;
    if (v.is_object()) {
        r.identifier = json_string(v, "identifier");
        r.type = json_string(v, "type");
        r.name = json_string(v, "name");
    } else if (v.is_string()) {
        // "Disease|MESH:D000474"
        const auto parts = split(v.get<std::string>(), '|');
        if (parts.size() < 2) return std::nullopt;
        r.type = parts[0];
        r.identifier = parts[1];
    } else {
        return std::nullopt;
    }
    if (r.identifier.empty() || r.identifier == "-" || r.type.empty()) return std::nullopt;
    return r;
}

void parse_document(const Json& doc, AnnotationResult& out,
                    std::map<std::string, EntityNode>& entities) {
    std::string article = json_string(doc, "id");
    if (article.empty()) article = json_string(doc, "pmid");
    if (article.empty()) throw ParseError("annotation document without an article id");

    std::map<std::string, std::string> names;  // normalized id -> display name
    if (auto passages = doc.find("passages"); passages != doc.end() && passages->is_array()) {
        for (const auto& passage : *passages) {
            auto anns = passage.find("annotations");
            if (anns == passage.end() || !anns->is_array()) continue;
            for (const auto& ann : *anns) {
                const auto infons = ann.find("infons");
                if (infons == ann.end() || !infons->is_object()) continue;
                const std::string identifier = json_string(*infons, "identifier");
                const auto category = parse_category(json_string(*infons, "type"));
                if (!category || identifier.empty() || identifier == "-") continue;
                const auto id = normalize_entity_id(identifier, *category);
                if (!id) continue;
                const std::string text = json_string(ann, "text");
                std::string name = json_string(*infons, "name");
                if (name.empty()) name = text;
                auto [it, inserted] = entities.try_emplace(*id);
                EntityNode& node = it->second;
                if (inserted) {
                    node.id = *id;
                    node.category = *category;
                    node.name = name;
                    if (*category == Category::variant) node.parent_gene = variant_parent_gene(identifier);
                }
                if (!text.empty() && text != node.name) node.aliases.insert(text);
                names.try_emplace(*id, node.name);
            }
        }
    }

    auto relations = doc.find("relations");
    if (relations == doc.end() || !relations->is_array()) return;
    for (const auto& rel : *relations) {
        const auto infons = rel.find("infons");
        if (infons == rel.end() || !infons->is_object()) continue;
        const auto r1 = infons->contains("role1") ? parse_role((*infons)["role1"]) : std::nullopt;
        const auto r2 = infons->contains("role2") ? parse_role((*infons)["role2"]) : std::nullopt;
        const auto score = json_number(*infons, "score");
        const std::string type = json_string(*infons, "type");
        if (!r1 || !r2 || !score || type.empty()) continue;
        const auto c1 = parse_category(r1->type);
        const auto c2 = parse_category(r2->type);
        if (!c1 || !c2) continue;
        const auto id1 = normalize_entity_id(r1->identifier, *c1);
        const auto id2 = normalize_entity_id(r2->identifier, *c2);
        if (!id1 || !id2 || *id1 == *id2) continue;
        if (*score < 0.0 || *score > 1.0) {
            throw ParseError("relation confidence outside [0,1] in article " + article);
        }
        auto name_of = [&](const std::string& id, const Role& role, Category cat) {
            if (auto it = names.find(id); it != names.end()) return it->second;
            std::string name = role.name.empty() ? id : role.name;
            auto [eit, inserted] = entities.try_emplace(id);
            if (inserted) {
                eit->second.id = id;
                eit->second.name = name;
                eit->second.category = cat;
                if (cat == Category::variant) eit->second.parent_gene = variant_parent_gene(role.identifier);
            }
            return eit->second.name;
        };
        RawRelation raw;
        raw.a = {*id1, name_of(*id1, *r1, *c1), *c1};
        raw.b = {*id2, name_of(*id2, *r2, *c2), *c2};
        if (raw.b.id < raw.a.id) std::swap(raw.a, raw.b);
        raw.kind = normalize_kind(type);
        raw.article_id = article;
        raw.confidence = *score;
        out.relations.push_back(std::move(raw));
    }
}

} // namespace

std::optional<std::string> normalize_entity_id(std::string_view identifier, Category category) {
    std::string id(trim(identifier));
    if (id.empty() || id == "-") return std::nullopt;
    switch (category) {
    case Category::gene: {
        const auto first = split(id, ';').front();
        if (first.empty()) return std::nullopt;
        if (first.find(':') != std::string::npos) return first;
        return "GENE:" + first;
    }
    case Category::disease:
    case Category::chemical:
        if (id.find(':') != std::string::npos) return id;
        return "MESH:" + id;
    case Category::variant: {
        const auto parts = split(id, ';');
        for (const auto& p : parts) {
            if (p.rfind("RS#:", 0) == 0) return "VARIANT:rs" + p.substr(4);
        }
        for (const auto& p : parts) {
            if (p.rfind("HGVS:", 0) == 0) {
                std::string v = "VARIANT:" + p.substr(5);
                if (auto gene = variant_parent_gene(id)) v += "@" + *gene;
                return v;
            }
        }
        if (id.rfind("VARIANT:", 0) == 0) return parts.front();
        return "VARIANT:" + parts.front();
    }
    }
    return std::nullopt;
}

std::optional<std::string> variant_parent_gene(std::string_view identifier) {
    for (const auto& p : split(identifier, ';')) {
        if (p.rfind("CorrespondingGene:", 0) == 0) {
            const std::string gene = p.substr(18);
            if (!gene.empty() && gene != "-") return "GENE:" + gene;
        }
    }
    return std::nullopt;
}

void parse_bioc_documents(std::string_view body, AnnotationResult& out) {
    std::map<std::string, EntityNode> entities;
    for (auto& e : out.entities) entities.emplace(e.id, std::move(e));
    out.entities.clear();

    auto handle = [&](const Json& doc) {
        if (doc.is_object() && doc.contains("PubTator3")) {
            for (const auto& d : doc["PubTator3"]) parse_document(d, out, entities);
        } else if (doc.is_array()) {
            for (const auto& d : doc) parse_document(d, out, entities);
        } else if (doc.is_object()) {
            parse_document(doc, out, entities);
        }
    };

    try {
        handle(Json::parse(body));
    } catch (const Json::parse_error&) {
        // Newline-delimited documents.
        std::size_t line_no = 0;
        for (const auto& line : split(body, '\n')) {
            ++line_no;
            if (trim(line).empty()) continue;
            try {
                handle(Json::parse(line));
            } catch (const Json::parse_error& e) {
                throw ParseError(std::string("malformed annotation response: ") + e.what(), line_no, e.byte);
            }
        }
    }
    for (auto& [id, e] : entities) out.entities.push_back(std::move(e));
}

void canonicalize(AnnotationResult& result) {
    std::map<std::string, EntityNode> entities;
    for (auto& e : result.entities) {
        auto [it, inserted] = entities.try_emplace(e.id, e);
        if (!inserted) it->second.aliases.insert(e.aliases.begin(), e.aliases.end());
    }
    result.entities.clear();
    for (auto& [id, e] : entities) result.entities.push_back(std::move(e));

    auto key = [](const RawRelation& r) { return std::tie(r.a.id, r.b.id, r.kind, r.article_id); };
    std::stable_sort(result.relations.begin(), result.relations.end(),
                     [&](const RawRelation& x, const RawRelation& y) { return key(x) < key(y); });
    result.relations.erase(std::unique(result.relations.begin(), result.relations.end(),
                                       [&](const RawRelation& x, const RawRelation& y) { return key(x) == key(y); }),
                           result.relations.end());
}

AnnotationResult AnnotationClient::fetch_annotations(const std::vector<std::string>& article_ids) {
    if (article_ids.empty()) throw InvalidQueryError("no article ids to annotate");
    AnnotationResult result;
    const std::size_t batch = std::max<std::size_t>(1, batch_size_);
    for (std::size_t start = 0, index = 0; start < article_ids.size(); start += batch, ++index) {
        const std::vector<std::string> ids(article_ids.begin() + static_cast<std::ptrdiff_t>(start),
                                           article_ids.begin() +
                                               static_cast<std::ptrdiff_t>(std::min(article_ids.size(), start + batch)));
        std::string joined;
        for (const auto& id : ids) joined += (joined.empty() ? "" : ",") + id;
        try {
            const std::string body = client_.get("/publications/export/biocjson", {{"pmids", joined}});
            AnnotationResult part;
            parse_bioc_documents(body, part);
            result.entities.insert(result.entities.end(), part.entities.begin(), part.entities.end());
            result.relations.insert(result.relations.end(), part.relations.begin(), part.relations.end());
        } catch (const Error& e) {
            result.failures.push_back({index, ids, e.what()});
        }
    }
    canonicalize(result);
    return result;
}

} // namespace litkg::ingest
