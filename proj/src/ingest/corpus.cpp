#include "litkg/ingest/corpus.hpp"

#include <nlohmann/json.hpp>

#include "litkg/error.hpp"
#include "litkg/ingest/seeds.hpp"
#include "litkg/util.hpp"

namespace litkg::ingest {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

namespace {

OrderedJson ref_to_json(const EntityRef& r) {
    return {{"id", r.id}, {"name", r.name}, {"category", std::string(to_string(r.category))}};
}

Category category_of(const Json& j) {
    const auto s = j.at("category").get<std::string>();
    const auto c = parse_category(s);
    if (!c) throw ParseError("corpus: unknown category '" + s + "'");
    return *c;
}

EntityRef ref_from_json(const Json& j) {
    return {j.at("id").get<std::string>(), j.at("name").get<std::string>(), category_of(j)};
}

} // namespace

std::string corpus_to_json(const Corpus& corpus) {
    AnnotationResult ann = corpus.annotations;
    canonicalize(ann);
    OrderedJson j;
    j["initial_seeds"] = corpus.initial_seeds;
    j["expanded_seeds"] = corpus.expanded_seeds;
    j["initial_articles"] = corpus.initial_articles;
    j["expanded_articles"] = corpus.expanded_articles;
    auto entities = OrderedJson::array();
    for (const auto& e : ann.entities) {
        OrderedJson n{{"id", e.id},
                      {"name", e.name},
                      {"category", std::string(to_string(e.category))},
                      {"aliases", e.aliases}};
        if (e.parent_gene) n["parent_gene"] = *e.parent_gene;
        entities.push_back(std::move(n));
    }
    j["entities"] = std::move(entities);
    auto relations = OrderedJson::array();
    for (const auto& r : ann.relations) {
        relations.push_back({{"a", ref_to_json(r.a)},
                             {"b", ref_to_json(r.b)},
                             {"kind", r.kind},
                             {"article", r.article_id},
                             {"confidence", r.confidence}});
    }
    j["relations"] = std::move(relations);
    auto failures = OrderedJson::array();
    for (const auto& f : ann.failures) {
        failures.push_back({{"batch", f.batch_index}, {"articles", f.article_ids}, {"message", f.message}});
    }
    j["failures"] = std::move(failures);
    return j.dump(1) + "\n";
}

Corpus corpus_from_json(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("corpus is not valid JSON: ") + e.what(), 0, e.byte);
    }
    try {
        Corpus c;
        c.initial_seeds = j.value("initial_seeds", std::vector<std::string>{});
        c.expanded_seeds = j.value("expanded_seeds", std::vector<std::string>{});
        c.initial_articles = j.value("initial_articles", std::vector<std::string>{});
        c.expanded_articles = j.value("expanded_articles", std::vector<std::string>{});
        for (const auto& n : j.at("entities")) {
            EntityNode e;
            e.id = n.at("id").get<std::string>();
            e.name = n.at("name").get<std::string>();
            e.category = category_of(n);
            e.aliases = n.value("aliases", std::set<std::string>{});
            if (n.contains("parent_gene")) e.parent_gene = n["parent_gene"].get<std::string>();
            c.annotations.entities.push_back(std::move(e));
        }
        for (const auto& r : j.at("relations")) {
            RawRelation rel{ref_from_json(r.at("a")), ref_from_json(r.at("b")), r.at("kind").get<std::string>(),
                            r.at("article").get<std::string>(), r.at("confidence").get<double>()};
            if (!(rel.confidence >= 0.0 && rel.confidence <= 1.0)) {
                throw ValidationError("corpus: confidence outside [0,1]", {rel.article_id});
            }
            c.annotations.relations.push_back(std::move(rel));
        }
        for (const auto& f : j.value("failures", Json::array())) {
            c.annotations.failures.push_back({f.at("batch").get<std::size_t>(),
                                              f.at("articles").get<std::vector<std::string>>(),
                                              f.at("message").get<std::string>()});
        }
        return c;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("corpus: ") + e.what());
    }
}

Corpus load_corpus(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path)) throw ConfigError("corpus file not found: " + path.string());
    return corpus_from_json(read_text_file(path));
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) { write_text_file(path, corpus_to_json(corpus)); }

std::set<std::string> resolve_terms(const std::vector<EntityNode>& entities, const std::vector<std::string>& terms) {
    std::set<std::string> wanted;
    for (const auto& t : terms) wanted.insert(to_lower(t));
    std::set<std::string> ids;
    for (const auto& e : entities) {
        bool hit = wanted.count(to_lower(e.name)) != 0;
        for (const auto& a : e.aliases) hit = hit || wanted.count(to_lower(a)) != 0;
        if (hit) ids.insert(e.id);
    }
    return ids;
}

namespace {

std::vector<std::string> articles_for(LiteratureClient& literature, const std::vector<std::string>& terms,
                                      const RetrievalPolicy& policy, const std::set<std::string>& skip) {
    std::set<std::string> seen(skip);
    std::vector<std::string> out;
    for (const auto& term : terms) {
        for (auto& id : literature.fetch_article_ids(term, policy).ids) {
            if (seen.insert(id).second) out.push_back(std::move(id));
        }
    }
    return out;
}

void append(AnnotationResult& into, AnnotationResult&& from) {
    into.entities.insert(into.entities.end(), from.entities.begin(), from.entities.end());
    into.relations.insert(into.relations.end(), from.relations.begin(), from.relations.end());
    into.failures.insert(into.failures.end(), from.failures.begin(), from.failures.end());
}

} // namespace

Corpus retrieve_corpus(LiteratureClient& literature, AnnotationClient& annotations, const RetrievalPlan& plan) {
    Corpus corpus;
    corpus.initial_seeds = make_initial_seeds(plan.seeds).terms;
    corpus.initial_articles = articles_for(literature, corpus.initial_seeds, plan.policy, {});
    if (corpus.initial_articles.empty()) throw EmptyResultError("initial seeds matched no articles");
    corpus.annotations = annotations.fetch_annotations(corpus.initial_articles);

    const auto anchors = resolve_terms(corpus.annotations.entities, corpus.initial_seeds);
    if (!anchors.empty()) {
        corpus.expanded_seeds =
            expand_seeds(corpus.annotations.relations, anchors, plan.expansion_threshold, plan.exclusions).terms;
    }
    const std::set<std::string> known(corpus.initial_articles.begin(), corpus.initial_articles.end());
    corpus.expanded_articles = articles_for(literature, corpus.expanded_seeds, plan.policy, known);
    if (!corpus.expanded_articles.empty()) {
        auto more = annotations.fetch_annotations(corpus.expanded_articles);
        append(corpus.annotations, std::move(more));
    }
    canonicalize(corpus.annotations);
    return corpus;
}

} // namespace litkg::ingest
