#include "litkg/ingest/pubmed.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "litkg/error.hpp"

namespace litkg::ingest {

namespace {

struct SearchPage {
    long long count = 0;
    std::vector<std::string> ids;
};

SearchPage parse_esearch(const std::string& body) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed search response: ") + e.what(), 0, e.byte);
    }
    const auto result = doc.find("esearchresult");
    if (result == doc.end() || !result->is_object()) throw ParseError("search response lacks esearchresult");
    SearchPage page;
    const auto& count = (*result)["count"];
    try {
        page.count = count.is_string() ? std::stoll(count.get<std::string>()) : count.get<long long>();
    } catch (const std::exception&) {
        throw ParseError("search response has a non-numeric count");
    }
    if (auto ids = result->find("idlist"); ids != result->end() && ids->is_array()) {
        for (const auto& id : *ids) {
            if (id.is_string()) {
                page.ids.push_back(id.get<std::string>());
            } else if (id.is_number_integer()) {
                page.ids.push_back(std::to_string(id.get<long long>()));
            }
        }
    }
    return page;
}

} // namespace

ArticleIdResult LiteratureClient::fetch_article_ids(std::string_view term, const RetrievalPolicy& policy) {
    policy.validate();
    std::map<std::string, std::string> params{
        {"db", "pubmed"},
        {"term", build_query(term, policy)},
        {"retmode", "json"},
        {"retmax", std::to_string(policy.max_articles)},
    };
    SearchPage page = parse_esearch(client_.get("/esearch.fcgi", params));

    ArticleIdResult result;
    result.total_hits = page.count;
    if (page.count > policy.max_articles) {
        result.capped = true;
        params["datetype"] = "pdat";
        params["reldate"] = std::to_string(policy.recency_window_years * 365);
        page = parse_esearch(client_.get("/esearch.fcgi", params));
    }

    std::set<std::string> seen;
    for (auto& id : page.ids) {
        if (result.ids.size() >= static_cast<std::size_t>(policy.max_articles)) break;
        if (seen.insert(id).second) result.ids.push_back(std::move(id));
    }
    return result;
}

std::vector<std::string> fetch_article_ids(std::string_view term, const RetrievalPolicy& policy,
                                           ServiceClient& client) {
    return LiteratureClient(client).fetch_article_ids(term, policy).ids;
}

} // namespace litkg::ingest
