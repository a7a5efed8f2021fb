#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "litkg/ingest/query.hpp"
#include "litkg/ingest/service_client.hpp"

namespace litkg::ingest {

struct ArticleIdResult {
    std::vector<std::string> ids;
    long long total_hits = 0;
    /// True when the cap triggered and the recency window was applied.
    bool capped = false;
};

/// Literature search over an E-utilities style `esearch.fcgi` endpoint.
class LiteratureClient {
public:
    explicit LiteratureClient(ServiceClient& client) : client_(client) {}

    /// All ids when the term has at most `max_articles` hits; otherwise at most
    /// `max_articles` ids restricted to the recency window. Order is the
    /// service's default sort with duplicates removed.
    ArticleIdResult fetch_article_ids(std::string_view term, const RetrievalPolicy& policy);

private:
    ServiceClient& client_;
};

std::vector<std::string> fetch_article_ids(std::string_view term, const RetrievalPolicy& policy,
                                           ServiceClient& client);

} // namespace litkg::ingest
