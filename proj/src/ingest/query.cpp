#include "litkg/ingest/query.hpp"

#include "litkg/error.hpp"
#include "litkg/util.hpp"

namespace litkg::ingest {

void RetrievalPolicy::validate() const {
    if (max_articles <= 0) throw ConfigError("max_articles must be positive");
    if (recency_window_years <= 0) throw ConfigError("recency_window_years must be positive");
}

std::string build_query(std::string_view term, const RetrievalPolicy& policy) {
    if (trim(term).empty()) throw InvalidQueryError("query term is empty");
    std::string q(term);
    q += policy.filter_template;
    return q;
}

} // namespace litkg::ingest
