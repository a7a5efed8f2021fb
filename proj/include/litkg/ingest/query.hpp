#pragma once

#include <string>
#include <string_view>

namespace litkg::ingest {

inline constexpr std::string_view kPrimaryResearchFilter =
    " AND (Journal Article[pt] OR Clinical Trial[pt] OR Case Reports[pt] OR Randomized Controlled "
    "Trial[pt] OR Observational Study[pt] OR Comparative Study[pt] OR Evaluation Study[pt]) NOT "
    "(Review[pt] OR Systematic Review[pt] OR Meta-Analysis[pt] OR Editorial[pt] OR Letter[pt] OR "
    "Comment[pt])";

struct RetrievalPolicy {
    int max_articles = 2000;
    /// Applied only when a term has more hits than `max_articles`.
    int recency_window_years = 5;
    /// Appended verbatim after the term.
    std::string filter_template{kPrimaryResearchFilter};

    void validate() const;
};

/// `term` followed by the publication-type filter. The term is not quoted.
std::string build_query(std::string_view term, const RetrievalPolicy& policy = {});

} // namespace litkg::ingest
