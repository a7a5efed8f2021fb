#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "litkg/analyze/centrality.hpp"
#include "litkg/analyze/metrics.hpp"

namespace litkg::report {

struct FigureInputs {
    analyze::RankingTable ppr{"ppr", {}};
    analyze::RankingTable katz{"katz", {}};
    /// Emitted row for row (the caller picks the chemicals to show).
    analyze::RankingTable hetesim{"hetesim", {}};
    analyze::RankingTable disease_similarity{"disease_similarity", {}};
    analyze::RankingTable chemical_similarity{"chemical_similarity", {}};
    std::optional<analyze::MetricsRecord> metrics;
    /// Extra metric,value rows appended to the summary (community and cohesion results).
    std::vector<std::pair<std::string, std::string>> extra_metrics;
    std::size_t top_k = 20;
};

/// Columns: category,rank,id,name,score. Top k of gene, chemical and disease, in that order.
std::string top_by_category_csv(const analyze::RankingTable& table, std::size_t k);

/// Columns: metric,value.
std::string metrics_summary_csv(const std::optional<analyze::MetricsRecord>& metrics,
                                const std::vector<std::pair<std::string, std::string>>& extra);

/// File name -> CSV content for the six figure-equivalents: ppr_top.csv,
/// katz_top.csv, hetesim_chemicals.csv, disease_similarity_top.csv,
/// chemical_similarity_top.csv, metrics_summary.csv.
std::map<std::string, std::string> emit_figure_tables(const FigureInputs& inputs);

/// Writes each table as `<dir>/<prefix>_<name>` and returns the paths in name order.
std::vector<std::filesystem::path> write_figure_tables(const std::map<std::string, std::string>& tables,
                                                       const std::filesystem::path& dir, const std::string& prefix);

} // namespace litkg::report
