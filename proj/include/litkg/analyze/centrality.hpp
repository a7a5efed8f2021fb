#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "litkg/model.hpp"

namespace litkg {
class Topology;
}

namespace litkg::analyze {

using ScoreMap = std::map<std::string, double>;

struct CentralityParams {
    double ppr_damping = 0.85;
    /// Katz decay is katz_factor / lambda_max.
    double katz_factor = 0.95;
    /// Overrides the decay when set.
    std::optional<double> katz_alpha;
    double tolerance = 1e-10;
    int max_iterations = 100000;
    double lambda_tolerance = 1e-8;

    void validate() const;
};

/// p = (1-d) e_source + d W p with W the weight-normalized transition matrix.
/// Dangling mass returns to the source. Iterates until the L1 change < tolerance.
ScoreMap personalized_pagerank(const KnowledgeGraph& graph, const std::string& source,
                               const CentralityParams& params = {});

/// Largest eigenvalue of the weighted adjacency (power iteration on A + I).
double spectral_radius(const Topology& topo, double tolerance = 1e-8, int max_iterations = 100000);

struct KatzResult {
    ScoreMap scores;
    double lambda_max = 0.0;
    double alpha = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Solves x = alpha A x + e_source by fixed-point iteration.
KatzResult personalized_katz(const KnowledgeGraph& graph, const std::string& source,
                             const CentralityParams& params = {});

struct RankingRow {
    std::string id;
    std::string name;
    Category category = Category::gene;
    double score = 0.0;
};

struct RankingTable {
    std::string metric;
    std::vector<RankingRow> rows;
};

/// Rows sorted by score descending, ties by id. `exclude` drops one node.
RankingTable rank_scores(const std::string& metric, const KnowledgeGraph& graph, const ScoreMap& scores,
                         const std::optional<std::string>& exclude = std::nullopt);

/// First k rows of `category`.
std::vector<RankingRow> top_by_category(const RankingTable& table, Category category, std::size_t k);

/// Columns: rank,id,name,category,score.
std::string ranking_to_csv(const std::vector<RankingRow>& rows);
std::string ranking_to_json(const RankingTable& table);

} // namespace litkg::analyze
