#include "litkg/analyze/centrality.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "litkg/error.hpp"
#include "litkg/topology.hpp"
#include "litkg/util.hpp"

namespace litkg::analyze {

void CentralityParams::validate() const {
    if (!(ppr_damping > 0.0 && ppr_damping < 1.0)) throw ConfigError("PPR damping must lie in (0, 1)");
    if (!(katz_factor >= 0.0 && katz_factor < 1.0)) throw ConfigError("Katz factor must lie in [0, 1)");
    if (katz_alpha && *katz_alpha < 0.0) throw ConfigError("Katz alpha must be non-negative");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (max_iterations < 1) throw ConfigError("max_iterations must be positive");
}

ScoreMap personalized_pagerank(const KnowledgeGraph& graph, const std::string& source, const CentralityParams& params) {
    params.validate();
    const Topology t(graph);
    const std::size_t s = t.require(source);
    const std::size_t n = t.size();
    const double d = params.ppr_damping;

    std::vector<double> p(n, 0.0), next(n);
    p[s] = 1.0;
    double change = 0.0;
    for (int it = 0; it < params.max_iterations; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        double dangling = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            if (p[v] == 0.0) continue;
            const double sv = t.strength(v);
            if (sv <= 0.0) {
                dangling += p[v];
                continue;
            }
            const auto nb = t.neighbors(v);
            const auto w = t.weights(v);
            for (std::size_t i = 0; i < nb.size(); ++i) next[nb[i]] += d * p[v] * w[i] / sv;
        }
        next[s] += (1.0 - d) + d * dangling;
        change = 0.0;
        for (std::size_t v = 0; v < n; ++v) change += std::abs(next[v] - p[v]);
        p.swap(next);
        if (change < params.tolerance) {
            ScoreMap out;
            for (std::size_t v = 0; v < n; ++v) out[t.id(v)] = p[v];
            return out;
        }
    }
    throw ConvergenceError("personalized PageRank did not converge", change, params.max_iterations);
}

double spectral_radius(const Topology& t, double tolerance, int max_iterations) {
    const std::size_t n = t.size();
    if (n == 0 || t.num_edges() == 0) return 0.0;
    // Shifting by I keeps the dominant eigenvalue unique on bipartite graphs.
    // Stops on the eigen-residual |Ax - rho x|, which bounds the error of rho for symmetric A.
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), y(n);
    for (int it = 0; it < max_iterations; ++it) {
        for (std::size_t v = 0; v < n; ++v) {
            double acc = x[v];
            const auto nb = t.neighbors(v);
            const auto w = t.weights(v);
            for (std::size_t i = 0; i < nb.size(); ++i) acc += w[i] * x[nb[i]];
            y[v] = acc;
        }
        double rayleigh = 0.0, norm = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            rayleigh += x[v] * y[v];
            norm += y[v] * y[v];
        }
        double residual = 0.0;
        for (std::size_t v = 0; v < n; ++v) residual += (y[v] - rayleigh * x[v]) * (y[v] - rayleigh * x[v]);
        const double lambda = rayleigh - 1.0;
        if (std::sqrt(residual) <= tolerance * std::abs(lambda)) return lambda;
        norm = std::sqrt(norm);
        for (std::size_t v = 0; v < n; ++v) x[v] = y[v] / norm;
    }
    throw ConvergenceError("power iteration for lambda_max did not converge", 0.0, max_iterations);
}

KatzResult personalized_katz(const KnowledgeGraph& graph, const std::string& source, const CentralityParams& params) {
    params.validate();
    const Topology t(graph);
    const std::size_t s = t.require(source);
    const std::size_t n = t.size();

    KatzResult result;
    result.lambda_max = spectral_radius(t, params.lambda_tolerance, params.max_iterations);
    if (params.katz_alpha) {
        result.alpha = *params.katz_alpha;
        if (result.alpha * result.lambda_max >= 1.0) throw ConfigError("Katz alpha * lambda_max must be below 1");
    } else {
        result.alpha = result.lambda_max > 0.0 ? params.katz_factor / result.lambda_max : 0.0;
    }

    std::vector<double> x(n, 0.0), next(n);
    x[s] = 1.0;
    double residual = 0.0;
    for (int it = 1; it <= params.max_iterations; ++it) {
        double scale = 1.0;
        residual = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            const auto nb = t.neighbors(v);
            const auto w = t.weights(v);
            for (std::size_t i = 0; i < nb.size(); ++i) acc += w[i] * x[nb[i]];
            next[v] = result.alpha * acc + (v == s ? 1.0 : 0.0);
            residual = std::max(residual, std::abs(next[v] - x[v]));
            scale = std::max(scale, std::abs(next[v]));
        }
        x.swap(next);
        // `residual` is the fixed-point residual of the previous iterate; the
        // cutoff scales with the solution so large graphs stay attainable.
        if (residual < params.tolerance * scale) {
            result.iterations = it;
            break;
        }
        if (it == params.max_iterations) throw ConvergenceError("Katz iteration did not converge", residual, it);
    }
    // Report the residual of the returned vector itself.
    result.residual = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        double acc = 0.0;
        const auto nb = t.neighbors(v);
        const auto w = t.weights(v);
        for (std::size_t i = 0; i < nb.size(); ++i) acc += w[i] * x[nb[i]];
        result.residual = std::max(result.residual, std::abs(x[v] - result.alpha * acc - (v == s ? 1.0 : 0.0)));
    }
    for (std::size_t v = 0; v < n; ++v) result.scores[t.id(v)] = x[v];
    return result;
}

RankingTable rank_scores(const std::string& metric, const KnowledgeGraph& graph, const ScoreMap& scores,
                         const std::optional<std::string>& exclude) {
    RankingTable table{metric, {}};
    for (const auto& [id, score] : scores) {
        if (exclude && id == *exclude) continue;
        if (!std::isfinite(score)) throw Error("non-finite " + metric + " score for " + id);
        const EntityNode& n = graph.node(id);
        table.rows.push_back({id, n.name, n.category, score});
    }
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const RankingRow& a, const RankingRow& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    return table;
}

std::vector<RankingRow> top_by_category(const RankingTable& table, Category category, std::size_t k) {
    if (k == 0) throw ConfigError("top-k must be at least 1");
    std::vector<RankingRow> out;
    for (const auto& row : table.rows) {
        if (out.size() >= k) break;
        if (row.category == category) out.push_back(row);
    }
    return out;
}

std::string ranking_to_csv(const std::vector<RankingRow>& rows) {
    std::string out = "rank,id,name,category,score\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out += std::to_string(i + 1) + "," + csv_field(r.id) + "," + csv_field(r.name) + "," +
               std::string(to_string(r.category)) + "," + format_double(r.score, 12) + "\n";
    }
    return out;
}

std::string ranking_to_json(const RankingTable& table) {
    nlohmann::ordered_json j;
    j["metric"] = table.metric;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        rows.push_back({{"rank", i + 1},
                        {"id", r.id},
                        {"name", r.name},
                        {"category", std::string(to_string(r.category))},
                        {"score", r.score}});
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

} // namespace litkg::analyze
