#include "litkg/report/figures.hpp"

#include <cmath>

#include "litkg/util.hpp"

namespace litkg::report {

std::string top_by_category_csv(const analyze::RankingTable& table, std::size_t k) {
    std::string out = "category,rank,id,name,score\n";
    for (auto cat : {Category::gene, Category::chemical, Category::disease}) {
        const auto rows = analyze::top_by_category(table, cat, k);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out += std::string(to_string(cat)) + "," + std::to_string(i + 1) + "," + csv_field(rows[i].id) + "," +
                   csv_field(rows[i].name) + "," + format_double(rows[i].score, 12) + "\n";
        }
    }
    return out;
}

std::string metrics_summary_csv(const std::optional<analyze::MetricsRecord>& m,
                                const std::vector<std::pair<std::string, std::string>>& extra) {
    std::string out = "metric,value\n";
    auto row = [&](const std::string& name, const std::string& value) {
        out += csv_field(name) + "," + csv_field(value) + "\n";
    };
    if (m) {
        row("nodes", std::to_string(m->nodes));
        row("edges", std::to_string(m->edges));
        row("diameter", std::to_string(m->diameter));
        row("radius", std::to_string(m->radius));
        std::string center;
        for (const auto& c : m->center_nodes) center += (center.empty() ? "" : ";") + c;
        row("center_nodes", center);
        row("average_clustering", format_double(m->average_clustering, 6));
        row("transitivity", format_double(m->transitivity, 6));
        row("degree_assortativity", m->degree_assortativity ? format_double(*m->degree_assortativity, 6) : "");
    }
    for (const auto& [name, value] : extra) row(name, value);
    return out;
}

std::map<std::string, std::string> emit_figure_tables(const FigureInputs& in) {
    std::map<std::string, std::string> out;
    out["ppr_top.csv"] = top_by_category_csv(in.ppr, in.top_k);
    out["katz_top.csv"] = top_by_category_csv(in.katz, in.top_k);
    out["hetesim_chemicals.csv"] = analyze::ranking_to_csv(in.hetesim.rows);
    auto head = [&](const analyze::RankingTable& t) {
        return analyze::ranking_to_csv(
            std::vector<analyze::RankingRow>(t.rows.begin(), t.rows.begin() + static_cast<std::ptrdiff_t>(
                                                                                   std::min(in.top_k, t.rows.size()))));
    };
    out["disease_similarity_top.csv"] = head(in.disease_similarity);
    out["chemical_similarity_top.csv"] = head(in.chemical_similarity);
    out["metrics_summary.csv"] = metrics_summary_csv(in.metrics, in.extra_metrics);
    return out;
}

std::vector<std::filesystem::path> write_figure_tables(const std::map<std::string, std::string>& tables,
                                                       const std::filesystem::path& dir, const std::string& prefix) {
    std::vector<std::filesystem::path> paths;
    for (const auto& [name, content] : tables) {
        const auto p = dir / (prefix.empty() ? name : prefix + "_" + name);
        write_text_file(p, content);
        paths.push_back(p);
    }
    return paths;
}

} // namespace litkg::report
