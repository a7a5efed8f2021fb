#include "litkg/analyze/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "litkg/build.hpp"
#include "litkg/error.hpp"
#include "litkg/topology.hpp"

namespace litkg::analyze {

namespace {

// Triangles through each node, by merging sorted neighbor lists.
std::vector<std::size_t> triangles(const Topology& t) {
    std::vector<std::size_t> tri(t.size(), 0);
    for (std::size_t u = 0; u < t.size(); ++u) {
        const auto nu = t.neighbors(u);
        for (std::size_t v : nu) {
            if (v <= u) continue;
            const auto nv = t.neighbors(v);
            auto a = std::upper_bound(nu.begin(), nu.end(), v);
            auto b = std::upper_bound(nv.begin(), nv.end(), v);
            while (a != nu.end() && b != nv.end()) {
                if (*a < *b) {
                    ++a;
                } else if (*b < *a) {
                    ++b;
                } else {
                    ++tri[u];
                    ++tri[v];
                    ++tri[*a];
                    ++a;
                    ++b;
                }
            }
        }
    }
    return tri;
}

double coefficient(std::size_t tri, std::size_t deg) {
    if (deg < 2) return 0.0;
    return 2.0 * static_cast<double>(tri) / (static_cast<double>(deg) * static_cast<double>(deg - 1));
}

struct Eccentricities {
    long diameter = 0;
    long radius = 0;
    std::vector<std::size_t> center;
};

// Bounded eccentricity search: each BFS tightens lower/upper eccentricity
// bounds of every candidate; candidates drop out once resolved or once they
// can affect neither the diameter nor the center.
Eccentricities bounded_eccentricities(const Topology& t) {
    const std::size_t n = t.size();
    constexpr long inf = std::numeric_limits<long>::max();
    std::vector<long> lower(n, 0), upper(n, inf), ecc(n, -1);
    std::vector<char> candidate(n, 1);
    std::size_t remaining = n;
    long diam_lower = 0;
    long rad_upper = inf;
    bool pick_upper = true;

    while (remaining > 0) {
        std::size_t v = n;
        for (std::size_t w = 0; w < n; ++w) {
            if (!candidate[w]) continue;
            if (v == n) {
                v = w;
                continue;
            }
            const bool better = pick_upper ? (upper[w] > upper[v] || (upper[w] == upper[v] && t.degree(w) > t.degree(v)))
                                           : (lower[w] < lower[v] || (lower[w] == lower[v] && t.degree(w) > t.degree(v)));
            if (better) v = w;
        }
        pick_upper = !pick_upper;

        const auto dist = t.bfs(v);
        const long e = *std::max_element(dist.begin(), dist.end());
        ecc[v] = e;
        candidate[v] = 0;
        --remaining;
        diam_lower = std::max(diam_lower, e);
        rad_upper = std::min(rad_upper, e);

        for (std::size_t w = 0; w < n; ++w) {
            if (!candidate[w]) continue;
            const long d = dist[w];
            lower[w] = std::max(lower[w], std::max(e - d, d));
            upper[w] = std::min(upper[w], e + d);
        }
        for (std::size_t w = 0; w < n; ++w) {
            if (!candidate[w]) continue;
            if (lower[w] == upper[w]) {
                ecc[w] = lower[w];
                diam_lower = std::max(diam_lower, ecc[w]);
                rad_upper = std::min(rad_upper, ecc[w]);
                candidate[w] = 0;
                --remaining;
            }
        }
        for (std::size_t w = 0; w < n; ++w) {
            if (candidate[w] && upper[w] <= diam_lower && lower[w] > rad_upper) {
                candidate[w] = 0;
                --remaining;
            }
        }
    }
    Eccentricities out{diam_lower, rad_upper, {}};
    for (std::size_t w = 0; w < n; ++w) {
        if (ecc[w] == rad_upper) out.center.push_back(w);
    }
    return out;
}

} // namespace

MetricsRecord characterize(const KnowledgeGraph& graph, const std::optional<std::string>& anchor) {
    if (graph.num_nodes() == 0) throw EmptyResultError("cannot characterize an empty graph");

    MetricsRecord m;
    const KnowledgeGraph* g = &graph;
    KnowledgeGraph component;
    {
        const Topology full(graph);
        const auto dist = full.bfs(0);
        if (std::any_of(dist.begin(), dist.end(), [](long d) { return d < 0; })) {
            std::string start;
            if (anchor) {
                const auto id = graph.resolve(*anchor);
                if (!id) throw MissingNodeError(*anchor);
                start = *id;
            } else {
                std::vector<char> seen(full.size(), 0);
                std::size_t best = 0;
                for (std::size_t s = 0; s < full.size(); ++s) {
                    if (seen[s]) continue;
                    const auto ds = full.bfs(s);
                    std::size_t size = 0;
                    for (std::size_t i = 0; i < ds.size(); ++i) {
                        if (ds[i] >= 0) {
                            seen[i] = 1;
                            ++size;
                        }
                    }
                    if (size > best) {
                        best = size;
                        start = full.id(s);
                    }
                }
            }
            component = graph.induced_subgraph(build::connected_component(graph, start));
            g = &component;
            m.warning = "graph is disconnected; metrics computed on the component containing " + start;
        }
    }

    const Topology t(*g);
    m.nodes = t.size();
    m.edges = t.num_edges();

    const auto ecc = bounded_eccentricities(t);
    m.diameter = ecc.diameter;
    m.radius = ecc.radius;
    for (std::size_t c : ecc.center) {
        m.center_nodes.push_back(t.id(c));
        const auto dist = t.bfs(c);
        const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
        m.center_closeness[t.id(c)] = total > 0 ? static_cast<double>(t.size() - 1) / total : 0.0;
    }

    const auto tri = triangles(t);
    double clustering_sum = 0.0;
    double closed = 0.0;
    double triples = 0.0;
    for (std::size_t v = 0; v < t.size(); ++v) {
        const std::size_t k = t.degree(v);
        const double c = coefficient(tri[v], k);
        m.local_clustering[t.id(v)] = c;
        clustering_sum += c;
        closed += static_cast<double>(tri[v]);
        triples += static_cast<double>(k) * static_cast<double>(k > 0 ? k - 1 : 0) / 2.0;
        ++m.degree_histogram[k];
    }
    m.average_clustering = clustering_sum / static_cast<double>(t.size());
    m.transitivity = triples > 0 ? closed / triples : 0.0;

    // Pearson correlation over both orientations of every edge.
    double sx = 0, sxx = 0, sxy = 0, count = 0;
    for (std::size_t u = 0; u < t.size(); ++u) {
        const double du = static_cast<double>(t.degree(u));
        for (std::size_t v : t.neighbors(u)) {
            const double dv = static_cast<double>(t.degree(v));
            sx += du;
            sxx += du * du;
            sxy += du * dv;
            count += 1;
        }
    }
    if (count > 0) {
        const double mean = sx / count;
        const double var = sxx / count - mean * mean;
        if (var > 1e-12 * std::max(1.0, mean * mean)) {
            m.degree_assortativity = std::clamp((sxy / count - mean * mean) / var, -1.0, 1.0);
        }
    }
    return m;
}

LocalClustering local_clustering_percentile(const KnowledgeGraph& graph, const std::string& node) {
    const Topology t(graph);
    const std::size_t idx = t.require(node);
    const auto tri = triangles(t);
    LocalClustering out;
    out.coefficient = coefficient(tri[idx], t.degree(idx));
    if (t.degree(idx) < 2) return out;
    std::size_t population = 0;
    std::size_t smaller = 0;
    for (std::size_t v = 0; v < t.size(); ++v) {
        if (t.degree(v) < 2) continue;
        ++population;
        if (coefficient(tri[v], t.degree(v)) < out.coefficient) ++smaller;
    }
    out.percentile = static_cast<double>(smaller) / static_cast<double>(population);
    return out;
}

std::string metrics_to_json(const MetricsRecord& m) {
    nlohmann::ordered_json j;
    j["nodes"] = m.nodes;
    j["edges"] = m.edges;
    j["diameter"] = m.diameter;
    j["radius"] = m.radius;
    j["center_nodes"] = m.center_nodes;
    j["center_closeness"] = m.center_closeness;
    j["average_clustering"] = m.average_clustering;
    j["transitivity"] = m.transitivity;
    j["degree_assortativity"] =
        m.degree_assortativity ? nlohmann::ordered_json(*m.degree_assortativity) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [d, c] : m.degree_histogram) hist[std::to_string(d)] = c;
    j["degree_histogram"] = std::move(hist);
    j["local_clustering"] = m.local_clustering;
    j["warning"] = m.warning ? nlohmann::ordered_json(*m.warning) : nlohmann::ordered_json(nullptr);
    return j.dump(2) + "\n";
}

} // namespace litkg::analyze
