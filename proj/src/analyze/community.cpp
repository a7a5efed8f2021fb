#include "litkg/analyze/community.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "litkg/error.hpp"
#include "litkg/topology.hpp"
#include "litkg/util.hpp"

namespace litkg::analyze {

namespace {

struct WeightedGraph {
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self-loops
    std::vector<double> strength;                                  // includes internal weight

    std::size_t size() const { return adj.size(); }
};

WeightedGraph from_topology(const Topology& t) {
    WeightedGraph g;
    g.adj.resize(t.size());
    g.strength.resize(t.size());
    for (std::size_t v = 0; v < t.size(); ++v) {
        const auto nb = t.neighbors(v);
        const auto w = t.weights(v);
        for (std::size_t i = 0; i < nb.size(); ++i) g.adj[v].push_back({nb[i], w[i]});
        g.strength[v] = t.strength(v);
    }
    return g;
}

// Relabels to 0..k-1 in order of first appearance; returns k.
std::size_t compact(std::vector<std::size_t>& membership) {
    std::vector<std::size_t> remap(membership.size() + 1, SIZE_MAX);
    std::size_t next = 0;
    for (auto& c : membership) {
        if (c >= remap.size()) remap.resize(c + 1, SIZE_MAX);
        if (remap[c] == SIZE_MAX) remap[c] = next++;
        c = remap[c];
    }
    return next;
}

class Leiden {
public:
    Leiden(double resolution, std::uint64_t seed, double total_weight)
        : gamma_(resolution), seed_(seed), two_m_(2.0 * total_weight), rng_(seed) {}

    /// One full pass starting from `membership` over the base graph.
    std::vector<std::size_t> run(const WeightedGraph& base, std::vector<std::size_t> membership) {
        compact(membership);
        WeightedGraph g = base;
        std::vector<std::size_t> node_map(base.size());
        std::iota(node_map.begin(), node_map.end(), 0);
        std::vector<std::size_t> p = membership;

        for (int level = 0; level < 1000; ++level) {
            move_nodes_fast(g, p);
            const std::size_t count = compact(p);
            if (count == g.size()) break;
            std::vector<std::size_t> refined = refine(g, p, level);
            std::size_t refined_count = compact(refined);
            if (refined_count == g.size()) {
                refined = p;
                refined_count = count;
            }
            std::vector<std::size_t> next_p(refined_count);
            for (std::size_t v = 0; v < g.size(); ++v) next_p[refined[v]] = p[v];
            g = aggregate(g, refined, refined_count);
            for (auto& x : node_map) x = refined[x];
            p = std::move(next_p);
        }
        std::vector<std::size_t> out(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) out[i] = p[node_map[i]];
        compact(out);
        return out;
    }

private:
    double gain(double w_to, double s_v, double s_c) const { return w_to - gamma_ * s_v * s_c / two_m_; }

    void move_nodes_fast(const WeightedGraph& g, std::vector<std::size_t>& p) {
        const std::size_t n = g.size();
        std::vector<double> total(n, 0.0);
        std::vector<std::size_t> size(n, 0);
        for (std::size_t v = 0; v < n; ++v) {
            total[p[v]] += g.strength[v];
            ++size[p[v]];
        }
        std::vector<std::size_t> empty;
        for (std::size_t c = n; c-- > 0;) {
            if (size[c] == 0) empty.push_back(c);
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng_);
        std::deque<std::size_t> queue(order.begin(), order.end());
        std::vector<char> queued(n, 1);
        std::vector<double> w_to(n, 0.0);
        std::vector<std::size_t> touched;

        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            queued[v] = 0;
            const std::size_t old = p[v];
            const double s_v = g.strength[v];

            touched.clear();
            for (const auto& [u, w] : g.adj[v]) {
                if (w_to[p[u]] == 0.0) touched.push_back(p[u]);
                w_to[p[u]] += w;
            }
            total[old] -= s_v;
            --size[old];

            std::size_t best = old;
            double best_gain = gain(w_to[old], s_v, total[old]);
            for (std::size_t c : touched) {
                const double gc = gain(w_to[c], s_v, total[c]);
                if (gc > best_gain) {
                    best_gain = gc;
                    best = c;
                }
            }
            if (best_gain < 0.0 && size[old] > 0) {
                best = empty.back();
                empty.pop_back();
            }
            for (std::size_t c : touched) w_to[c] = 0.0;

            total[best] += s_v;
            ++size[best];
            p[v] = best;
            if (size[old] == 0 && best != old) empty.push_back(old);
            if (best == old) continue;
            for (const auto& [u, w] : g.adj[v]) {
                if (!queued[u] && p[u] != best) {
                    queued[u] = 1;
                    queue.push_back(u);
                }
            }
        }
    }

    std::vector<std::size_t> refine(const WeightedGraph& g, const std::vector<std::size_t>& p, int level) {
        constexpr double theta = 0.01;
        const std::size_t n = g.size();
        std::vector<std::size_t> refined(n);
        std::iota(refined.begin(), refined.end(), 0);

        std::size_t k = 0;
        for (std::size_t c : p) k = std::max(k, c + 1);
        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t v = 0; v < n; ++v) members[p[v]].push_back(v);

        std::vector<double> total(n);       // per refined community
        std::vector<double> external(n);    // weight to the rest of its parent community
        std::vector<std::size_t> size(n, 1);
        std::vector<double> w_to(n, 0.0);
        std::vector<std::size_t> touched;

        for (std::size_t c = 0; c < k; ++c) {
            const auto& nodes = members[c];
            if (nodes.size() < 2) continue;
            double s_c = 0.0;
            for (std::size_t v : nodes) s_c += g.strength[v];
            for (std::size_t v : nodes) {
                total[v] = g.strength[v];
                double ext = 0.0;
                for (const auto& [u, w] : g.adj[v]) {
                    if (p[u] == c) ext += w;
                }
                external[v] = ext;
            }
            std::seed_seq seq{seed_, static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(c)};
            std::mt19937_64 rng(seq);
            std::vector<std::size_t> order = nodes;
            std::shuffle(order.begin(), order.end(), rng);

            for (std::size_t v : order) {
                if (size[refined[v]] != 1) continue;
                const double s_v = g.strength[v];
                const double ext_v = external[refined[v]];
                if (ext_v < gamma_ * s_v * (s_c - s_v) / two_m_) continue;

                touched.clear();
                for (const auto& [u, w] : g.adj[v]) {
                    if (p[u] != c) continue;
                    if (w_to[refined[u]] == 0.0) touched.push_back(refined[u]);
                    w_to[refined[u]] += w;
                }
                const std::size_t own = refined[v];
                std::vector<std::pair<std::size_t, double>> options{{own, 0.0}};
                for (std::size_t r : touched) {
                    if (r == own) continue;
                    if (external[r] < gamma_ * total[r] * (s_c - total[r]) / two_m_) continue;
                    const double gr = gain(w_to[r], s_v, total[r]);
                    if (gr >= 0.0) options.push_back({r, gr});
                }
                double top = 0.0;
                for (const auto& [r, gr] : options) top = std::max(top, gr);
                std::vector<double> weights;
                for (const auto& [r, gr] : options) weights.push_back(std::exp((gr - top) / theta));
                std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
                const std::size_t target = options[pick(rng)].first;

                if (target != own) {
                    external[target] += ext_v - 2.0 * w_to[target];
                    total[target] += s_v;
                    ++size[target];
                    size[own] = 0;
                    refined[v] = target;
                }
                for (std::size_t r : touched) w_to[r] = 0.0;
            }
        }
        return refined;
    }

    static WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::size_t>& membership,
                                   std::size_t count) {
        WeightedGraph out;
        out.adj.resize(count);
        out.strength.assign(count, 0.0);
        std::vector<std::map<std::size_t, double>> acc(count);
        for (std::size_t v = 0; v < g.size(); ++v) {
            const std::size_t a = membership[v];
            out.strength[a] += g.strength[v];
            for (const auto& [u, w] : g.adj[v]) {
                const std::size_t b = membership[u];
                if (a != b) acc[a][b] += w;
            }
        }
        for (std::size_t a = 0; a < count; ++a) out.adj[a].assign(acc[a].begin(), acc[a].end());
        return out;
    }

    double gamma_;
    std::uint64_t seed_;
    double two_m_;
    std::mt19937_64 rng_;
};

// Renumbers by community size (descending), then smallest member index.
std::vector<std::size_t> canonical_order(const std::vector<std::size_t>& membership) {
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> stats;  // community -> (size, first member)
    for (std::size_t v = 0; v < membership.size(); ++v) {
        auto [it, inserted] = stats.try_emplace(membership[v], 0, v);
        ++it->second.first;
    }
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> keys;
    for (const auto& [c, s] : stats) keys.push_back({s.first, s.second, c});
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    });
    std::map<std::size_t, std::size_t> rank;
    for (std::size_t i = 0; i < keys.size(); ++i) rank[std::get<2>(keys[i])] = i;
    std::vector<std::size_t> out(membership.size());
    for (std::size_t v = 0; v < membership.size(); ++v) out[v] = rank[membership[v]];
    return out;
}

CommunityPartition finish(const KnowledgeGraph& graph, const Topology& t, const std::vector<std::size_t>& membership,
                          CommunityAlgorithm algorithm, double resolution, std::uint64_t seed) {
    CommunityPartition out;
    out.algorithm = algorithm;
    out.resolution = resolution;
    out.seed = seed;
    const auto ordered = canonical_order(membership);
    for (std::size_t v = 0; v < t.size(); ++v) out.assignment[t.id(v)] = ordered[v];
    out.modularity = modularity(graph, out.assignment, resolution);
    out.modularity_undefined = t.total_weight() <= 0.0;
    return out;
}

} // namespace

std::string_view to_string(CommunityAlgorithm a) {
    return a == CommunityAlgorithm::leiden ? "leiden" : "fast_greedy";
}

std::size_t CommunityPartition::num_communities() const {
    std::set<std::size_t> ids;
    for (const auto& [id, c] : assignment) ids.insert(c);
    return ids.size();
}

std::vector<std::vector<std::string>> CommunityPartition::communities() const {
    std::vector<std::vector<std::string>> out;
    for (const auto& [id, c] : assignment) {
        if (c >= out.size()) out.resize(c + 1);
        out[c].push_back(id);
    }
    return out;
}

double modularity(const KnowledgeGraph& graph, const std::map<std::string, std::size_t>& assignment,
                  double resolution) {
    std::vector<std::string> missing;
    for (const auto& [id, n] : graph.nodes()) {
        if (!assignment.count(id)) missing.push_back(id);
    }
    if (!missing.empty()) throw ValidationError("partition does not cover every node", missing);
    double m = 0.0;
    std::map<std::size_t, double> inside, total;
    for (const auto& [pair, e] : graph.edges()) {
        m += e.weight;
        const std::size_t a = assignment.at(pair.first);
        const std::size_t b = assignment.at(pair.second);
        if (a == b) inside[a] += e.weight;
        total[a] += e.weight;
        total[b] += e.weight;
    }
    if (m <= 0.0) return 0.0;
    double q = 0.0;
    for (const auto& [c, w] : inside) q += w / m;
    for (const auto& [c, s] : total) q -= resolution * (s / (2.0 * m)) * (s / (2.0 * m));
    return q;
}

CommunityPartition leiden(const KnowledgeGraph& graph, double resolution, std::uint64_t seed) {
    if (!(resolution > 0.0)) throw ConfigError("leiden resolution must be positive");
    const Topology t(graph);
    const WeightedGraph base = from_topology(t);
    std::vector<std::size_t> membership(t.size());
    std::iota(membership.begin(), membership.end(), 0);
    if (t.total_weight() > 0.0) {
        Leiden algo(resolution, seed, t.total_weight());
        for (int iteration = 0; iteration < 20; ++iteration) {
            auto next = algo.run(base, membership);
            auto a = next, b = membership;
            compact(a);
            compact(b);
            membership = std::move(next);
            if (iteration > 0 && a == b) break;
        }
    }
    return finish(graph, t, membership, CommunityAlgorithm::leiden, resolution, seed);
}

CommunityPartition fast_greedy(const KnowledgeGraph& graph) {
    const Topology t(graph);
    const std::size_t n = t.size();
    std::vector<std::size_t> membership(n);
    std::iota(membership.begin(), membership.end(), 0);
    const double m = t.total_weight();
    if (m <= 0.0) return finish(graph, t, membership, CommunityAlgorithm::fast_greedy, 1.0, 0);

    std::vector<double> a(n);
    std::vector<std::map<std::size_t, double>> nbr(n);
    for (std::size_t v = 0; v < n; ++v) {
        a[v] = t.strength(v) / (2.0 * m);
        const auto nb = t.neighbors(v);
        const auto w = t.weights(v);
        for (std::size_t i = 0; i < nb.size(); ++i) nbr[v][nb[i]] = w[i];
    }
    auto dq = [&](std::size_t i, std::size_t j) { return nbr[i].at(j) / m - 2.0 * a[i] * a[j]; };
    using Key = std::tuple<double, std::size_t, std::size_t>;
    std::set<Key> heap;
    std::map<std::pair<std::size_t, std::size_t>, double> current;
    auto insert = [&](std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        const double d = dq(i, j);
        current[{i, j}] = d;
        heap.insert({-d, i, j});
    };
    auto erase = [&](std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        auto it = current.find({i, j});
        if (it == current.end()) return;
        heap.erase({-it->second, i, j});
        current.erase(it);
    };
    for (std::size_t v = 0; v < n; ++v) {
        for (const auto& [u, w] : nbr[v]) {
            if (v < u) insert(v, u);
        }
    }
    std::vector<std::size_t> label(n);
    std::iota(label.begin(), label.end(), 0);

    while (!heap.empty()) {
        const auto [neg, i, j] = *heap.begin();
        if (-neg <= 0.0) break;
        // Merge j into i (i < j keeps the smaller representative).
        for (const auto& [k, w] : nbr[i]) erase(i, k);
        for (const auto& [k, w] : nbr[j]) erase(j, k);
        for (const auto& [k, w] : nbr[j]) {
            if (k == i) continue;
            nbr[i][k] += w;
            nbr[k][i] += w;
            nbr[k].erase(j);
        }
        nbr[i].erase(j);
        nbr[j].clear();
        a[i] += a[j];
        a[j] = 0.0;
        label[j] = i;
        for (const auto& [k, w] : nbr[i]) insert(i, k);
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t r = v;
        while (label[r] != r) r = label[r];
        membership[v] = r;
    }
    return finish(graph, t, membership, CommunityAlgorithm::fast_greedy, 1.0, 0);
}

KnowledgeGraph module_of(const KnowledgeGraph& graph, const CommunityPartition& partition, const std::string& node) {
    auto it = partition.assignment.find(node);
    if (it == partition.assignment.end()) throw MissingNodeError(node);
    std::set<std::string> members;
    for (const auto& [id, c] : partition.assignment) {
        if (c == it->second) members.insert(id);
    }
    return graph.induced_subgraph(members);
}

std::vector<std::filesystem::path> export_gene_lists(const KnowledgeGraph& graph, const CommunityPartition& partition,
                                                     const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    const auto groups = partition.communities();
    for (std::size_t c = 0; c < groups.size(); ++c) {
        std::vector<std::string> genes;
        for (const auto& id : groups[c]) {
            const EntityNode* n = graph.find_node(id);
            if (n && n->category == Category::gene) genes.push_back(n->name);
        }
        std::sort(genes.begin(), genes.end());
        std::string text;
        if (genes.empty()) {
            text = "# module " + std::to_string(c) + ": no genes\n";
        } else {
            for (const auto& g : genes) text += g + "\n";
        }
        const auto path = dir / ("module_" + std::to_string(c) + ".txt");
        write_text_file(path, text);
        out.push_back(path);
    }
    return out;
}

std::string partition_to_json(const CommunityPartition& p) {
    nlohmann::ordered_json j;
    j["algorithm"] = std::string(to_string(p.algorithm));
    j["resolution"] = p.resolution;
    j["seed"] = p.seed;
    j["modularity"] = p.modularity;
    j["modularity_undefined"] = p.modularity_undefined;
    j["communities"] = p.num_communities();
    j["assignment"] = p.assignment;
    return j.dump(2) + "\n";
}

} // namespace litkg::analyze
