#include "litkg/analyze/cohesion.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "litkg/error.hpp"
#include "litkg/topology.hpp"

namespace litkg::analyze {

namespace {

std::vector<std::size_t> core_numbers(const Topology& t) {
    const std::size_t n = t.size();
    std::vector<std::size_t> deg(n), pos(n), vert(n);
    std::size_t max_deg = 0;
    for (std::size_t v = 0; v < n; ++v) {
        deg[v] = t.degree(v);
        max_deg = std::max(max_deg, deg[v]);
    }
    std::vector<std::size_t> bin(max_deg + 1, 0);
    for (std::size_t v = 0; v < n; ++v) ++bin[deg[v]];
    std::size_t start = 0;
    for (auto& b : bin) {
        const std::size_t count = b;
        b = start;
        start += count;
    }
    for (std::size_t v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]];
        vert[pos[v]] = v;
        ++bin[deg[v]];
    }
    for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
    if (!bin.empty()) bin[0] = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t v = vert[i];
        for (std::size_t u : t.neighbors(v)) {
            if (deg[u] <= deg[v]) continue;
            const std::size_t du = deg[u];
            const std::size_t pu = pos[u];
            const std::size_t pw = bin[du];
            const std::size_t w = vert[pw];
            if (u != w) {
                pos[u] = pw;
                vert[pu] = w;
                pos[w] = pu;
                vert[pw] = u;
            }
            ++bin[du];
            --deg[u];
        }
    }
    return deg;
}

class CliqueSearch {
public:
    explicit CliqueSearch(const Topology& t) : t_(t) {}

    void expand(std::vector<std::size_t>& r, std::vector<std::size_t> p, std::vector<std::size_t> x) {
        if (r.size() + p.size() < best_) return;
        if (p.empty()) {
            if (!x.empty()) return;
            if (r.size() > best_) {
                best_ = r.size();
                found_.clear();
            }
            found_.push_back(r);
            return;
        }
        // Pivot maximizing |P ∩ N(u)|.
        std::size_t pivot = p.front();
        std::size_t pivot_hits = 0;
        for (const auto* set : {&p, &x}) {
            for (std::size_t u : *set) {
                const std::size_t hits = intersect(p, t_.neighbors(u)).size();
                if (hits > pivot_hits || (hits == pivot_hits && u < pivot)) {
                    pivot = u;
                    pivot_hits = hits;
                }
            }
        }
        std::vector<std::size_t> branch;
        for (std::size_t v : p) {
            if (!t_.adjacent(pivot, v)) branch.push_back(v);
        }
        for (std::size_t v : branch) {
            const auto nb = t_.neighbors(v);
            r.push_back(v);
            expand(r, intersect(p, nb), intersect(x, nb));
            r.pop_back();
            p.erase(std::find(p.begin(), p.end(), v));
            x.insert(std::upper_bound(x.begin(), x.end(), v), v);
            if (r.size() + p.size() < best_) return;
        }
    }

    std::vector<std::vector<std::size_t>> found() const { return found_; }

private:
    static std::vector<std::size_t> intersect(const std::vector<std::size_t>& a, std::span<const std::size_t> b) {
        std::vector<std::size_t> out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }

    const Topology& t_;
    std::size_t best_ = 0;
    std::vector<std::vector<std::size_t>> found_;
};

} // namespace

std::map<std::string, std::size_t> core_numbers(const KnowledgeGraph& graph) {
    const Topology t(graph);
    const auto cores = core_numbers(t);
    std::map<std::string, std::size_t> out;
    for (std::size_t v = 0; v < t.size(); ++v) out[t.id(v)] = cores[v];
    return out;
}

KCoreResult max_kcore_of(const KnowledgeGraph& graph, const std::string& node) {
    const Topology t(graph);
    const std::size_t start = t.require(node);
    const auto cores = core_numbers(t);
    KCoreResult result;
    result.k = cores[start];
    std::set<std::string> members{t.id(start)};
    std::deque<std::size_t> queue{start};
    std::vector<char> seen(t.size(), 0);
    seen[start] = 1;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v : t.neighbors(u)) {
            if (seen[v] || cores[v] < result.k) continue;
            seen[v] = 1;
            members.insert(t.id(v));
            queue.push_back(v);
        }
    }
    result.subgraph = graph.induced_subgraph(members);
    return result;
}

std::vector<std::vector<std::string>> max_cliques_containing(const KnowledgeGraph& graph, const std::string& node) {
    const Topology t(graph);
    const std::size_t v = t.require(node);
    CliqueSearch search(t);
    std::vector<std::size_t> r{v};
    const auto nb = t.neighbors(v);
    search.expand(r, std::vector<std::size_t>(nb.begin(), nb.end()), {});
    std::vector<std::vector<std::string>> out;
    for (auto clique : search.found()) {
        std::sort(clique.begin(), clique.end());
        std::vector<std::string> ids;
        for (std::size_t i : clique) ids.push_back(t.id(i));
        out.push_back(std::move(ids));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace litkg::analyze
