#include "litkg/topology.hpp"

#include <algorithm>
#include <deque>

#include "litkg/error.hpp"

namespace litkg {

Topology::Topology(const KnowledgeGraph& graph) {
    ids_.reserve(graph.num_nodes());
    for (const auto& [id, n] : graph.nodes()) {
        index_.emplace(id, ids_.size());
        ids_.push_back(id);
        categories_.push_back(n.category);
    }
    std::vector<std::vector<std::pair<std::size_t, double>>> lists(ids_.size());
    for (const auto& [pair, e] : graph.edges()) {
        const std::size_t a = index_.at(pair.first);
        const std::size_t b = index_.at(pair.second);
        lists[a].push_back({b, e.weight});
        lists[b].push_back({a, e.weight});
        total_weight_ += e.weight;
    }
    offsets_.assign(ids_.size() + 1, 0);
    strength_.assign(ids_.size(), 0.0);
    for (std::size_t i = 0; i < lists.size(); ++i) {
        std::sort(lists[i].begin(), lists[i].end());
        offsets_[i + 1] = offsets_[i] + lists[i].size();
        for (const auto& [j, w] : lists[i]) {
            adj_.push_back(j);
            weights_.push_back(w);
            strength_[i] += w;
        }
    }
}

std::optional<std::size_t> Topology::index(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Topology::require(std::string_view id) const {
    if (auto i = index(id)) return *i;
    throw MissingNodeError(std::string(id));
}

bool Topology::adjacent(std::size_t a, std::size_t b) const {
    const auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<long> Topology::bfs(std::size_t source) const {
    std::vector<long> dist(size(), -1);
    std::deque<std::size_t> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v : neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

} // namespace litkg
