#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "litkg/model.hpp"

namespace litkg {

/// Immutable compressed adjacency view of a KnowledgeGraph. Node indices follow
/// id order, and each neighbor list is sorted, so index order equals id order.
class Topology {
public:
    explicit Topology(const KnowledgeGraph& graph);

    std::size_t size() const { return ids_.size(); }
    std::size_t num_edges() const { return adj_.size() / 2; }
    const std::string& id(std::size_t i) const { return ids_[i]; }
    Category category(std::size_t i) const { return categories_[i]; }
    std::optional<std::size_t> index(std::string_view id) const;
    /// Index of `id`; throws MissingNodeError.
    std::size_t require(std::string_view id) const;

    std::span<const std::size_t> neighbors(std::size_t i) const {
        return {adj_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::span<const double> weights(std::size_t i) const {
        return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
    double strength(std::size_t i) const { return strength_[i]; }
    double total_weight() const { return total_weight_; }
    bool adjacent(std::size_t a, std::size_t b) const;

    /// Hop distances from `source`; -1 marks unreachable nodes.
    std::vector<long> bfs(std::size_t source) const;

private:
    std::vector<std::string> ids_;
    std::vector<Category> categories_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> adj_;
    std::vector<double> weights_;
    std::vector<double> strength_;
    double total_weight_ = 0.0;
};

} // namespace litkg
