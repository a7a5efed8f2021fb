#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "litkg/model.hpp"
#include "litkg/validate.hpp"

namespace litkg::report {

struct ViewNode {
    std::string id;
    std::string name;
    Category category = Category::gene;
};

struct ViewEdge {
    std::string source;
    std::string target;
    /// Relation kind label, or the edge class for overlays.
    std::string label;
    double weight = 1.0;
};

struct View {
    std::string title;
    std::vector<ViewNode> nodes;
    std::vector<ViewEdge> edges;
    /// True when edge labels are validation classes.
    bool classified = false;
};

View view_of(const KnowledgeGraph& graph, std::string title);
View view_of(const validate::Overlay& overlay, std::string title);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Fruchterman-Reingold layout in a 1000x1000 frame. Repulsion uses a grid of
/// cell size 2k, so only nearby pairs interact. Deterministic for a fixed seed.
std::vector<Point> force_layout(const View& view, std::uint64_t seed, int iterations = 0);

std::string node_color(Category c);
/// Colors for validation classes and relation kinds.
std::string edge_color(const std::string& label, bool classified);

struct HtmlOptions {
    std::uint64_t seed = 42;
    std::size_t render_cap = 5000;
    /// Node (id or name) whose Leiden module replaces a graph over the cap.
    std::optional<std::string> module_selector;
    double resolution = 1.0;
};

struct HtmlResult {
    std::string html;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::optional<std::string> warning;
};

/// Self-contained page: inline node/edge data with precomputed positions and
/// an inline canvas renderer (pan, zoom, hover labels).
HtmlResult render_html(const View& view, std::uint64_t seed);

/// Graphs over the render cap are reduced to the module of the selector, with
/// a warning; without a selector a ConfigError suggests selecting a module.
HtmlResult emit_html_view(const KnowledgeGraph& graph, const std::string& title, const HtmlOptions& options = {});
HtmlResult emit_html_view(const validate::Overlay& overlay, const std::string& title, const HtmlOptions& options = {});

} // namespace litkg::report
