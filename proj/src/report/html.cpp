#include "litkg/report/html.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "litkg/analyze/community.hpp"
#include "litkg/error.hpp"

namespace litkg::report {

namespace {

constexpr double kFrame = 1000.0;

std::string escape_html(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// JSON embedded in a <script> element must not contain "</".
std::string script_safe(std::string json) {
    std::string out;
    out.reserve(json.size());
    for (std::size_t i = 0; i < json.size(); ++i) {
        if (json[i] == '<' && i + 1 < json.size() && json[i + 1] == '/') {
            out += "<\\/";
            ++i;
        } else {
            out += json[i];
        }
    }
    return out;
}

const char* kScript = R"JS(
(function () {
  const data = JSON.parse(document.getElementById('litkg-data').textContent);
  const canvas = document.getElementById('view');
  const tip = document.getElementById('tip');
  const ctx = canvas.getContext('2d');
  const byId = new Map(data.nodes.map(n => [n.id, n]));
  let scale = 1, ox = 0, oy = 0, drag = null;
  function fit() {
    canvas.width = canvas.clientWidth; canvas.height = canvas.clientHeight;
    scale = Math.min(canvas.width, canvas.height) / 1050; ox = (canvas.width - 1000 * scale) / 2; oy = (canvas.height - 1000 * scale) / 2;
  }
  function draw() {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.lineWidth = 1;
    for (const e of data.edges) {
      const a = byId.get(e.source), b = byId.get(e.target);
      ctx.strokeStyle = e.color; ctx.globalAlpha = 0.6;
      ctx.beginPath(); ctx.moveTo(ox + a.x * scale, oy + a.y * scale); ctx.lineTo(ox + b.x * scale, oy + b.y * scale); ctx.stroke();
    }
    ctx.globalAlpha = 1;
    for (const n of data.nodes) {
      ctx.fillStyle = n.color; ctx.beginPath(); ctx.arc(ox + n.x * scale, oy + n.y * scale, 4, 0, 2 * Math.PI); ctx.fill();
    }
  }
  canvas.addEventListener('wheel', ev => {
    ev.preventDefault();
    const f = ev.deltaY < 0 ? 1.1 : 1 / 1.1;
    ox = ev.offsetX - (ev.offsetX - ox) * f; oy = ev.offsetY - (ev.offsetY - oy) * f; scale *= f; draw();
  });
  canvas.addEventListener('mousedown', ev => { drag = [ev.offsetX - ox, ev.offsetY - oy]; });
  window.addEventListener('mouseup', () => { drag = null; });
  canvas.addEventListener('mousemove', ev => {
    if (drag) { ox = ev.offsetX - drag[0]; oy = ev.offsetY - drag[1]; draw(); return; }
    let best = null, bd = 64;
    for (const n of data.nodes) {
      const dx = ox + n.x * scale - ev.offsetX, dy = oy + n.y * scale - ev.offsetY, d = dx * dx + dy * dy;
      if (d < bd) { bd = d; best = n; }
    }
    if (best) { tip.style.display = 'block'; tip.style.left = (ev.pageX + 10) + 'px'; tip.style.top = (ev.pageY + 10) + 'px'; tip.textContent = best.name + ' (' + best.id + ', ' + best.category + ')'; }
    else tip.style.display = 'none';
  });
  window.addEventListener('resize', () => { fit(); draw(); });
  fit(); draw();
})();
)JS";

} // namespace

View view_of(const KnowledgeGraph& graph, std::string title) {
    View v;
    v.title = std::move(title);
    for (const auto& [id, n] : graph.nodes()) v.nodes.push_back({id, n.name, n.category});
    for (const auto& [p, e] : graph.edges()) v.edges.push_back({p.first, p.second, e.kind_label(), e.weight});
    return v;
}

View view_of(const validate::Overlay& overlay, std::string title) {
    View v;
    v.title = std::move(title);
    v.classified = true;
    for (const auto& [id, n] : overlay.nodes) v.nodes.push_back({id, n.name, n.category});
    for (const auto& [p, e] : overlay.edges) {
        v.edges.push_back({p.first, p.second, std::string(validate::to_string(e.cls)),
                           e.relation ? e.relation->weight : 1.0});
    }
    return v;
}

std::string node_color(Category c) {
    switch (c) {
    case Category::gene: return "#4c72b0";
    case Category::disease: return "#c44e52";
    case Category::chemical: return "#55a868";
    case Category::variant: return "#8172b2";
    }
    return "#999999";
}

std::string edge_color(const std::string& label, bool classified) {
    if (classified) {
        if (label == "green") return "#2ca02c";
        if (label == "red") return "#d62728";
        if (label == "blue") return "#1f3fbf";
        if (label == "path") return "#ff9f1c";
        return "#999999";
    }
    static const std::map<std::string, std::string> kinds{
        {"association", "#8c8c8c"}, {"positive_correlation", "#2a9d8f"}, {"negative_correlation", "#e76f51"},
        {"bind", "#264653"},        {"cotreatment", "#e9c46a"},          {"drug_interaction", "#f4a261"},
        {"multitype", "#6d597a"}};
    const auto it = kinds.find(label);
    return it == kinds.end() ? "#b0b0b0" : it->second;
}

std::vector<Point> force_layout(const View& view, std::uint64_t seed, int iterations) {
    const std::size_t n = view.nodes.size();
    std::vector<Point> pos(n);
    if (n == 0) return pos;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, kFrame);
    for (auto& p : pos) {
        p.x = unit(rng);
        p.y = unit(rng);
    }
    if (n == 1) {
        pos[0] = {kFrame / 2, kFrame / 2};
        return pos;
    }
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(view.nodes[i].id, i);
    std::vector<std::pair<std::size_t, std::size_t>> links;
    for (const auto& e : view.edges) links.emplace_back(index.at(e.source), index.at(e.target));

    if (iterations <= 0) iterations = n <= 500 ? 300 : (n <= 2000 ? 150 : 80);
    const double k = std::sqrt(kFrame * kFrame / static_cast<double>(n));
    const double cell = 2 * k;
    const auto cells = static_cast<long>(std::ceil(kFrame / cell)) + 1;
    double temperature = kFrame / 10;
    const double cooling = temperature / (iterations + 1);

    std::vector<Point> disp(n);
    std::vector<std::vector<std::size_t>> grid(static_cast<std::size_t>(cells * cells));
    auto cell_of = [&](double v) { return std::clamp(static_cast<long>(v / cell), 0L, cells - 1); };

    for (int it = 0; it < iterations; ++it) {
        for (auto& g : grid) g.clear();
        for (std::size_t i = 0; i < n; ++i) {
            grid[static_cast<std::size_t>(cell_of(pos[i].y) * cells + cell_of(pos[i].x))].push_back(i);
        }
        std::fill(disp.begin(), disp.end(), Point{});
        for (std::size_t i = 0; i < n; ++i) {
            const long cx = cell_of(pos[i].x), cy = cell_of(pos[i].y);
            for (long gy = std::max(0L, cy - 1); gy <= std::min(cells - 1, cy + 1); ++gy) {
                for (long gx = std::max(0L, cx - 1); gx <= std::min(cells - 1, cx + 1); ++gx) {
                    for (std::size_t j : grid[static_cast<std::size_t>(gy * cells + gx)]) {
                        if (j == i) continue;
                        double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
                        double d2 = dx * dx + dy * dy;
                        if (d2 < 1e-9) {
                            // Coincident nodes: separate along a direction fixed by their indices.
                            dx = (i < j ? 1e-3 : -1e-3);
                            dy = 0;
                            d2 = dx * dx;
                        }
                        if (d2 > cell * cell) continue;
                        const double f = k * k / d2;
                        disp[i].x += dx * f;
                        disp[i].y += dy * f;
                    }
                }
            }
        }
        for (const auto& [a, b] : links) {
            const double dx = pos[a].x - pos[b].x, dy = pos[a].y - pos[b].y;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d < 1e-9) continue;
            const double f = d / k;
            disp[a].x -= dx * f;
            disp[a].y -= dy * f;
            disp[b].x += dx * f;
            disp[b].y += dy * f;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double len = std::sqrt(disp[i].x * disp[i].x + disp[i].y * disp[i].y);
            if (len > 0) {
                const double step = std::min(len, temperature);
                pos[i].x += disp[i].x / len * step;
                pos[i].y += disp[i].y / len * step;
            }
            pos[i].x = std::clamp(pos[i].x, 0.0, kFrame);
            pos[i].y = std::clamp(pos[i].y, 0.0, kFrame);
        }
        temperature -= cooling;
    }
    return pos;
}

HtmlResult render_html(const View& view, std::uint64_t seed) {
    const auto pos = force_layout(view, seed);
    nlohmann::ordered_json data;
    data["title"] = view.title;
    data["seed"] = seed;
    auto nodes = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < view.nodes.size(); ++i) {
        const auto& n = view.nodes[i];
        nodes.push_back({{"id", n.id},
                         {"name", n.name},
                         {"category", std::string(to_string(n.category))},
                         {"color", node_color(n.category)},
                         {"x", std::round(pos[i].x * 100) / 100},
                         {"y", std::round(pos[i].y * 100) / 100}});
    }
    auto edges = nlohmann::ordered_json::array();
    std::map<std::string, std::size_t> label_counts;
    for (const auto& e : view.edges) {
        ++label_counts[e.label];
        edges.push_back({{"source", e.source},
                         {"target", e.target},
                         {view.classified ? "edge_class" : "kind", e.label},
                         {"color", edge_color(e.label, view.classified)},
                         {"weight", e.weight}});
    }
    data["nodes"] = std::move(nodes);
    data["edges"] = std::move(edges);

    std::string legend;
    for (auto c : {Category::gene, Category::disease, Category::chemical, Category::variant}) {
        legend += fmt::format("<span class=\"node-key\" style=\"color:{}\">&#9679; {}</span>\n", node_color(c),
                              to_string(c));
    }
    for (const auto& [label, count] : label_counts) {
        legend += fmt::format("<span class=\"edge-key edge-{}\" style=\"color:{}\">&#9472; {} ({})</span>\n",
                              escape_html(label), edge_color(label, view.classified), escape_html(label), count);
    }

    HtmlResult r;
    r.nodes = view.nodes.size();
    r.edges = view.edges.size();
    r.html = fmt::format(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>{0}</title>\n"
        "<style>\nbody{{margin:0;font-family:sans-serif}}#legend{{padding:6px 10px;font-size:13px}}"
        "#legend span{{margin-right:14px}}#view{{width:100vw;height:calc(100vh - 40px);display:block}}"
        "#tip{{position:absolute;display:none;background:#fff;border:1px solid #888;padding:2px 6px;font-size:12px}}\n"
        "</style>\n</head>\n<body>\n<div id=\"legend\"><strong>{0}</strong> {1} nodes, {2} edges\n{3}</div>\n"
        "<canvas id=\"view\"></canvas>\n<div id=\"tip\"></div>\n"
        "<script id=\"litkg-data\" type=\"application/json\">{4}</script>\n<script>{5}</script>\n</body>\n</html>\n",
        escape_html(view.title), r.nodes, r.edges, legend, script_safe(data.dump()), kScript);
    return r;
}

HtmlResult emit_html_view(const KnowledgeGraph& graph, const std::string& title, const HtmlOptions& options) {
    if (graph.num_nodes() <= options.render_cap) return render_html(view_of(graph, title), options.seed);
    if (!options.module_selector) {
        throw ConfigError(fmt::format("graph has {} nodes, over the render cap of {}; select a module (module_of) "
                                      "to render",
                                      graph.num_nodes(), options.render_cap));
    }
    const auto id = graph.resolve(*options.module_selector);
    if (!id) throw MissingNodeError(*options.module_selector);
    const auto partition = analyze::leiden(graph, options.resolution, options.seed);
    const auto module = analyze::module_of(graph, partition, *id);
    if (module.num_nodes() > options.render_cap) {
        throw ConfigError(fmt::format("module of {} has {} nodes, still over the render cap of {}", *id,
                                      module.num_nodes(), options.render_cap));
    }
    auto r = render_html(view_of(module, title + " (module of " + graph.node(*id).name + ")"), options.seed);
    r.warning = fmt::format("graph has {} nodes, over the render cap of {}; rendered the {}-node module of {}",
                            graph.num_nodes(), options.render_cap, module.num_nodes(), *id);
    return r;
}

HtmlResult emit_html_view(const validate::Overlay& overlay, const std::string& title, const HtmlOptions& options) {
    if (overlay.nodes.size() > options.render_cap) {
        throw ConfigError(fmt::format("overlay has {} nodes, over the render cap of {}; restrict the graph to a module "
                                      "(module_of) before validation",
                                      overlay.nodes.size(), options.render_cap));
    }
    return render_html(view_of(overlay, title), options.seed);
}

} // namespace litkg::report
