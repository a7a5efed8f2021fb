#include "litkg/refgraph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "litkg/error.hpp"
#include "litkg/util.hpp"

namespace litkg::ref {

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open reference file: " + path.string());
    return in;
}

struct TsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    std::optional<std::size_t> column(std::initializer_list<const char*> names) const {
        for (const char* name : names) {
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (iequals(header[i], name)) return i;
            }
        }
        return std::nullopt;
    }
};

TsvTable read_tsv(std::istream& in) {
    TsvTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (t.header.empty()) {
            std::string_view h = line;
            while (!h.empty() && h.front() == '#') h.remove_prefix(1);
            t.header = split(h, '\t');
            for (auto& col : t.header) col = std::string(trim(col));
            continue;
        }
        if (line.front() == '#') continue;
        auto cells = split(line, '\t');
        if (cells.size() != t.header.size()) {
            throw ParseError("row has " + std::to_string(cells.size()) + " columns, header has " +
                                 std::to_string(t.header.size()),
                             line_no);
        }
        t.rows.push_back(std::move(cells));
        t.line_numbers.push_back(line_no);
    }
    return t;
}

double parse_score(const std::string& cell, std::size_t line_no) {
    const auto s = trim(cell);
    if (s.empty()) return 0.0;
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(s), &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("non-numeric score '" + std::string(s) + "'", line_no);
    }
}

std::map<std::string, std::string> lowered(const GeneQuery& q) {
    std::map<std::string, std::string> out;
    for (const auto& [sym, id] : q.symbol_to_id) out.emplace(to_lower(sym), id);
    return out;
}

// KEGG entry names are space-separated lists such as "hsa:3242 hsa:1234".
std::vector<std::string> kegg_names(const std::string& attr) {
    std::vector<std::string> out;
    std::istringstream ss(attr);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

} // namespace

std::string_view to_string(ReferenceKind k) {
    switch (k) {
    case ReferenceKind::gene_gene: return "gene_gene";
    case ReferenceKind::drug_gene: return "drug_gene";
    case ReferenceKind::pathway: return "pathway";
    }
    return "gene_gene";
}

std::optional<ReferenceKind> parse_reference_kind(std::string_view s) {
    const std::string t = to_lower(s);
    if (t == "gene_gene" || t == "string") return ReferenceKind::gene_gene;
    if (t == "drug_gene" || t == "dgidb") return ReferenceKind::drug_gene;
    if (t == "pathway" || t == "kegg") return ReferenceKind::pathway;
    return std::nullopt;
}

bool admits(ReferenceKind kind, Category a, Category b) {
    switch (kind) {
    case ReferenceKind::gene_gene: return a == Category::gene && b == Category::gene;
    case ReferenceKind::drug_gene:
        return (a == Category::gene && b == Category::chemical) || (a == Category::chemical && b == Category::gene);
    case ReferenceKind::pathway:
        return (a == Category::gene || a == Category::chemical) && (b == Category::gene || b == Category::chemical);
    }
    return false;
}

void ReferenceGraph::add_node(const std::string& id, std::string name, Category category) {
    auto [it, inserted] = nodes_.try_emplace(id, ReferenceNode{std::move(name), category});
    if (!inserted && it->second.category != category) throw ValidationError("reference node category clash", {id});
}

void ReferenceGraph::add_edge(const std::string& a, const std::string& b, const std::string& tag) {
    if (a == b) return;
    auto ia = nodes_.find(a);
    auto ib = nodes_.find(b);
    if (ia == nodes_.end()) throw MissingNodeError(a);
    if (ib == nodes_.end()) throw MissingNodeError(b);
    if (!admits(kind_, ia->second.category, ib->second.category)) {
        throw InvalidEdgeError("edge " + a + "--" + b + " does not fit a " + std::string(to_string(kind_)) +
                               " reference");
    }
    auto& tags = edges_[NodePair(a, b)];
    if (!tag.empty()) tags.insert(tag);
}

AliasTable AliasTable::load(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    AliasTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        const auto cells = split(line, '\t');
        if (cells.size() != 2 || trim(cells[0]).empty() || trim(cells[1]).empty()) {
            throw ParseError("alias table rows need exactly two tab-separated columns", line_no);
        }
        t.add(trim(cells[0]), std::string(trim(cells[1])));
    }
    return t;
}

void AliasTable::add(std::string_view key, std::string id) { map_[to_lower(key)] = std::move(id); }

std::optional<std::string> AliasTable::lookup(std::string_view key) const {
    auto it = map_.find(to_lower(key));
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

GeneQuery make_gene_query(const std::vector<std::string>& symbols, const AliasTable& aliases) {
    GeneQuery q;
    for (const auto& s : symbols) {
        if (auto id = aliases.lookup(s)) {
            q.symbol_to_id[s] = *id;
        } else {
            q.unmapped.push_back(s);
        }
    }
    return q;
}

GeneQuery gene_query_from_graph(const KnowledgeGraph& graph) {
    GeneQuery q;
    for (const auto& [id, n] : graph.nodes()) {
        if (n.category != Category::gene) continue;
        q.symbol_to_id.emplace(n.name, id);
        for (const auto& a : n.aliases) q.symbol_to_id.emplace(a, id);
    }
    return q;
}

LoadResult load_string(std::istream& in, const GeneQuery& query, const StringOptions& options) {
    const TsvTable t = read_tsv(in);
    LoadResult result{ReferenceGraph(ReferenceKind::gene_gene, "STRING"), {}};
    result.report.unmapped = query.unmapped;
    if (t.header.empty()) return result;

    const auto col_a = t.column({"preferredName_A", "node1", "protein1", "item_id_a"});
    const auto col_b = t.column({"preferredName_B", "node2", "protein2", "item_id_b"});
    if (!col_a || !col_b) throw ParseError("STRING export lacks interactor columns", 1);
    std::vector<std::size_t> channel_cols;
    for (const auto& ch : options.channels) {
        std::optional<std::size_t> c;
        if (ch == "experimental") {
            c = t.column({"escore", "experimental", "experimentally_determined_interaction", "experiments"});
        } else if (ch == "database") {
            c = t.column({"dscore", "database", "database_annotated"});
        } else {
            c = t.column({ch.c_str()});
        }
        if (!c) throw ParseError("STRING export lacks the '" + ch + "' channel column", 1);
        channel_cols.push_back(*c);
    }

    const auto symbols = lowered(query);
    auto resolve = [&](const std::string& sym) -> std::optional<std::string> {
        auto it = symbols.find(to_lower(trim(sym)));
        if (it == symbols.end()) return std::nullopt;
        return it->second;
    };
    std::map<std::string, std::string> names;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        ++result.report.rows;
        const auto a = resolve(row[*col_a]);
        const auto b = resolve(row[*col_b]);
        if (a) result.graph.add_node(*a, std::string(trim(row[*col_a])), Category::gene);
        if (b) result.graph.add_node(*b, std::string(trim(row[*col_b])), Category::gene);
        bool supported = false;
        for (std::size_t c : channel_cols) {
            if (parse_score(row[c], t.line_numbers[r]) > options.min_channel_score) supported = true;
        }
        if (!a || !b || !supported || *a == *b) continue;
        ++result.report.rows_kept;
        result.graph.add_edge(*a, *b, "STRING");
    }
    return result;
}

LoadResult load_string(const std::filesystem::path& path, const GeneQuery& query, const StringOptions& options) {
    auto in = open_or_throw(path);
    return load_string(in, query, options);
}

LoadResult load_dgidb(std::istream& in, const GeneQuery& query, const AliasTable& drug_aliases) {
    const TsvTable t = read_tsv(in);
    LoadResult result{ReferenceGraph(ReferenceKind::drug_gene, "DGIdb"), {}};
    result.report.unmapped = query.unmapped;
    if (t.header.empty()) return result;

    const auto col_gene = t.column({"gene_name", "gene_claim_name", "gene"});
    const auto col_drug = t.column({"drug_name", "drug_claim_name", "drug"});
    const auto col_src = t.column({"interaction_source_db_name", "source"});
    if (!col_gene || !col_drug) throw ParseError("DGIdb export lacks gene or drug columns", 1);

    const auto symbols = lowered(query);
    std::set<std::string> unmapped_drugs;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        ++result.report.rows;
        const std::string gene_sym(trim(row[*col_gene]));
        const std::string drug_name(trim(row[*col_drug]));
        if (gene_sym.empty() || drug_name.empty()) continue;
        auto git = symbols.find(to_lower(gene_sym));
        if (git == symbols.end()) continue;
        std::string drug_id;
        if (auto id = drug_aliases.lookup(drug_name)) {
            drug_id = *id;
        } else {
            std::string upper = drug_name;
            std::transform(upper.begin(), upper.end(), upper.begin(),
                           [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
            drug_id = "DGIDB:" + upper;
            unmapped_drugs.insert(drug_name);
        }
        result.graph.add_node(git->second, gene_sym, Category::gene);
        result.graph.add_node(drug_id, drug_name, Category::chemical);
        result.graph.add_edge(git->second, drug_id, col_src ? std::string(trim(row[*col_src])) : "DGIdb");
        ++result.report.rows_kept;
    }
    result.report.unmapped.insert(result.report.unmapped.end(), unmapped_drugs.begin(), unmapped_drugs.end());
    return result;
}

LoadResult load_dgidb(const std::filesystem::path& path, const GeneQuery& query, const AliasTable& drug_aliases) {
    auto in = open_or_throw(path);
    return load_dgidb(in, query, drug_aliases);
}

LoadResult load_kegg(std::istream& in, const AliasTable& aliases) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(std::string("malformed KGML: ") + e.message(), e.line());
    }
    const auto root = tree.get_child_optional("pathway");
    if (!root) throw ParseError("KGML document has no <pathway> root");

    LoadResult result{ReferenceGraph(ReferenceKind::pathway, "KEGG"), {}};
    const std::string pathway_name = root->get("<xmlattr>.name", "");
    const std::string title = root->get("<xmlattr>.title", "");
    result.graph.set_source("KEGG " + pathway_name + (title.empty() ? "" : " (" + title + ")"));

    std::set<std::string> unmapped;
    auto map_compound = [&](const std::string& name) {
        if (auto id = aliases.lookup(name)) return *id;
        const auto colon = name.find(':');
        const std::string bare = colon == std::string::npos ? name : name.substr(colon + 1);
        if (auto id = aliases.lookup(bare)) return *id;
        unmapped.insert(name);
        return "KEGG:" + bare;
    };
    auto map_gene = [&](const std::string& name) -> std::optional<std::string> {
        if (auto id = aliases.lookup(name)) return *id;
        const auto colon = name.find(':');
        if (colon != std::string::npos) {
            const std::string local = name.substr(colon + 1);
            if (!local.empty() && std::all_of(local.begin(), local.end(), ::isdigit)) return "GENE:" + local;
        }
        unmapped.insert(name);
        return std::nullopt;
    };

    std::map<std::string, std::vector<std::string>> entry_names;            // entry id -> names
    std::map<std::string, std::vector<std::string>> enzymes_by_reaction;   // rn:... -> gene ids
    for (const auto& [tag, node] : *root) {
        if (tag != "entry") continue;
        const std::string id = node.get("<xmlattr>.id", "");
        const std::string type = node.get("<xmlattr>.type", "");
        const auto names = kegg_names(node.get("<xmlattr>.name", ""));
        entry_names[id] = names;
        if (type != "gene" && type != "enzyme" && type != "ortholog") continue;
        const auto reactions = kegg_names(node.get("<xmlattr>.reaction", ""));
        if (reactions.empty()) continue;
        for (const auto& n : names) {
            auto gid = map_gene(n);
            if (!gid) continue;
            result.graph.add_node(*gid, n, Category::gene);
            for (const auto& rn : reactions) {
                auto& list = enzymes_by_reaction[rn];
                if (std::find(list.begin(), list.end(), *gid) == list.end()) list.push_back(*gid);
            }
        }
    }

    for (const auto& [tag, node] : *root) {
        if (tag != "reaction") continue;
        const auto reaction_names = kegg_names(node.get("<xmlattr>.name", ""));
        std::vector<std::string> substrates, products;
        for (const auto& [child_tag, child] : node) {
            if (child_tag != "substrate" && child_tag != "product") continue;
            std::string name = child.get("<xmlattr>.name", "");
            if (name.empty()) {
                const auto ref = entry_names.find(child.get("<xmlattr>.id", ""));
                if (ref == entry_names.end() || ref->second.empty()) continue;
                name = ref->second.front();
            }
            const std::string id = map_compound(name);
            result.graph.add_node(id, name, Category::chemical);
            auto& list = child_tag == "substrate" ? substrates : products;
            if (std::find(list.begin(), list.end(), id) == list.end()) list.push_back(id);
        }
        const std::string tag_name = reaction_names.empty() ? "reaction" : reaction_names.front();
        for (std::size_t i = 0; i < substrates.size(); ++i) {
            for (std::size_t j = i + 1; j < substrates.size(); ++j) {
                result.graph.add_edge(substrates[i], substrates[j], tag_name + ":co-reactant");
            }
            for (const auto& p : products) result.graph.add_edge(substrates[i], p, tag_name + ":product");
        }
        std::vector<std::string> enzymes;
        for (const auto& rn : reaction_names) {
            auto it = enzymes_by_reaction.find(rn);
            if (it == enzymes_by_reaction.end()) continue;
            for (const auto& g : it->second) {
                if (std::find(enzymes.begin(), enzymes.end(), g) == enzymes.end()) enzymes.push_back(g);
            }
        }
        for (const auto& s : substrates) {
            for (const auto& g : enzymes) result.graph.add_edge(s, g, tag_name + ":enzyme");
        }
    }
    result.report.unmapped.assign(unmapped.begin(), unmapped.end());
    return result;
}

LoadResult load_kegg(const std::filesystem::path& path, const AliasTable& aliases) {
    auto in = open_or_throw(path);
    return load_kegg(in, aliases);
}

std::string to_json(const ReferenceGraph& graph) {
    nlohmann::ordered_json root;
    root["kind"] = std::string(to_string(graph.kind()));
    root["source"] = graph.source();
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& [id, n] : graph.nodes()) {
        nodes.push_back({{"id", id},
                         {"name", n.name},
                         {"category", std::string(to_string(n.category))},
                         {"aliases", nlohmann::ordered_json::array()}});
    }
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [pair, tags] : graph.edges()) {
        edges.push_back({{"source", pair.first},
                         {"target", pair.second},
                         {"evidence", std::vector<std::string>(tags.begin(), tags.end())}});
    }
    root["nodes"] = std::move(nodes);
    root["edges"] = std::move(edges);
    return root.dump(1) + "\n";
}

ReferenceGraph reference_from_json(std::string_view text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed reference JSON: ") + e.what(), 0, e.byte);
    }
    const auto kind = parse_reference_kind(root.value("kind", ""));
    if (!kind) throw ValidationError("reference JSON has an unknown kind", {root.value("kind", "")});
    ReferenceGraph g(*kind, root.value("source", ""));
    std::vector<std::string> offenders;
    for (const auto& n : root.at("nodes")) {
        const auto cat = parse_category(n.value("category", ""));
        if (!cat) {
            offenders.push_back(n.value("id", "?") + ": unknown category");
            continue;
        }
        g.add_node(n.at("id").get<std::string>(), n.value("name", ""), *cat);
    }
    if (!offenders.empty()) throw ValidationError("reference JSON violates the schema", offenders);
    for (const auto& e : root.at("edges")) {
        const auto a = e.at("source").get<std::string>();
        const auto b = e.at("target").get<std::string>();
        const auto tags = e.value("evidence", std::vector<std::string>{});
        if (tags.empty()) {
            g.add_edge(a, b, "");
        }
        for (const auto& t : tags) g.add_edge(a, b, t);
    }
    return g;
}

} // namespace litkg::ref
