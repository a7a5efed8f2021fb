#include "litkg/report/config.hpp"

#include <charconv>
#include <cstdlib>
#include <functional>

#include <nlohmann/json.hpp>

#include "litkg/error.hpp"
#include "litkg/util.hpp"

extern char** environ;

namespace litkg::report {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

std::string_view to_string(ReferenceFormat f) {
    switch (f) {
    case ReferenceFormat::string_tsv: return "string";
    case ReferenceFormat::dgidb_tsv: return "dgidb";
    case ReferenceFormat::kegg_kgml: return "kegg";
    case ReferenceFormat::reference_json: return "json";
    }
    return "string";
}

std::optional<ReferenceFormat> parse_reference_format(std::string_view s) {
    for (auto f : {ReferenceFormat::string_tsv, ReferenceFormat::dgidb_tsv, ReferenceFormat::kegg_kgml,
                   ReferenceFormat::reference_json}) {
        if (iequals(s, to_string(f))) return f;
    }
    return std::nullopt;
}

namespace {

void require_file(const std::optional<fs::path>& p, const char* field) {
    if (p && !fs::is_regular_file(*p)) throw ConfigError(std::string(field) + ": file not found: " + p->string());
}

void check_keys(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const Json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

template <typename T>
void read(const Json& obj, const char* key, std::optional<T>& out, const std::string& where) {
    if (!obj.contains(key)) return;
    if (obj.at(key).is_null()) {
        out.reset();
        return;
    }
    T value{};
    read(obj, key, value, where);
    out = value;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

void read_path(const Json& obj, const char* key, std::optional<fs::path>& out, const fs::path& base,
               const std::string& where) {
    std::optional<std::string> s;
    read(obj, key, s, where);
    if (s) out = resolve(base, *s);
}

void read_service(const Json& obj, ingest::ServiceConfig& s, const std::string& where) {
    check_keys(obj, {"base_url", "api_key", "requests_per_second", "max_attempts", "backoff_ms", "timeout_seconds"},
               where);
    read(obj, "base_url", s.base_url, where);
    read(obj, "api_key", s.api_key, where);
    read(obj, "requests_per_second", s.requests_per_second, where);
    read(obj, "max_attempts", s.max_attempts, where);
    read(obj, "backoff_ms", s.backoff_ms, where);
    read(obj, "timeout_seconds", s.timeout_seconds, where);
}

double parse_real(const std::string& name, const std::string& v) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) throw ConfigError(name + ": not a number: " + v);
    return d;
}

std::uint64_t parse_unsigned(const std::string& name, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(name + ": not an unsigned integer: " + v);
    return out;
}

} // namespace

void RunConfig::validate() const {
    filter.validate();
    retrieval.validate();
    centrality.validate();
    for (const auto* s : {&literature, &annotation}) {
        if (s->requests_per_second <= 0) throw ConfigError("requests_per_second must be positive");
        if (s->max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
    }
    if (initial_seeds.empty()) throw ConfigError("seeds.initial must not be empty");
    if (!(expansion_threshold > 0 && expansion_threshold < 1)) throw ConfigError("seeds.expansion_threshold must be in (0,1)");
    if (annotation_batch_size == 0) throw ConfigError("seeds.annotation_batch_size must be positive");
    if (trim(anchor).empty()) throw ConfigError("anchor must not be empty");
    if (!(resolution > 0)) throw ConfigError("resolution must be positive");
    if (top_k == 0) throw ConfigError("top_k must be positive");
    if (render_cap == 0) throw ConfigError("render_cap must be positive");
    if (similarity_top_q && *similarity_top_q == 0) throw ConfigError("similarity_top_q must be positive");
    require_file(blocklist, "blocklist");
    require_file(drug_aliases, "aliases.drug");
    require_file(compound_aliases, "aliases.compound");
    for (const auto& r : references) {
        if (r.name.empty()) throw ConfigError("references: every snapshot needs a name");
        require_file(r.path, ("references." + r.name).c_str());
    }
}

Environment litkg_environment() {
    Environment env;
    for (char** e = environ; e && *e; ++e) {
        std::string_view kv(*e);
        if (kv.rfind("LITKG_", 0) != 0) continue;
        const auto eq = kv.find('=');
        if (eq == std::string_view::npos) continue;
        env.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
    }
    return env;
}

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, {"literature", "annotation", "cache_dir", "filter", "retrieval", "centrality", "seeds", "anchor",
                   "similarity_chemical", "resolution", "top_k", "render_cap", "similarity_top_q", "blocklist",
                   "aliases", "references", "output_dir", "seed"},
               "config");
    RunConfig c;
    if (j.contains("literature")) read_service(j["literature"], c.literature, "literature");
    if (j.contains("annotation")) read_service(j["annotation"], c.annotation, "annotation");
    read_path(j, "cache_dir", c.cache_dir, base_dir, "config");

    if (j.contains("filter")) {
        const auto& f = j["filter"];
        check_keys(f, {"hi_conf_threshold", "lo_conf_threshold", "lo_conf_min_pubs", "drop_kinds",
                       "generic_degree_floor"},
                   "filter");
        read(f, "hi_conf_threshold", c.filter.hi_conf_threshold, "filter");
        read(f, "lo_conf_threshold", c.filter.lo_conf_threshold, "filter");
        read(f, "lo_conf_min_pubs", c.filter.lo_conf_min_pubs, "filter");
        read(f, "drop_kinds", c.filter.drop_kinds, "filter");
        read(f, "generic_degree_floor", c.filter.generic_degree_floor, "filter");
    }
    if (j.contains("retrieval")) {
        const auto& r = j["retrieval"];
        check_keys(r, {"max_articles", "recency_window_years", "filter_template"}, "retrieval");
        read(r, "max_articles", c.retrieval.max_articles, "retrieval");
        read(r, "recency_window_years", c.retrieval.recency_window_years, "retrieval");
        read(r, "filter_template", c.retrieval.filter_template, "retrieval");
    }
    if (j.contains("centrality")) {
        const auto& r = j["centrality"];
        check_keys(r, {"ppr_damping", "katz_factor", "katz_alpha", "tolerance", "max_iterations", "lambda_tolerance"},
                   "centrality");
        read(r, "ppr_damping", c.centrality.ppr_damping, "centrality");
        read(r, "katz_factor", c.centrality.katz_factor, "centrality");
        read(r, "katz_alpha", c.centrality.katz_alpha, "centrality");
        read(r, "tolerance", c.centrality.tolerance, "centrality");
        read(r, "max_iterations", c.centrality.max_iterations, "centrality");
        read(r, "lambda_tolerance", c.centrality.lambda_tolerance, "centrality");
    }
    if (j.contains("seeds")) {
        const auto& s = j["seeds"];
        check_keys(s, {"initial", "expansion_threshold", "exclusions", "annotation_batch_size"}, "seeds");
        read(s, "initial", c.initial_seeds, "seeds");
        read(s, "expansion_threshold", c.expansion_threshold, "seeds");
        read(s, "exclusions", c.expansion_exclusions, "seeds");
        read(s, "annotation_batch_size", c.annotation_batch_size, "seeds");
    }
    read(j, "anchor", c.anchor, "config");
    read(j, "similarity_chemical", c.similarity_chemical, "config");
    read(j, "resolution", c.resolution, "config");
    read(j, "top_k", c.top_k, "config");
    read(j, "render_cap", c.render_cap, "config");
    read(j, "similarity_top_q", c.similarity_top_q, "config");
    read_path(j, "blocklist", c.blocklist, base_dir, "config");
    if (j.contains("aliases")) {
        const auto& a = j["aliases"];
        check_keys(a, {"drug", "compound"}, "aliases");
        read_path(a, "drug", c.drug_aliases, base_dir, "aliases");
        read_path(a, "compound", c.compound_aliases, base_dir, "aliases");
    }
    if (j.contains("references")) {
        if (!j["references"].is_array()) throw ConfigError("references: expected an array");
        for (const auto& r : j["references"]) {
            check_keys(r, {"name", "kind", "format", "path", "sha256"}, "references");
            ReferenceSnapshot snap;
            std::string kind, format, path;
            read(r, "name", snap.name, "references");
            read(r, "kind", kind, "references");
            read(r, "format", format, "references");
            read(r, "path", path, "references");
            read(r, "sha256", snap.sha256, "references");
            const auto k = ref::parse_reference_kind(kind);
            if (!k) throw ConfigError("references." + snap.name + ": unknown kind '" + kind + "'");
            const auto f = parse_reference_format(format);
            if (!f) throw ConfigError("references." + snap.name + ": unknown format '" + format + "'");
            if (path.empty()) throw ConfigError("references." + snap.name + ": path is required");
            snap.kind = *k;
            snap.format = *f;
            snap.path = resolve(base_dir, path);
            snap.sha256 = to_lower(snap.sha256);
            c.references.push_back(std::move(snap));
        }
    }
    std::optional<fs::path> out;
    read_path(j, "output_dir", out, base_dir, "config");
    if (out) c.output_dir = *out;
    read(j, "seed", c.seed, "config");
    return c;
}

std::vector<std::string> apply_environment(RunConfig& c, const Environment& env) {
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"LITKG_CONFIG", [](const std::string&, const std::string&) {}},
        {"LITKG_ANCHOR", [&](const std::string&, const std::string& v) { c.anchor = v; }},
        {"LITKG_SIMILARITY_CHEMICAL", [&](const std::string&, const std::string& v) { c.similarity_chemical = v; }},
        {"LITKG_SEED", [&](const std::string& n, const std::string& v) { c.seed = parse_unsigned(n, v); }},
        {"LITKG_OUTPUT_DIR", [&](const std::string&, const std::string& v) { c.output_dir = v; }},
        {"LITKG_CACHE_DIR", [&](const std::string&, const std::string& v) { c.cache_dir = fs::path(v); }},
        {"LITKG_BLOCKLIST", [&](const std::string&, const std::string& v) { c.blocklist = fs::path(v); }},
        {"LITKG_LITERATURE_BASE_URL", [&](const std::string&, const std::string& v) { c.literature.base_url = v; }},
        {"LITKG_LITERATURE_API_KEY", [&](const std::string&, const std::string& v) { c.literature.api_key = v; }},
        {"LITKG_ANNOTATION_BASE_URL", [&](const std::string&, const std::string& v) { c.annotation.base_url = v; }},
        {"LITKG_ANNOTATION_API_KEY", [&](const std::string&, const std::string& v) { c.annotation.api_key = v; }},
        {"LITKG_REQUESTS_PER_SECOND",
         [&](const std::string& n, const std::string& v) {
             c.literature.requests_per_second = c.annotation.requests_per_second = parse_real(n, v);
         }},
        {"LITKG_MAX_ARTICLES",
         [&](const std::string& n, const std::string& v) { c.retrieval.max_articles = static_cast<int>(parse_unsigned(n, v)); }},
        {"LITKG_PPR_DAMPING", [&](const std::string& n, const std::string& v) { c.centrality.ppr_damping = parse_real(n, v); }},
        {"LITKG_RESOLUTION", [&](const std::string& n, const std::string& v) { c.resolution = parse_real(n, v); }},
        {"LITKG_TOP_K", [&](const std::string& n, const std::string& v) { c.top_k = parse_unsigned(n, v); }},
        {"LITKG_RENDER_CAP", [&](const std::string& n, const std::string& v) { c.render_cap = parse_unsigned(n, v); }},
    };
    std::vector<std::string> unknown;
    for (const auto& [name, value] : env) {
        if (name.rfind("LITKG_", 0) != 0) continue;
        const auto it = setters.find(name);
        if (it == setters.end()) {
            unknown.push_back(name);
        } else {
            it->second(name, value);
        }
    }
    return unknown;
}

RunConfig load_run_config(const fs::path& path, const Environment& env) {
    if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
    auto c = parse_run_config(read_text_file(path), path.parent_path());
    apply_environment(c, env);
    c.validate();
    return c;
}

RunConfig default_run_config(const Environment& env) {
    RunConfig c;
    apply_environment(c, env);
    c.validate();
    return c;
}

std::vector<ChecksumStatus> verify_checksums(const RunConfig& config) {
    std::vector<ChecksumStatus> out;
    for (const auto& r : config.references) {
        out.push_back({r.name, r.path, r.sha256, sha256_file(r.path)});
    }
    return out;
}

std::string config_to_json(const RunConfig& c) {
    auto service = [](const ingest::ServiceConfig& s) {
        return OrderedJson{{"base_url", s.base_url},
                           {"api_key", s.api_key.empty() ? "" : "<redacted>"},
                           {"requests_per_second", s.requests_per_second},
                           {"max_attempts", s.max_attempts},
                           {"backoff_ms", s.backoff_ms},
                           {"timeout_seconds", s.timeout_seconds}};
    };
    auto opt_path = [](const std::optional<fs::path>& p) { return p ? OrderedJson(p->string()) : OrderedJson(nullptr); };
    OrderedJson j;
    j["literature"] = service(c.literature);
    j["annotation"] = service(c.annotation);
    j["cache_dir"] = opt_path(c.cache_dir);
    j["filter"] = {{"hi_conf_threshold", c.filter.hi_conf_threshold},
                   {"lo_conf_threshold", c.filter.lo_conf_threshold},
                   {"lo_conf_min_pubs", c.filter.lo_conf_min_pubs},
                   {"drop_kinds", c.filter.drop_kinds},
                   {"generic_degree_floor", c.filter.generic_degree_floor}};
    j["retrieval"] = {{"max_articles", c.retrieval.max_articles},
                      {"recency_window_years", c.retrieval.recency_window_years},
                      {"filter_template", c.retrieval.filter_template}};
    j["centrality"] = {{"ppr_damping", c.centrality.ppr_damping},
                       {"katz_factor", c.centrality.katz_factor},
                       {"katz_alpha", c.centrality.katz_alpha ? OrderedJson(*c.centrality.katz_alpha) : OrderedJson(nullptr)},
                       {"tolerance", c.centrality.tolerance},
                       {"max_iterations", c.centrality.max_iterations},
                       {"lambda_tolerance", c.centrality.lambda_tolerance}};
    j["seeds"] = {{"initial", c.initial_seeds},
                  {"expansion_threshold", c.expansion_threshold},
                  {"exclusions", c.expansion_exclusions},
                  {"annotation_batch_size", c.annotation_batch_size}};
    j["anchor"] = c.anchor;
    j["similarity_chemical"] = c.similarity_chemical;
    j["resolution"] = c.resolution;
    j["top_k"] = c.top_k;
    j["render_cap"] = c.render_cap;
    j["similarity_top_q"] = c.similarity_top_q ? OrderedJson(*c.similarity_top_q) : OrderedJson(nullptr);
    j["blocklist"] = opt_path(c.blocklist);
    j["aliases"] = {{"drug", opt_path(c.drug_aliases)}, {"compound", opt_path(c.compound_aliases)}};
    auto refs = OrderedJson::array();
    for (const auto& r : c.references) {
        refs.push_back({{"name", r.name},
                        {"kind", std::string(ref::to_string(r.kind))},
                        {"format", std::string(to_string(r.format))},
                        {"path", r.path.string()},
                        {"sha256", r.sha256}});
    }
    j["references"] = std::move(refs);
    j["output_dir"] = c.output_dir.string();
    j["seed"] = c.seed;
    return j.dump(1) + "\n";
}

ref::LoadResult load_reference(const ReferenceSnapshot& snapshot, const RunConfig& config, const KnowledgeGraph& kg) {
    ref::LoadResult result;
    switch (snapshot.format) {
    case ReferenceFormat::string_tsv:
        result = ref::load_string(snapshot.path, ref::gene_query_from_graph(kg));
        break;
    case ReferenceFormat::dgidb_tsv:
        result = ref::load_dgidb(snapshot.path, ref::gene_query_from_graph(kg),
                                 config.drug_aliases ? ref::AliasTable::load(*config.drug_aliases) : ref::AliasTable{});
        break;
    case ReferenceFormat::kegg_kgml:
        result = ref::load_kegg(snapshot.path, config.compound_aliases ? ref::AliasTable::load(*config.compound_aliases)
                                                                       : ref::AliasTable{});
        break;
    case ReferenceFormat::reference_json:
        result.graph = ref::reference_from_json(read_text_file(snapshot.path));
        result.report.rows = result.report.rows_kept = result.graph.num_edges();
        break;
    }
    if (result.graph.kind() != snapshot.kind) {
        throw ConfigError("references." + snapshot.name + ": file holds a " +
                          std::string(ref::to_string(result.graph.kind())) + " graph, configured as " +
                          std::string(ref::to_string(snapshot.kind)));
    }
    return result;
}

} // namespace litkg::report
