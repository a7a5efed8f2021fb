#include "litkg/ingest/seeds.hpp"

#include <map>

#include "litkg/error.hpp"
#include "litkg/util.hpp"

namespace litkg::ingest {

SeedSet make_initial_seeds(std::vector<std::string> terms) {
    if (terms.empty()) throw InvalidQueryError("seed set is empty");
    std::set<std::string> seen;
    for (const auto& t : terms) {
        if (trim(t).empty()) throw InvalidQueryError("seed term is empty");
        if (!seen.insert(to_lower(t)).second) throw InvalidQueryError("duplicate seed term: " + t);
    }
    return {std::move(terms), SeedStage::initial};
}

SeedSet expand_seeds(const std::vector<RawRelation>& relations, const std::set<std::string>& anchors,
                     double threshold, const std::set<std::string>& exclusions) {
    if (anchors.empty()) throw InvalidQueryError("seed expansion needs at least one anchor");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("seed threshold must lie in (0,1)");

    std::set<std::string> excluded;
    for (const auto& e : exclusions) excluded.insert(to_lower(e));

    struct Tally {
        std::string name;
        double sum = 0.0;
        std::size_t count = 0;
    };
    std::map<std::string, Tally> tallies;
    for (const auto& r : relations) {
        const bool a_anchor = anchors.count(r.a.id) != 0;
        const bool b_anchor = anchors.count(r.b.id) != 0;
        if (a_anchor == b_anchor) continue;
        const EntityRef& other = a_anchor ? r.b : r.a;
        Tally& t = tallies[other.id];
        if (t.name.empty()) t.name = other.name.empty() ? other.id : other.name;
        t.sum += r.confidence;
        ++t.count;
    }

    std::set<std::string> names;
    for (const auto& [id, t] : tallies) {
        if (t.sum / static_cast<double>(t.count) <= threshold) continue;
        if (excluded.count(to_lower(t.name)) != 0 || excluded.count(to_lower(id)) != 0) continue;
        names.insert(t.name);
    }
    // Drop anchors that also appear by name.
    for (const auto& a : anchors) names.erase(a);
    return {std::vector<std::string>(names.begin(), names.end()), SeedStage::expanded};
}

} // namespace litkg::ingest
