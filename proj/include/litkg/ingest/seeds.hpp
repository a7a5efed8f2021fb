#pragma once

#include <set>
#include <string>
#include <vector>

#include "litkg/ingest/annotations.hpp"

namespace litkg::ingest {

enum class SeedStage { initial, expanded };

struct SeedSet {
    std::vector<std::string> terms;
    SeedStage stage = SeedStage::initial;
};

/// Initial query terms; throws InvalidQueryError on empty input or duplicates.
SeedSet make_initial_seeds(std::vector<std::string> terms);

/// Entities related to any anchor whose mean confidence over all relations
/// linking them to an anchor exceeds `threshold`. Anchors and excluded names
/// (case-insensitive, matched on name or id) are removed. Terms are entity
/// names in ascending order.
SeedSet expand_seeds(const std::vector<RawRelation>& relations, const std::set<std::string>& anchors,
                     double threshold, const std::set<std::string>& exclusions);

} // namespace litkg::ingest
