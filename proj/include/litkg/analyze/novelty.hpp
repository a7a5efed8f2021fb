#pragma once

#include "litkg/model.hpp"
#include "litkg/validate.hpp"

namespace litkg::analyze {

/// Green and red edges of both classifications between gene and chemical
/// nodes, taken from `kg`, reduced to the giant connected component.
KnowledgeGraph novelty_merge(const validate::EdgeClassification& a, const validate::EdgeClassification& b,
                             const KnowledgeGraph& kg);

} // namespace litkg::analyze
