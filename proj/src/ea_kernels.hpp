#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rebus/feature_allocation.hpp"

namespace rebus::detail {

// How many members of a cluster one block holds.
struct BlockHit {
  BlockIndex block;
  std::uint32_t count;
};

// Blocks touched by a cluster, ascending by block index.
using Support = std::vector<BlockHit>;

Support leaf_support(const FeatureAllocation& projected, ElementId e);

// Projection entropy of A ∪ B for disjoint clusters A, B with
// |A| + |B| = members: one merge-scan of both supports, tallying how many
// members each touched block holds.
double union_entropy(std::span<const BlockHit> a, std::span<const BlockHit> b,
                     std::size_t members);

Support merge_support(std::span<const BlockHit> a, std::span<const BlockHit> b);

}  // namespace rebus::detail
