#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rebus {

using ElementId = std::uint32_t;
using BlockIndex = std::uint32_t;

// Contribution of one block of |B| = block_size elements to the entropy of an
// allocation over `ground_size` elements: (|B|/n) log(n/|B|), in nats.
//
// Entropies are evaluated by grouping blocks by size, as
// sum_s count_s * block_term(s, n) over ascending s. The value depends only
// on the multiset of block sizes, so block order never changes a result and
// every evaluation route below is bit-identical to every other.
double block_term(std::size_t block_size, std::size_t ground_size);

// A multiset of nonempty blocks over the ground set {0, ..., ground_size-1}.
//
// Blocks are stored as sorted id sequences in one flat array (CSR layout),
// together with the inverted index element -> ascending block indices.
// The object is immutable once constructed; all queries are const and safe
// to share between threads.
class FeatureAllocation {
 public:
  FeatureAllocation() = default;

  // Takes ownership of `blocks`. Each block is sorted; an empty block, a
  // repeated id inside one block, or an id >= ground_size throws
  // std::invalid_argument. Duplicate blocks are kept as distinct blocks.
  FeatureAllocation(std::size_t ground_size,
                    std::vector<std::vector<ElementId>> blocks);

  std::size_t ground_size() const { return ground_size_; }
  std::size_t block_count() const { return block_offsets_.size() - 1; }
  bool empty() const { return block_count() == 0; }

  std::span<const ElementId> block(BlockIndex i) const;
  std::size_t block_size(BlockIndex i) const;

  // Ascending indices of the blocks that contain `e`. Throws
  // std::out_of_range for e >= ground_size().
  std::span<const BlockIndex> blocks_containing(ElementId e) const;

  // Sum of all block sizes.
  std::size_t incidence_count() const { return elements_.size(); }

  std::vector<std::vector<ElementId>> blocks() const;

  friend bool operator==(const FeatureAllocation&, const FeatureAllocation&) = default;

 private:
  std::size_t ground_size_ = 0;
  std::vector<std::size_t> block_offsets_{0};
  std::vector<ElementId> elements_;
  std::vector<std::size_t> index_offsets_{0};
  std::vector<BlockIndex> index_blocks_;
};

// An ordered subset of elements. The order matters: it fixes the reindexing
// used by project() and the leaf ids used by agglomeration.
class WordSet {
 public:
  WordSet() = default;
  // Throws std::invalid_argument on repeated ids.
  explicit WordSet(std::vector<ElementId> elements, std::string label = {});

  const std::vector<ElementId>& elements() const { return elements_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  ElementId operator[](std::size_t i) const { return elements_[i]; }

  friend bool operator==(const WordSet&, const WordSet&) = default;

 private:
  std::vector<ElementId> elements_;
  std::string label_;
};

// Sum over blocks of block_term(|B|, n). Zero for an allocation without
// blocks. An allocation with blocks but ground_size 0 cannot be constructed,
// so there is no error path here.
double entropy(const FeatureAllocation& allocation);

// {B ∩ S : B in F} minus the empty set, in original block order and with
// multiplicity. Element S[k] becomes id k of the result, whose ground size is
// |S|. Throws std::out_of_range if S names an id outside the allocation.
FeatureAllocation project(const FeatureAllocation& allocation, const WordSet& subset);

// entropy(project(F, S)), evaluated from the inverted index without building
// the projection; bit-identical to the composed route. Blocks disjoint from
// S are never visited.
double projection_entropy(const FeatureAllocation& allocation, const WordSet& subset);

// Number of blocks containing `e`.
std::size_t projection_size(const FeatureAllocation& allocation, ElementId e);

// Number of blocks (with multiplicity) that contain every element of S.
// An empty S throws std::invalid_argument.
std::size_t cooccurrence_count(const FeatureAllocation& allocation, const WordSet& subset);

// All elements whose projection size lies in [lo, hi], ordered by projection
// size descending and then id ascending. Labelled "lo-hi", or "lo" if lo == hi.
// Throws std::invalid_argument unless 1 <= lo <= hi.
WordSet select_by_projection_range(const FeatureAllocation& allocation,
                                   std::size_t lo, std::size_t hi);

std::string range_label(std::size_t lo, std::size_t hi);

}  // namespace rebus
