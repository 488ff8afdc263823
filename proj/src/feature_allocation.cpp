#include "rebus/feature_allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "entropy_sum.hpp"

namespace rebus {

double block_term(std::size_t block_size, std::size_t ground_size) {
  const double n = static_cast<double>(ground_size);
  const double s = static_cast<double>(block_size);
  return (s / n) * std::log(n / s);
}

FeatureAllocation::FeatureAllocation(std::size_t ground_size,
                                     std::vector<std::vector<ElementId>> blocks)
    : ground_size_(ground_size) {
  block_offsets_.reserve(blocks.size() + 1);
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  elements_.reserve(total);

  std::vector<std::size_t> counts(ground_size, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto& b = blocks[i];
    if (b.empty())
      throw std::invalid_argument("feature allocation: block " + std::to_string(i) + " is empty");
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(b.begin(), b.end()) != b.end())
      throw std::invalid_argument("feature allocation: block " + std::to_string(i) +
                                  " repeats an element");
    if (b.back() >= ground_size)
      throw std::invalid_argument("feature allocation: block " + std::to_string(i) +
                                  " names element " + std::to_string(b.back()) +
                                  " outside ground set of size " + std::to_string(ground_size));
    for (ElementId e : b) ++counts[e];
    elements_.insert(elements_.end(), b.begin(), b.end());
    block_offsets_.push_back(elements_.size());
  }

  // Counting sort into the inverted index; scanning blocks in order leaves
  // every posting list ascending.
  index_offsets_.assign(ground_size + 1, 0);
  for (std::size_t e = 0; e < ground_size; ++e) index_offsets_[e + 1] = index_offsets_[e] + counts[e];
  index_blocks_.resize(total);
  std::vector<std::size_t> cursor(index_offsets_.begin(), index_offsets_.end() - 1);
  for (std::size_t i = 0; i + 1 < block_offsets_.size(); ++i)
    for (std::size_t k = block_offsets_[i]; k < block_offsets_[i + 1]; ++k)
      index_blocks_[cursor[elements_[k]]++] = static_cast<BlockIndex>(i);
}

std::span<const ElementId> FeatureAllocation::block(BlockIndex i) const {
  if (i >= block_count()) throw std::out_of_range("block index " + std::to_string(i));
  return {elements_.data() + block_offsets_[i], block_offsets_[i + 1] - block_offsets_[i]};
}

std::size_t FeatureAllocation::block_size(BlockIndex i) const { return block(i).size(); }

std::span<const BlockIndex> FeatureAllocation::blocks_containing(ElementId e) const {
  if (e >= ground_size_)
    throw std::out_of_range("element " + std::to_string(e) + " outside ground set of size " +
                            std::to_string(ground_size_));
  return {index_blocks_.data() + index_offsets_[e], index_offsets_[e + 1] - index_offsets_[e]};
}

std::vector<std::vector<ElementId>> FeatureAllocation::blocks() const {
  std::vector<std::vector<ElementId>> out;
  out.reserve(block_count());
  for (BlockIndex i = 0; i < block_count(); ++i) {
    auto b = block(i);
    out.emplace_back(b.begin(), b.end());
  }
  return out;
}

WordSet::WordSet(std::vector<ElementId> elements, std::string label)
    : elements_(std::move(elements)), label_(std::move(label)) {
  std::unordered_set<ElementId> seen;
  seen.reserve(elements_.size());
  for (ElementId e : elements_)
    if (!seen.insert(e).second)
      throw std::invalid_argument("word set repeats element " + std::to_string(e));
}

double entropy(const FeatureAllocation& allocation) {
  auto& tally = detail::scratch_tally();
  for (BlockIndex i = 0; i < allocation.block_count(); ++i) tally.add(allocation.block_size(i));
  return tally.take(allocation.ground_size());
}

namespace {

void check_subset(const FeatureAllocation& allocation, const WordSet& subset) {
  for (ElementId e : subset.elements())
    if (e >= allocation.ground_size())
      throw std::out_of_range("word set element " + std::to_string(e) +
                              " outside ground set of size " +
                              std::to_string(allocation.ground_size()));
}

// Ascending block indices touched by S, each repeated once per member of S
// it contains.
std::vector<BlockIndex> gather_postings(const FeatureAllocation& allocation, const WordSet& subset) {
  std::size_t total = 0;
  for (ElementId e : subset.elements()) total += allocation.blocks_containing(e).size();
  std::vector<BlockIndex> postings;
  postings.reserve(total);
  for (ElementId e : subset.elements()) {
    auto list = allocation.blocks_containing(e);
    postings.insert(postings.end(), list.begin(), list.end());
  }
  std::sort(postings.begin(), postings.end());
  return postings;
}

}  // namespace

FeatureAllocation project(const FeatureAllocation& allocation, const WordSet& subset) {
  check_subset(allocation, subset);
  constexpr std::uint32_t kAbsent = ~std::uint32_t{0};
  std::vector<std::uint32_t> position(allocation.ground_size(), kAbsent);
  for (std::size_t k = 0; k < subset.size(); ++k) position[subset[k]] = static_cast<std::uint32_t>(k);

  std::vector<std::vector<ElementId>> blocks;
  for (BlockIndex i = 0; i < allocation.block_count(); ++i) {
    std::vector<ElementId> kept;
    for (ElementId e : allocation.block(i))
      if (position[e] != kAbsent) kept.push_back(position[e]);
    if (!kept.empty()) blocks.push_back(std::move(kept));
  }
  return FeatureAllocation(subset.size(), std::move(blocks));
}

double projection_entropy(const FeatureAllocation& allocation, const WordSet& subset) {
  check_subset(allocation, subset);
  const std::size_t m = subset.size();
  const auto postings = gather_postings(allocation, subset);
  auto& tally = detail::scratch_tally();
  for (std::size_t i = 0; i < postings.size();) {
    std::size_t j = i;
    while (j < postings.size() && postings[j] == postings[i]) ++j;
    tally.add(j - i);
    i = j;
  }
  return tally.take(m);
}

std::size_t projection_size(const FeatureAllocation& allocation, ElementId e) {
  return allocation.blocks_containing(e).size();
}

std::size_t cooccurrence_count(const FeatureAllocation& allocation, const WordSet& subset) {
  if (subset.empty()) throw std::invalid_argument("co-occurrence of an empty word set is undefined");
  check_subset(allocation, subset);
  const std::size_t m = subset.size();
  const auto postings = gather_postings(allocation, subset);
  std::size_t count = 0;
  for (std::size_t i = 0; i < postings.size();) {
    std::size_t j = i;
    while (j < postings.size() && postings[j] == postings[i]) ++j;
    if (j - i == m) ++count;
    i = j;
  }
  return count;
}

std::string range_label(std::size_t lo, std::size_t hi) {
  return lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi);
}

WordSet select_by_projection_range(const FeatureAllocation& allocation, std::size_t lo,
                                   std::size_t hi) {
  if (lo < 1) throw std::invalid_argument("projection range lower bound must be >= 1");
  if (lo > hi)
    throw std::invalid_argument("projection range " + std::to_string(lo) + "-" +
                                std::to_string(hi) + " is reversed");
  std::vector<ElementId> chosen;
  for (ElementId e = 0; e < allocation.ground_size(); ++e) {
    const std::size_t size = projection_size(allocation, e);
    if (size >= lo && size <= hi) chosen.push_back(e);
  }
  std::stable_sort(chosen.begin(), chosen.end(), [&](ElementId a, ElementId b) {
    return projection_size(allocation, a) > projection_size(allocation, b);
  });
  return WordSet(std::move(chosen), range_label(lo, hi));
}

}  // namespace rebus
