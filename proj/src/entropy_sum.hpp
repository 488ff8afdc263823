#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rebus/feature_allocation.hpp"

namespace rebus::detail {

// Accumulates block sizes and returns sum_s count_s * block_term(s, n) over
// distinct sizes s < n in ascending order. The result depends only on the
// multiset of sizes, never on the order blocks were added in. Every entropy
// in the library is evaluated through this class.
class SizeTally {
 public:
  void add(std::size_t size, std::uint32_t times = 1) {
    if (size >= counts_.size()) counts_.resize(std::max(size + 1, counts_.size() * 2), 0);
    if (counts_[size] == 0) touched_.push_back(size);
    counts_[size] += times;
  }

  // Returns the entropy for ground size n and clears the tally for reuse.
  double take(std::size_t ground_size) {
    std::sort(touched_.begin(), touched_.end());
    double total = 0.0;
    for (std::size_t s : touched_) {
      if (s < ground_size) total += static_cast<double>(counts_[s]) * block_term(s, ground_size);
      counts_[s] = 0;
    }
    touched_.clear();
    return total;
  }

 private:
  std::vector<std::uint32_t> counts_;
  std::vector<std::size_t> touched_;
};

// Per-thread scratch tally; take() leaves it empty again.
inline SizeTally& scratch_tally() {
  thread_local SizeTally tally;
  return tally;
}

}  // namespace rebus::detail
