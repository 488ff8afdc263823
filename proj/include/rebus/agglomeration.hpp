#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rebus/corpus.hpp"
#include "rebus/feature_allocation.hpp"

namespace rebus {

using ClusterId = std::uint32_t;

// One bifurcation of the dendrogram. Leaves are clusters 0..n-1 (positions in
// the word set); merge k creates cluster n + k. `entropy` is the projection
// entropy of the merged cluster, in nats unless the dendrogram was rescaled.
struct Merge {
  ClusterId left = 0;
  ClusterId right = 0;
  ClusterId new_id = 0;
  double entropy = 0.0;

  friend bool operator==(const Merge&, const Merge&) = default;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;

  // Throws std::invalid_argument unless there is at least one leaf, exactly
  // leaves-1 merges, new_id = leaves + k, left < right < new_id, every
  // entropy is finite and >= 0, and each cluster is a child at most once.
  void validate() const;

  // True iff every merge entropy is >= the entropies of its child merges.
  bool heights_monotone() const;

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;
};

// Copy of `d` with entropies divided by ln(base).
Dendrogram rescale_entropies(const Dendrogram& d, double log_base);

struct MergeEvent {
  std::size_t step = 0;
  std::size_t total_steps = 0;
  Merge merge;
};

struct AgglomerationOptions {
  // Leaf labels come from here when set, otherwise the decimal element id.
  const Vocabulary* vocabulary = nullptr;
  // Called after every merge, on the calling thread.
  std::function<void(const MergeEvent&)> on_merge;
  // Threads for the pair-table and fresh-pair kernels; 0 = OpenMP default.
  // Output does not depend on this value.
  int threads = 0;
};

// Entropy agglomeration. F is projected onto S first; then, starting from
// singletons, the pair of live clusters whose union has the smallest
// projection entropy (ground size |union|) is merged until one cluster
// remains. Ties go to the smallest (left, right) cluster ids.
//
// Pair entropies are cached in a min-heap keyed by (entropy, left, right);
// stale entries whose clusters were merged are dropped when popped, and each
// merge only evaluates pairs that involve the new cluster.
//
// Throws std::invalid_argument for an empty S and std::out_of_range for ids
// outside F.
Dendrogram agglomerate(const FeatureAllocation& allocation, const WordSet& subset,
                       const AgglomerationOptions& options = {});

// Same contract as agglomerate(), computed literally: every candidate pair
// at every step materializes project(F_S, A ∪ B) and takes its entropy.
// Intended as a test oracle; cost grows like k^3 |F|.
Dendrogram brute_force_agglomerate(const FeatureAllocation& allocation, const WordSet& subset,
                                   const AgglomerationOptions& options = {});

// Symmetric |S| x |S| table of pair projection entropies inside the
// S-projected allocation; the diagonal is 0.
class PairTable {
 public:
  explicit PairTable(std::size_t n) : n_(n), values_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }
  friend bool operator==(const PairTable&, const PairTable&) = default;

 private:
  std::size_t n_;
  std::vector<double> values_;
};

// OpenMP kernel over rows. Throws std::invalid_argument if |S| < 2.
PairTable pair_entropy_table(const FeatureAllocation& allocation, const WordSet& subset,
                             int threads = 0);

// Reference: one projection_entropy() call per pair, single-threaded.
PairTable pair_entropy_table_serial(const FeatureAllocation& allocation, const WordSet& subset);

}  // namespace rebus
