#include "rebus/agglomeration.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "ea_kernels.hpp"
#include "entropy_sum.hpp"
#include "parallel.hpp"

namespace rebus {

namespace detail {

Support leaf_support(const FeatureAllocation& projected, ElementId e) {
  Support s;
  const auto blocks = projected.blocks_containing(e);
  s.reserve(blocks.size());
  for (BlockIndex b : blocks) s.push_back({b, 1});
  return s;
}

double union_entropy(std::span<const BlockHit> a, std::span<const BlockHit> b,
                     std::size_t members) {
  auto& tally = scratch_tally();
  std::size_t i = 0, j = 0;
  auto add = [&](std::size_t hits) { tally.add(hits); };
  while (i < a.size() && j < b.size()) {
    if (a[i].block < b[j].block) {
      add(a[i++].count);
    } else if (b[j].block < a[i].block) {
      add(b[j++].count);
    } else {
      add(std::size_t{a[i].count} + b[j].count);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) add(a[i].count);
  for (; j < b.size(); ++j) add(b[j].count);
  return tally.take(members);
}

Support merge_support(std::span<const BlockHit> a, std::span<const BlockHit> b) {
  Support out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].block < b[j].block) {
      out.push_back(a[i++]);
    } else if (b[j].block < a[i].block) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].block, a[i].count + b[j].count});
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return out;
}

}  // namespace detail

void Dendrogram::validate() const {
  if (leaves.empty()) throw std::invalid_argument("dendrogram has no leaves");
  const std::size_t n = leaves.size();
  if (merges.size() != n - 1)
    throw std::invalid_argument("dendrogram with " + std::to_string(n) + " leaves needs " +
                                std::to_string(n - 1) + " merges, has " +
                                std::to_string(merges.size()));
  std::vector<bool> used(2 * n - 1, false);
  for (std::size_t k = 0; k < merges.size(); ++k) {
    const Merge& m = merges[k];
    const std::string where = "merge " + std::to_string(k) + ": ";
    if (m.new_id != n + k) throw std::invalid_argument(where + "new_id out of sequence");
    if (!(m.left < m.right)) throw std::invalid_argument(where + "left must be < right");
    if (m.right >= m.new_id) throw std::invalid_argument(where + "child created after parent");
    if (!std::isfinite(m.entropy) || m.entropy < 0.0)
      throw std::invalid_argument(where + "entropy must be finite and nonnegative");
    if (used[m.left] || used[m.right])
      throw std::invalid_argument(where + "cluster merged twice");
    used[m.left] = used[m.right] = true;
  }
}

bool Dendrogram::heights_monotone() const {
  const std::size_t n = leaves.size();
  auto height = [&](ClusterId c) { return c < n ? 0.0 : merges[c - n].entropy; };
  return std::all_of(merges.begin(), merges.end(), [&](const Merge& m) {
    return m.entropy >= height(m.left) && m.entropy >= height(m.right);
  });
}

Dendrogram rescale_entropies(const Dendrogram& d, double log_base) {
  Dendrogram out = d;
  const double scale = std::log(log_base);
  for (auto& m : out.merges) m.entropy /= scale;
  return out;
}

namespace {

struct Candidate {
  double entropy;
  ClusterId left;
  ClusterId right;
};

// Orders the heap so the top is the smallest (entropy, left, right).
struct LaterCandidate {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.entropy != b.entropy) return a.entropy > b.entropy;
    if (a.left != b.left) return a.left > b.left;
    return a.right > b.right;
  }
};

std::vector<std::string> leaf_labels(const WordSet& subset, const AgglomerationOptions& options) {
  std::vector<std::string> labels;
  labels.reserve(subset.size());
  for (ElementId e : subset.elements())
    labels.push_back(options.vocabulary ? options.vocabulary->word(e) : std::to_string(e));
  return labels;
}

void check_input(const FeatureAllocation& allocation, const WordSet& subset) {
  if (subset.empty()) throw std::invalid_argument("agglomeration needs a nonempty word set");
  for (ElementId e : subset.elements())
    if (e >= allocation.ground_size())
      throw std::out_of_range("word set element " + std::to_string(e) + " outside ground set");
}

}  // namespace

Dendrogram agglomerate(const FeatureAllocation& allocation, const WordSet& subset,
                       const AgglomerationOptions& options) {
  check_input(allocation, subset);
  Dendrogram result{leaf_labels(subset, options), {}};
  const std::size_t n = subset.size();
  if (n == 1) return result;

  const FeatureAllocation projected = project(allocation, subset);
  const int threads = resolve_threads(options.threads);

  std::vector<detail::Support> support(2 * n - 1);
  std::vector<std::size_t> members(2 * n - 1, 0);
  for (ElementId e = 0; e < n; ++e) {
    support[e] = detail::leaf_support(projected, e);
    members[e] = 1;
  }

  // Initial pair table, one row per thread chunk; slot order is fixed so the
  // heap contents do not depend on scheduling.
  std::vector<Candidate> initial(n * (n - 1) / 2);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (n >= 64)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const std::size_t row = static_cast<std::size_t>(i);
    std::size_t slot = row * (2 * n - row - 1) / 2;
    for (std::size_t j = row + 1; j < n; ++j, ++slot)
      initial[slot] = {detail::union_entropy(support[row], support[j], 2),
                       static_cast<ClusterId>(row), static_cast<ClusterId>(j)};
  }
  std::priority_queue<Candidate, std::vector<Candidate>, LaterCandidate> heap(LaterCandidate{},
                                                                               std::move(initial));

  std::vector<bool> alive(2 * n - 1, false);
  std::vector<ClusterId> live;
  live.reserve(n);
  for (ClusterId c = 0; c < n; ++c) {
    alive[c] = true;
    live.push_back(c);
  }

  std::vector<double> fresh;
  result.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    Candidate best = heap.top();
    while (!alive[best.left] || !alive[best.right]) {
      heap.pop();
      best = heap.top();
    }
    heap.pop();

    const auto created = static_cast<ClusterId>(n + step);
    support[created] = detail::merge_support(support[best.left], support[best.right]);
    members[created] = members[best.left] + members[best.right];
    alive[best.left] = alive[best.right] = false;
    detail::Support().swap(support[best.left]);
    detail::Support().swap(support[best.right]);
    std::erase_if(live, [&](ClusterId c) { return !alive[c]; });

    fresh.assign(live.size(), 0.0);
    const auto count = static_cast<std::ptrdiff_t>(live.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads) if (count >= 64)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      const ClusterId other = live[static_cast<std::size_t>(k)];
      fresh[static_cast<std::size_t>(k)] = detail::union_entropy(
          support[other], support[created], members[other] + members[created]);
    }
    for (std::size_t k = 0; k < live.size(); ++k) heap.push({fresh[k], live[k], created});

    alive[created] = true;
    live.push_back(created);

    const Merge merge{best.left, best.right, created, best.entropy};
    result.merges.push_back(merge);
    if (options.on_merge) options.on_merge({step, n - 1, merge});
  }
  return result;
}

Dendrogram brute_force_agglomerate(const FeatureAllocation& allocation, const WordSet& subset,
                                   const AgglomerationOptions& options) {
  check_input(allocation, subset);
  Dendrogram result{leaf_labels(subset, options), {}};
  const std::size_t n = subset.size();
  const FeatureAllocation projected = project(allocation, subset);

  std::vector<std::vector<ElementId>> clusters(2 * n - 1);
  std::vector<ClusterId> live;
  for (ElementId e = 0; e < n; ++e) {
    clusters[e] = {e};
    live.push_back(e);
  }

  for (std::size_t step = 0; step + 1 < n; ++step) {
    bool found = false;
    Candidate best{0.0, 0, 0};
    for (std::size_t x = 0; x < live.size(); ++x) {
      for (std::size_t y = x + 1; y < live.size(); ++y) {
        std::vector<ElementId> joined = clusters[live[x]];
        joined.insert(joined.end(), clusters[live[y]].begin(), clusters[live[y]].end());
        std::sort(joined.begin(), joined.end());
        const double h = entropy(project(projected, WordSet(std::move(joined))));
        if (!found || h < best.entropy) {
          best = {h, live[x], live[y]};
          found = true;
        }
      }
    }
    const auto created = static_cast<ClusterId>(n + step);
    clusters[created] = clusters[best.left];
    clusters[created].insert(clusters[created].end(), clusters[best.right].begin(),
                             clusters[best.right].end());
    std::erase(live, best.left);
    std::erase(live, best.right);
    live.push_back(created);

    const Merge merge{best.left, best.right, created, best.entropy};
    result.merges.push_back(merge);
    if (options.on_merge) options.on_merge({step, n - 1, merge});
  }
  return result;
}

PairTable pair_entropy_table(const FeatureAllocation& allocation, const WordSet& subset,
                             int threads) {
  if (subset.size() < 2) throw std::invalid_argument("pair table needs at least two elements");
  const FeatureAllocation projected = project(allocation, subset);
  const std::size_t n = subset.size();
  std::vector<detail::Support> support(n);
  for (ElementId e = 0; e < n; ++e) support[e] = detail::leaf_support(projected, e);

  PairTable table(n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto row = static_cast<std::size_t>(i);
    for (std::size_t j = row + 1; j < n; ++j)
      table.set(row, j, detail::union_entropy(support[row], support[j], 2));
  }
  return table;
}

PairTable pair_entropy_table_serial(const FeatureAllocation& allocation, const WordSet& subset) {
  if (subset.size() < 2) throw std::invalid_argument("pair table needs at least two elements");
  const FeatureAllocation projected = project(allocation, subset);
  const std::size_t n = subset.size();
  PairTable table(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      table.set(i, j,
                projection_entropy(projected, WordSet({static_cast<ElementId>(i),
                                                       static_cast<ElementId>(j)})));
  return table;
}

}  // namespace rebus
