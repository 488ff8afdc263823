#pragma once

// Deterministic Zipf-like text generator used by the integration tests and
// the benchmark. Word ranks follow p(r) ~ 1/r; paragraph lengths vary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rebus::testing {

// Rank r as a lowercase pseudo-word: a, b, ..., z, ba, bb, ...
inline std::string pseudo_word(std::size_t rank) {
  std::string w;
  do {
    w.push_back(static_cast<char>('a' + rank % 26));
    rank /= 26;
  } while (rank > 0);
  std::reverse(w.begin(), w.end());
  return "q" + w;
}

struct SyntheticSpec {
  std::size_t paragraphs = 2000;
  std::size_t vocabulary = 8000;
  std::size_t mean_length = 60;
  std::uint64_t seed = 7;
};

inline std::vector<std::string> synthetic_paragraphs(const SyntheticSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::vector<double> cumulative(spec.vocabulary);
  double total = 0.0;
  for (std::size_t r = 0; r < spec.vocabulary; ++r) {
    total += 1.0 / static_cast<double>(r + 1);
    cumulative[r] = total;
  }
  std::uniform_real_distribution<double> unit(0.0, total);
  std::geometric_distribution<std::size_t> length(1.0 / static_cast<double>(spec.mean_length));

  std::vector<std::string> out;
  out.reserve(spec.paragraphs);
  for (std::size_t p = 0; p < spec.paragraphs; ++p) {
    const std::size_t words = 1 + length(rng);
    std::string text;
    for (std::size_t k = 0; k < words; ++k) {
      const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), unit(rng));
      const auto rank = static_cast<std::size_t>(
          std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                   static_cast<std::ptrdiff_t>(spec.vocabulary - 1)));
      if (k > 0) text += (k % 11 == 0) ? ", " : " ";
      text += pseudo_word(rank);
    }
    text += '.';
    out.push_back(std::move(text));
  }
  return out;
}

// The same paragraphs joined into one document with blank-line separators.
inline std::string synthetic_document(const SyntheticSpec& spec) {
  std::string doc;
  for (const auto& p : synthetic_paragraphs(spec)) {
    doc += p;
    doc += "\n\n";
  }
  return doc;
}

}  // namespace rebus::testing
