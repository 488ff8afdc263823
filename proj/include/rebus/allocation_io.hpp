#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rebus/corpus.hpp"
#include "rebus/feature_allocation.hpp"

namespace rebus {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LabelledAllocation {
  FeatureAllocation allocation;
  Vocabulary vocabulary;
};

// Allocation text format: one block per line, its element words separated by
// single spaces. Lines starting with '#' and blank lines are ignored.
//
// Export writes a '#' header and then the blocks in order, words in id order.
// Words must be nonempty valid UTF-8 without whitespace or control
// characters and must not begin with '#'; otherwise std::invalid_argument.
// Elements that occur in no block are not representable and are dropped on
// re-import.
std::string export_allocation(const FeatureAllocation& allocation, const Vocabulary& vocabulary);

// Ids are assigned in first-occurrence order. Throws ParseError on a
// malformed line (empty token from doubled/edge spaces, repeated word in one
// block) or a token with characters outside the allowed set.
LabelledAllocation import_allocation(std::string_view text);

}  // namespace rebus
