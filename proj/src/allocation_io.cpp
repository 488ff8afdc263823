#include "rebus/allocation_io.hpp"

#include <algorithm>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace rebus {

namespace {

// Empty string if `word` is acceptable as an element token, else the reason.
std::string token_problem(std::string_view word) {
  if (word.empty()) return "empty element token";
  if (word.front() == '#') return "element token may not start with '#'";
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(word.data());
  const auto length = static_cast<std::int32_t>(word.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) return "invalid UTF-8 in element token";
    if (u_isUWhiteSpace(c) || u_iscntrl(c))
      return "whitespace or control character in element token";
  }
  return {};
}

}  // namespace

std::string export_allocation(const FeatureAllocation& allocation, const Vocabulary& vocabulary) {
  if (vocabulary.size() < allocation.ground_size())
    throw std::invalid_argument("vocabulary smaller than the allocation's ground set");
  std::string out = "# rebus feature allocation: " + std::to_string(allocation.block_count()) +
                    " blocks over " + std::to_string(allocation.ground_size()) + " elements\n";
  for (BlockIndex i = 0; i < allocation.block_count(); ++i) {
    bool first = true;
    for (ElementId e : allocation.block(i)) {
      const auto& w = vocabulary.word(e);
      if (auto problem = token_problem(w); !problem.empty())
        throw std::invalid_argument("cannot export word '" + w + "': " + problem);
      if (!first) out += ' ';
      out += w;
      first = false;
    }
    out += '\n';
  }
  return out;
}

LabelledAllocation import_allocation(std::string_view text) {
  Vocabulary vocabulary;
  std::vector<std::vector<ElementId>> blocks;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;

    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; }))
      continue;

    std::vector<ElementId> block;
    std::size_t pos = 0;
    while (true) {
      const std::size_t space = line.find(' ', pos);
      const std::string_view token =
          line.substr(pos, space == std::string_view::npos ? std::string_view::npos : space - pos);
      if (auto problem = token_problem(token); !problem.empty()) throw ParseError(line_no, problem);
      block.push_back(vocabulary.intern(token));
      if (space == std::string_view::npos) break;
      pos = space + 1;
    }
    auto sorted = block;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParseError(line_no, "block repeats an element");
    blocks.push_back(std::move(sorted));
  }
  const std::size_t n = vocabulary.size();
  return {FeatureAllocation(n, std::move(blocks)), std::move(vocabulary)};
}

}  // namespace rebus
