#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rebus/feature_allocation.hpp"

namespace rebus {

struct RawDocument {
  std::string content;  // UTF-8
  std::string source_name;
};

struct TokenizerConfig {
  bool lowercase = true;
  std::size_t min_token_length = 1;  // in code points, must be >= 1
  bool strip_gutenberg_boilerplate = true;

  // Throws std::invalid_argument on min_token_length == 0.
  void validate() const;
};

// Dense bidirectional word <-> id map; ids are assigned in insertion order.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws std::invalid_argument on a repeated word.
  explicit Vocabulary(std::vector<std::string> words);

  // Id of `word`, adding it if unseen.
  ElementId intern(std::string_view word);
  std::optional<ElementId> find(std::string_view word) const;
  const std::string& word(ElementId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.words_ == b.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, ElementId> index_;
};

// Reads a whole file as bytes. Throws std::runtime_error if it cannot be read.
RawDocument read_document(const std::filesystem::path& path);

// Drops everything up to and including the first line containing
// "*** START OF", and the first later line containing "*** END OF" along with
// everything after it. Either marker may be missing.
RawDocument strip_boilerplate(const RawDocument& doc);

// Paragraphs are maximal runs of non-blank lines; a line is blank when it is
// empty after trimming whitespace. Line breaks inside a paragraph are kept as
// '\n' and a trailing '\r' on each line is removed.
std::vector<std::string> split_paragraphs(const RawDocument& doc);

// Maximal runs of Unicode alphabetic code points. Bytes that are not valid
// UTF-8 act as separators.
std::vector<std::string> tokenize(std::string_view paragraph, const TokenizerConfig& cfg);

struct Corpus {
  FeatureAllocation allocation;
  Vocabulary vocabulary;
  std::size_t paragraph_count = 0;
};

// One block per paragraph that has at least one token, holding the distinct
// ids of its tokens. Ids follow first occurrence. Paragraphs are tokenized in
// parallel when `threads` != 1 (0 = OpenMP default); the result does not
// depend on the thread count.
Corpus build_allocation(const std::vector<std::string>& paragraphs, const TokenizerConfig& cfg,
                        int threads = 0);

// Single-threaded reference for build_allocation.
Corpus build_allocation_serial(const std::vector<std::string>& paragraphs,
                               const TokenizerConfig& cfg);

// strip (if configured) -> split -> build.
Corpus load_corpus(const RawDocument& doc, const TokenizerConfig& cfg, int threads = 0);

}  // namespace rebus
