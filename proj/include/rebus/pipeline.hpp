#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rebus/allocation_io.hpp"
#include "rebus/corpus.hpp"
#include "rebus/render.hpp"

namespace rebus {

// Distinct failure classes so the command line can map them to exit codes.
class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class OutputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class RangeSyntaxError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
class UnknownWordError : public std::runtime_error {
 public:
  explicit UnknownWordError(std::vector<std::string> words);
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
};

struct ProjectionRange {
  std::size_t lo = 1;
  std::size_t hi = 1;
  std::string label() const { return range_label(lo, hi); }
  friend bool operator==(const ProjectionRange&, const ProjectionRange&) = default;
};

// 10, 11, 12-13, 15-17, 20-25, 30-39, 40-59, 60-149, 150-7020.
std::vector<ProjectionRange> default_ranges();

// Comma-separated "lo" or "lo-hi" items with 1 <= lo <= hi, no repeats.
// Throws RangeSyntaxError.
std::vector<ProjectionRange> parse_ranges(std::string_view text);

enum class LogBase { e, two, ten };
LogBase parse_log_base(std::string_view text);  // "e", "2", "10"
std::string_view log_base_name(LogBase base);
double log_base_value(LogBase base);
// Converts a value in nats to the given base.
double from_nats(double nats, LogBase base);

struct AnalysisConfig {
  std::filesystem::path input;
  bool input_is_allocation = false;  // read the allocation text format instead of raw text
  std::vector<ProjectionRange> ranges = default_ranges();
  TokenizerConfig tokenizer;
  LogBase log_base = LogBase::e;
  std::filesystem::path output_dir = "rebus_out";
  std::vector<Format> formats{Format::json, Format::newick, Format::text, Format::svg};
  RenderOptions render;
  std::size_t max_set_size = 2000;
  int threads = 0;  // 0 = OpenMP default
  bool verbose = false;

  // Throws std::invalid_argument.
  void validate() const;
};

enum class RangeStatus { ok, empty, skipped };

struct RangeReport {
  ProjectionRange range;
  std::size_t words = 0;
  std::size_t merges = 0;
  RangeStatus status = RangeStatus::ok;
  std::string note;
  double seconds = 0.0;
};

struct RunReport {
  std::size_t paragraphs = 0;
  std::size_t blocks = 0;
  std::size_t vocabulary = 0;
  std::vector<RangeReport> ranges;
  double load_seconds = 0.0;
  double total_seconds = 0.0;
};

std::string report_to_json(const RunReport& report, const AnalysisConfig& config);

struct LoadedInput {
  LabelledAllocation data;
  std::size_t paragraphs = 0;
};

// Throws InputError when the file cannot be read or parsed.
LoadedInput load_input(const std::filesystem::path& path, bool is_allocation,
                       const TokenizerConfig& tokenizer, int threads = 0);

// Runs the whole experiment and writes, per range, words_<label>.tsv and
// ea_<label>.<ext> for each format, plus report.json. Ranges are processed
// in parallel (one agglomeration per worker); files are written afterwards
// in range order. Progress goes to `log` when config.verbose is set.
RunReport run(const AnalysisConfig& config, std::ostream* log = nullptr);

struct CorpusStats {
  std::size_t paragraphs = 0;
  std::size_t blocks = 0;
  std::size_t vocabulary = 0;
  std::map<std::size_t, std::size_t> size_histogram;  // projection size -> word count
};

CorpusStats corpus_stats(const LoadedInput& input);
std::string format_stats(const CorpusStats& stats);
// "word<TAB>projection_size" per vocabulary word, in vocabulary order.
std::string format_word_sizes(const LoadedInput& input);

struct PeResult {
  std::vector<std::string> words;
  std::vector<std::size_t> projection_sizes;
  std::size_t cooccurrence = 0;
  double entropy = 0.0;  // nats
};

// Looks the words up after the tokenizer's case folding. Throws
// UnknownWordError listing every missing word, std::invalid_argument on an
// empty or repeated list.
PeResult word_set_entropy(const LoadedInput& input, const std::vector<std::string>& words,
                          const TokenizerConfig& tokenizer);
std::string format_pe(const PeResult& result, LogBase base);

}  // namespace rebus
