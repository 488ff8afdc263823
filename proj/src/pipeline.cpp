#include "rebus/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rebus/agglomeration.hpp"
#include "rebus/number_format.hpp"
#include "parallel.hpp"

namespace rebus {

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

UnknownWordError::UnknownWordError(std::vector<std::string> words)
    : std::runtime_error("unknown word(s): " + join(words, ", ")), words_(std::move(words)) {}

std::vector<ProjectionRange> default_ranges() {
  return {{10, 10}, {11, 11}, {12, 13}, {15, 17}, {20, 25},
          {30, 39}, {40, 59}, {60, 149}, {150, 7020}};
}

std::vector<ProjectionRange> parse_ranges(std::string_view text) {
  auto number = [&](std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw RangeSyntaxError("bad number '" + std::string(s) + "' in ranges '" +
                             std::string(text) + "'");
    return v;
  };
  std::vector<ProjectionRange> ranges;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    const std::size_t dash = item.find('-');
    ProjectionRange r;
    if (dash == std::string_view::npos) {
      r.lo = r.hi = number(item);
    } else {
      r.lo = number(item.substr(0, dash));
      r.hi = number(item.substr(dash + 1));
    }
    if (r.lo < 1) throw RangeSyntaxError("range '" + std::string(item) + "' must start at >= 1");
    if (r.lo > r.hi) throw RangeSyntaxError("range '" + std::string(item) + "' is reversed");
    if (!seen.insert({r.lo, r.hi}).second)
      throw RangeSyntaxError("range '" + std::string(item) + "' given twice");
    ranges.push_back(r);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return ranges;
}

LogBase parse_log_base(std::string_view text) {
  if (text == "e") return LogBase::e;
  if (text == "2") return LogBase::two;
  if (text == "10") return LogBase::ten;
  throw std::invalid_argument("log base must be e, 2 or 10, got '" + std::string(text) + "'");
}

std::string_view log_base_name(LogBase base) {
  switch (base) {
    case LogBase::e: return "e";
    case LogBase::two: return "2";
    case LogBase::ten: return "10";
  }
  return "e";
}

double log_base_value(LogBase base) {
  switch (base) {
    case LogBase::e: return std::exp(1.0);
    case LogBase::two: return 2.0;
    case LogBase::ten: return 10.0;
  }
  return std::exp(1.0);
}

double from_nats(double nats, LogBase base) {
  return base == LogBase::e ? nats : nats / std::log(log_base_value(base));
}

void AnalysisConfig::validate() const {
  if (ranges.empty()) throw std::invalid_argument("no projection ranges given");
  for (const auto& r : ranges)
    if (r.lo < 1 || r.lo > r.hi) throw std::invalid_argument("invalid range " + r.label());
  if (max_set_size < 2) throw std::invalid_argument("max word-set size must be >= 2");
  if (formats.empty()) throw std::invalid_argument("no output formats given");
  tokenizer.validate();
  render.validate();
}

LoadedInput load_input(const std::filesystem::path& path, bool is_allocation,
                       const TokenizerConfig& tokenizer, int threads) {
  RawDocument doc;
  try {
    doc = read_document(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  LoadedInput input;
  if (is_allocation) {
    try {
      input.data = import_allocation(doc.content);
    } catch (const ParseError& e) {
      throw InputError(path.string() + ": " + e.what());
    }
    input.paragraphs = input.data.allocation.block_count();
    return input;
  }
  Corpus corpus = load_corpus(doc, tokenizer, threads);
  input.paragraphs = corpus.paragraph_count;
  input.data = {std::move(corpus.allocation), std::move(corpus.vocabulary)};
  return input;
}

namespace {

std::string_view status_name(RangeStatus s) {
  switch (s) {
    case RangeStatus::ok: return "ok";
    case RangeStatus::empty: return "empty";
    case RangeStatus::skipped: return "skipped";
  }
  return "ok";
}

struct RangeOutput {
  RangeReport report;
  std::string word_list;
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
};

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + path.string());
  out << contents;
  out.close();
  if (!out) throw OutputError("error while writing " + path.string());
}

}  // namespace

std::string report_to_json(const RunReport& report, const AnalysisConfig& config) {
  nlohmann::ordered_json doc;
  doc["input"] = config.input.string();
  doc["paragraphs"] = report.paragraphs;
  doc["blocks"] = report.blocks;
  doc["vocabulary"] = report.vocabulary;
  doc["log_base"] = std::string(log_base_name(config.log_base));
  doc["max_set_size"] = config.max_set_size;
  auto ranges = nlohmann::ordered_json::array();
  for (const auto& r : report.ranges) {
    nlohmann::ordered_json item;
    item["label"] = r.range.label();
    item["lo"] = r.range.lo;
    item["hi"] = r.range.hi;
    item["words"] = r.words;
    item["merges"] = r.merges;
    item["status"] = std::string(status_name(r.status));
    item["note"] = r.note;
    item["seconds"] = r.seconds;
    ranges.push_back(std::move(item));
  }
  doc["ranges"] = std::move(ranges);
  doc["load_seconds"] = report.load_seconds;
  doc["total_seconds"] = report.total_seconds;
  return doc.dump(2) + "\n";
}

RunReport run(const AnalysisConfig& config, std::ostream* log) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const int threads = resolve_threads(config.threads);

  const LoadedInput input = load_input(config.input, config.input_is_allocation, config.tokenizer, threads);
  const auto& allocation = input.data.allocation;
  const auto& vocabulary = input.data.vocabulary;

  RunReport report;
  report.paragraphs = input.paragraphs;
  report.blocks = allocation.block_count();
  report.vocabulary = vocabulary.size();
  report.load_seconds = seconds_since(started);
  if (log && config.verbose)
    *log << "loaded " << config.input.string() << ": " << report.paragraphs << " paragraphs, "
         << report.blocks << " blocks, " << report.vocabulary << " words\n";

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec || !std::filesystem::is_directory(config.output_dir))
    throw OutputError("cannot create output directory " + config.output_dir.string());

  std::vector<RangeOutput> outputs(config.ranges.size());
  std::vector<std::exception_ptr> errors(config.ranges.size());
  const auto count = static_cast<std::ptrdiff_t>(config.ranges.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      const auto range_started = std::chrono::steady_clock::now();
      const ProjectionRange& range = config.ranges[idx];
      RangeOutput& out = outputs[idx];
      out.report.range = range;
      const WordSet words = select_by_projection_range(allocation, range.lo, range.hi);
      out.report.words = words.size();

      out.word_list = "# word\tprojection_size\n";
      for (ElementId e : words.elements())
        out.word_list += vocabulary.word(e) + "\t" + std::to_string(projection_size(allocation, e)) + "\n";

      if (words.empty()) {
        out.report.status = RangeStatus::empty;
        out.report.note = "empty word set: no word has a projection size in " + range.label();
      } else if (words.size() > config.max_set_size) {
        out.report.status = RangeStatus::skipped;
        out.report.note = "skipped: " + std::to_string(words.size()) +
                          " words exceed the word-set size guard of " +
                          std::to_string(config.max_set_size);
      } else {
        AgglomerationOptions options;
        options.vocabulary = &vocabulary;
        options.threads = config.threads;
        const Dendrogram nats = agglomerate(allocation, words, options);
        const Dendrogram scaled = config.log_base == LogBase::e
                                      ? nats
                                      : rescale_entropies(nats, log_base_value(config.log_base));
        out.report.merges = scaled.merges.size();
        for (Format f : config.formats) {
          RenderOptions ro = config.render;
          ro.format = f;
          out.files.emplace_back("ea_" + range.label() + "." + std::string(format_extension(f)),
                                 render(scaled, ro));
        }
      }
      out.report.seconds = seconds_since(range_started);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (auto& out : outputs) {
    write_file(config.output_dir / ("words_" + out.report.range.label() + ".tsv"), out.word_list);
    for (const auto& [name, contents] : out.files) write_file(config.output_dir / name, contents);
    if (log && config.verbose)
      *log << "range " << out.report.range.label() << ": " << out.report.words << " words, "
           << out.report.merges << " merges" << (out.report.note.empty() ? "" : " (")
           << out.report.note << (out.report.note.empty() ? "" : ")") << "\n";
    if (log && out.report.status == RangeStatus::skipped)
      *log << "warning: range " << out.report.range.label() << " " << out.report.note << "\n";
    report.ranges.push_back(std::move(out.report));
  }
  report.total_seconds = seconds_since(started);
  write_file(config.output_dir / "report.json", report_to_json(report, config));
  return report;
}

CorpusStats corpus_stats(const LoadedInput& input) {
  CorpusStats stats;
  const auto& allocation = input.data.allocation;
  stats.paragraphs = input.paragraphs;
  stats.blocks = allocation.block_count();
  stats.vocabulary = input.data.vocabulary.size();
  for (ElementId e = 0; e < allocation.ground_size(); ++e)
    ++stats.size_histogram[projection_size(allocation, e)];
  return stats;
}

std::string format_stats(const CorpusStats& stats) {
  std::ostringstream out;
  out << "paragraphs\t" << stats.paragraphs << "\n"
      << "blocks\t" << stats.blocks << "\n"
      << "vocabulary\t" << stats.vocabulary << "\n"
      << "# projection_size\twords\n";
  for (const auto& [size, words] : stats.size_histogram) out << size << "\t" << words << "\n";
  return out.str();
}

std::string format_word_sizes(const LoadedInput& input) {
  std::string out = "# word\tprojection_size\n";
  const auto& allocation = input.data.allocation;
  for (ElementId e = 0; e < allocation.ground_size(); ++e)
    out += input.data.vocabulary.word(e) + "\t" + std::to_string(projection_size(allocation, e)) + "\n";
  return out;
}

PeResult word_set_entropy(const LoadedInput& input, const std::vector<std::string>& words,
                          const TokenizerConfig& tokenizer) {
  if (words.empty()) throw std::invalid_argument("pe needs at least one word");
  const auto& vocabulary = input.data.vocabulary;
  PeResult result;
  std::vector<ElementId> ids;
  std::vector<std::string> unknown;
  for (const auto& raw : words) {
    const auto tokens = tokenize(raw, tokenizer);
    const std::string word = tokens.size() == 1 ? tokens.front() : raw;
    if (auto id = vocabulary.find(word)) {
      ids.push_back(*id);
      result.words.push_back(word);
    } else {
      unknown.push_back(raw);
    }
  }
  if (!unknown.empty()) throw UnknownWordError(std::move(unknown));
  const WordSet set(ids);  // rejects repeats
  const auto& allocation = input.data.allocation;
  for (ElementId e : ids) result.projection_sizes.push_back(projection_size(allocation, e));
  result.cooccurrence = cooccurrence_count(allocation, set);
  result.entropy = projection_entropy(allocation, set);
  return result;
}

std::string format_pe(const PeResult& result, LogBase base) {
  std::ostringstream out;
  out << "words\t" << result.words.size() << "\n";
  for (std::size_t i = 0; i < result.words.size(); ++i)
    out << "projection_size\t" << result.words[i] << "\t" << result.projection_sizes[i] << "\n";
  out << "cooccurrence\t" << result.cooccurrence << "\n"
      << "projection_entropy\t" << format_exact(from_nats(result.entropy, base)) << "\tbase "
      << log_base_name(base) << "\n";
  return out.str();
}

}  // namespace rebus
