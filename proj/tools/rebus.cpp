// rebus: entropy agglomeration of the words of a text.
//
//   rebus run <input> [--ranges 10,11,12-13,...] [--formats json,newick,text,svg]
//             [--log-base e|2|10] [--out DIR] [--threads N] [--max-set-size K]
//             [--no-strip-gutenberg]
//   rebus stats <input> [--words]
//   rebus pe <input> <word>...
//
// Exit codes: 0 ok, 1 other failure, 2 usage or range syntax, 3 unreadable
// input, 4 unwritable output, 5 unknown word.

#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rebus/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kBadInput = 3, kBadOutput = 4, kUnknownWord = 5 };

int threads_from_env() {
  if (const char* env = std::getenv("REBUS_THREADS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring REBUS_THREADS='" << env << "'\n";
    }
  }
  return 0;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rebus: entropy agglomeration of the words of a text"};
  app.require_subcommand(1);

  rebus::AnalysisConfig config;
  std::string input;
  bool no_strip = false;
  bool no_lowercase = false;
  bool allocation_input = false;
  std::string ranges_text, formats_text = "json,newick,text,svg", log_base_text = "e";
  int threads = -1;
  std::vector<std::string> words;
  bool list_words = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("input", input, "UTF-8 text file (or allocation file with --allocation)")->required();
    cmd->add_flag("--allocation", allocation_input, "input is in the allocation text format");
    cmd->add_flag("--no-strip-gutenberg", no_strip, "keep Project Gutenberg header and footer");
    cmd->add_flag("--no-lowercase", no_lowercase, "do not lowercase tokens");
    cmd->add_option("--min-token-length", config.tokenizer.min_token_length,
                    "drop tokens shorter than this many characters")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--log-base", log_base_text, "entropy units: e, 2 or 10")
        ->check(CLI::IsMember({"e", "2", "10"}));
    cmd->add_option("--threads", threads, "worker threads (default: REBUS_THREADS or all cores)");
  };

  auto* run = app.add_subcommand("run", "project the allocation onto each range and agglomerate");
  add_common(run);
  run->add_option("--ranges", ranges_text, "projection-size ranges, e.g. 10,11,12-13 (inclusive)");
  run->add_option("--formats", formats_text, "comma-separated subset of json,newick,text,svg");
  run->add_option("--out", config.output_dir, "output directory");
  run->add_option("--max-set-size", config.max_set_size, "skip word sets larger than this")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  run->add_option("--width", config.render.text_width, "text dendrogram width in characters");
  run->add_option("--truncate", config.render.label_truncation, "max label length in text/svg")
      ->check(CLI::PositiveNumber);
  run->add_flag("--verbose", config.verbose, "log progress to stderr");

  auto* stats = app.add_subcommand("stats", "paragraph, vocabulary and projection-size counts");
  add_common(stats);
  stats->add_flag("--words", list_words, "also list every word with its projection size");

  auto* pe = app.add_subcommand("pe", "projection entropy and co-occurrence of a word set");
  add_common(pe);
  pe->add_option("words", words, "words of the set")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  config.input = input;
  config.input_is_allocation = allocation_input;
  config.tokenizer.strip_gutenberg_boilerplate = !no_strip;
  config.tokenizer.lowercase = !no_lowercase;
  config.threads = threads >= 0 ? threads : threads_from_env();

  try {
    config.log_base = rebus::parse_log_base(log_base_text);
    if (*run) {
      if (!ranges_text.empty()) config.ranges = rebus::parse_ranges(ranges_text);
      config.formats.clear();
      for (const auto& f : split_commas(formats_text)) config.formats.push_back(rebus::parse_format(f));
      const auto report = rebus::run(config, &std::cerr);
      for (const auto& r : report.ranges) {
        std::cout << "ea_" << r.range.label() << "\t" << r.words << " words\t" << r.merges << " merges";
        if (!r.note.empty()) std::cout << "\t" << r.note;
        std::cout << "\n";
      }
      std::cout << "report\t" << (config.output_dir / "report.json").string() << "\n";
    } else if (*stats) {
      const auto loaded = rebus::load_input(config.input, config.input_is_allocation,
                                            config.tokenizer, config.threads);
      std::cout << rebus::format_stats(rebus::corpus_stats(loaded));
      if (list_words) std::cout << rebus::format_word_sizes(loaded);
    } else if (*pe) {
      const auto loaded = rebus::load_input(config.input, config.input_is_allocation,
                                            config.tokenizer, config.threads);
      std::cout << rebus::format_pe(rebus::word_set_entropy(loaded, words, config.tokenizer),
                                    config.log_base);
    }
  } catch (const rebus::RangeSyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const rebus::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const rebus::OutputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadOutput;
  } catch (const rebus::UnknownWordError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnknownWord;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
