#include "rebus/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "parallel.hpp"

namespace rebus {

void TokenizerConfig::validate() const {
  if (min_token_length < 1) throw std::invalid_argument("min_token_length must be >= 1");
}

Vocabulary::Vocabulary(std::vector<std::string> words) {
  for (const auto& w : words) {
    if (find(w)) throw std::invalid_argument("vocabulary repeats word '" + w + "'");
    intern(w);
  }
}

ElementId Vocabulary::intern(std::string_view word) {
  auto it = index_.find(std::string(word));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<ElementId>(words_.size());
  words_.emplace_back(word);
  index_.emplace(words_.back(), id);
  return id;
}

std::optional<ElementId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

RawDocument read_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error while reading " + path.string());
  return {buf.str(), path.string()};
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
  });
}

}  // namespace

RawDocument strip_boilerplate(const RawDocument& doc) {
  std::string_view text = doc.content;

  const std::size_t start = text.find("*** START OF");
  if (start != std::string_view::npos) {
    const std::size_t eol = text.find('\n', start);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
  }
  const std::size_t end = text.find("*** END OF");
  if (end != std::string_view::npos) {
    const std::size_t bol = text.rfind('\n', end);
    text = bol == std::string_view::npos ? std::string_view{} : text.substr(0, bol + 1);
  }
  return {std::string(text), doc.source_name};
}

std::vector<std::string> split_paragraphs(const RawDocument& doc) {
  std::vector<std::string> paragraphs;
  std::string current;
  bool open = false;
  for (auto line : split_lines(doc.content)) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_blank(line)) {
      if (open) paragraphs.push_back(std::move(current));
      current.clear();
      open = false;
      continue;
    }
    if (open) current += '\n';
    current.append(line);
    open = true;
  }
  if (open) paragraphs.push_back(std::move(current));
  return paragraphs;
}

std::vector<std::string> tokenize(std::string_view paragraph, const TokenizerConfig& cfg) {
  std::vector<std::string> tokens;
  std::string token;
  std::size_t token_length = 0;

  auto flush = [&] {
    if (token_length >= cfg.min_token_length && token_length > 0) tokens.push_back(token);
    token.clear();
    token_length = 0;
  };

  const auto* bytes = reinterpret_cast<const std::uint8_t*>(paragraph.data());
  const auto length = static_cast<std::int32_t>(paragraph.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0 || !u_isUAlphabetic(c)) {
      flush();
      continue;
    }
    if (cfg.lowercase) c = u_tolower(c);
    std::uint8_t encoded[U8_MAX_LENGTH];
    std::int32_t n = 0;
    U8_APPEND_UNSAFE(encoded, n, c);
    token.append(reinterpret_cast<const char*>(encoded), static_cast<std::size_t>(n));
    ++token_length;
  }
  flush();
  return tokens;
}

namespace {

Corpus assemble(const std::vector<std::vector<std::string>>& tokenized, std::size_t paragraph_count) {
  Corpus corpus;
  corpus.paragraph_count = paragraph_count;
  std::vector<std::vector<ElementId>> blocks;
  blocks.reserve(tokenized.size());
  for (const auto& tokens : tokenized) {
    if (tokens.empty()) continue;
    std::vector<ElementId> block;
    block.reserve(tokens.size());
    for (const auto& t : tokens) block.push_back(corpus.vocabulary.intern(t));
    std::sort(block.begin(), block.end());
    block.erase(std::unique(block.begin(), block.end()), block.end());
    blocks.push_back(std::move(block));
  }
  corpus.allocation = FeatureAllocation(corpus.vocabulary.size(), std::move(blocks));
  return corpus;
}

}  // namespace

Corpus build_allocation(const std::vector<std::string>& paragraphs, const TokenizerConfig& cfg,
                        int threads) {
  cfg.validate();
  std::vector<std::vector<std::string>> tokenized(paragraphs.size());
  const auto count = static_cast<std::ptrdiff_t>(paragraphs.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(resolve_threads(threads)) if (count > 256)
  for (std::ptrdiff_t i = 0; i < count; ++i) tokenized[i] = tokenize(paragraphs[i], cfg);
  return assemble(tokenized, paragraphs.size());
}

Corpus build_allocation_serial(const std::vector<std::string>& paragraphs,
                               const TokenizerConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(paragraphs.size());
  for (const auto& p : paragraphs) tokenized.push_back(tokenize(p, cfg));
  return assemble(tokenized, paragraphs.size());
}

Corpus load_corpus(const RawDocument& doc, const TokenizerConfig& cfg, int threads) {
  const RawDocument body = cfg.strip_gutenberg_boilerplate ? strip_boilerplate(doc) : doc;
  return build_allocation(split_paragraphs(body), cfg, threads);
}

}  // namespace rebus
