#include "rebus/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "rebus/number_format.hpp"

namespace rebus {

Format parse_format(std::string_view name) {
  if (name == "json") return Format::json;
  if (name == "newick") return Format::newick;
  if (name == "text") return Format::text;
  if (name == "svg") return Format::svg;
  throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

std::string_view format_name(Format format) {
  switch (format) {
    case Format::json: return "json";
    case Format::newick: return "newick";
    case Format::text: return "text";
    case Format::svg: return "svg";
  }
  return "";
}

std::string_view format_extension(Format format) {
  switch (format) {
    case Format::json: return "json";
    case Format::newick: return "nwk";
    case Format::text: return "txt";
    case Format::svg: return "svg";
  }
  return "";
}

void RenderOptions::validate() const {
  if (label_truncation < 1) throw std::invalid_argument("label truncation must be >= 1");
  if (text_width < 20) throw std::invalid_argument("text width must be >= 20");
}

std::vector<ClusterId> leaf_order(const Dendrogram& d) {
  const std::size_t n = d.leaves.size();
  std::vector<ClusterId> order;
  order.reserve(n);
  if (n == 0) return order;
  std::vector<ClusterId> stack{static_cast<ClusterId>(2 * n - 2)};
  while (!stack.empty()) {
    const ClusterId c = stack.back();
    stack.pop_back();
    if (c < n) {
      order.push_back(c);
    } else {
      const Merge& m = d.merges[c - n];
      stack.push_back(m.right);
      stack.push_back(m.left);
    }
  }
  return order;
}

// ---------------------------------------------------------------- JSON

std::string to_json(const Dendrogram& d) {
  nlohmann::ordered_json doc;
  doc["leaves"] = d.leaves;
  auto merges = nlohmann::ordered_json::array();
  for (const Merge& m : d.merges) {
    nlohmann::ordered_json item;
    item["left"] = m.left;
    item["right"] = m.right;
    item["new_id"] = m.new_id;
    item["entropy"] = m.entropy;
    merges.push_back(std::move(item));
  }
  doc["merges"] = std::move(merges);
  return doc.dump() + "\n";
}

Dendrogram dendrogram_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("dendrogram JSON: ") + e.what());
  }
  auto need = [](const nlohmann::json& obj, const char* key) -> const nlohmann::json& {
    if (!obj.is_object() || !obj.contains(key))
      throw std::invalid_argument(std::string("dendrogram JSON: missing key '") + key + "'");
    return obj.at(key);
  };
  Dendrogram d;
  const auto& leaves = need(doc, "leaves");
  if (!leaves.is_array()) throw std::invalid_argument("dendrogram JSON: 'leaves' must be an array");
  for (const auto& leaf : leaves) {
    if (!leaf.is_string()) throw std::invalid_argument("dendrogram JSON: leaf labels must be strings");
    d.leaves.push_back(leaf.get<std::string>());
  }
  const auto& merges = need(doc, "merges");
  if (!merges.is_array()) throw std::invalid_argument("dendrogram JSON: 'merges' must be an array");
  for (const auto& item : merges) {
    auto id = [&](const char* key) {
      const auto& v = need(item, key);
      if (!v.is_number_unsigned())
        throw std::invalid_argument(std::string("dendrogram JSON: '") + key +
                                    "' must be a nonnegative integer");
      return v.get<ClusterId>();
    };
    const auto& h = need(item, "entropy");
    if (!h.is_number()) throw std::invalid_argument("dendrogram JSON: 'entropy' must be a number");
    d.merges.push_back({id("left"), id("right"), id("new_id"), h.get<double>()});
  }
  d.validate();
  return d;
}

// ---------------------------------------------------------------- Newick

namespace {

bool needs_quotes(std::string_view label) {
  if (label.empty()) return true;
  return std::any_of(label.begin(), label.end(), [](char c) {
    return std::string_view(" \t\r\n()[]':;,_").find(c) != std::string_view::npos;
  });
}

std::string newick_label(std::string_view label) {
  if (!needs_quotes(label)) return std::string(label);
  std::string out = "'";
  for (char c : label) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

class NewickReader {
 public:
  explicit NewickReader(std::string_view text) : text_(text) {}

  Dendrogram read() {
    subtree();
    skip_space();
    if (peek() == ':') branch_length();
    skip_space();
    if (peek() != ';') fail("expected ';'");
    ++pos_;
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after ';'");

    // Renumber: leaves keep reading order, internal nodes follow post-order.
    Dendrogram d;
    d.leaves = leaves_;
    const auto n = static_cast<ClusterId>(leaves_.size());
    std::vector<ClusterId> final_id(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) final_id[k] = n + static_cast<ClusterId>(k);
    auto resolve = [&](ClusterId raw) { return raw & kInternal ? final_id[raw & ~kInternal] : raw; };
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const auto& node = nodes_[k];
      const ClusterId a = resolve(node.first), b = resolve(node.second);
      d.merges.push_back({std::min(a, b), std::max(a, b), final_id[k], node.entropy});
    }
    d.validate();
    return d;
  }

 private:
  static constexpr ClusterId kInternal = 0x80000000u;

  struct RawNode {
    ClusterId first;
    ClusterId second;
    double entropy;
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("newick: " + what + " at offset " + std::to_string(pos_));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else if (c == '[') {
        const auto close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  std::string label() {
    skip_space();
    std::string out;
    if (peek() == '\'') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted label");
        const char c = text_[pos_++];
        if (c == '\'') {
          if (peek() == '\'') {
            out += '\'';
            ++pos_;
          } else {
            break;
          }
        } else {
          out += c;
        }
      }
      return out;
    }
    while (pos_ < text_.size() &&
           std::string_view("()[]':;, \t\r\n").find(text_[pos_]) == std::string_view::npos) {
      const char c = text_[pos_++];
      out += c == '_' ? ' ' : c;
    }
    return out;
  }

  void branch_length() {
    ++pos_;  // ':'
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::string_view("(),;[ \t\r\n").find(text_[pos_]) == std::string_view::npos)
      ++pos_;
    try {
      parse_double(text_.substr(start, pos_ - start));
    } catch (const std::invalid_argument&) {
      fail("bad branch length");
    }
  }

  ClusterId subtree() {
    skip_space();
    ClusterId id;
    if (peek() == '(') {
      ++pos_;
      const ClusterId first = subtree();
      skip_space();
      if (peek() == ':') branch_length();
      skip_space();
      if (peek() != ',') fail("expected ',' (only binary trees are supported)");
      ++pos_;
      const ClusterId second = subtree();
      skip_space();
      if (peek() == ':') branch_length();
      skip_space();
      if (peek() != ')') fail("expected ')' (only binary trees are supported)");
      ++pos_;
      const std::size_t at = pos_;
      const std::string text = label();
      if (text.empty()) fail("internal node without an entropy label");
      double h = 0.0;
      try {
        h = parse_double(text);
      } catch (const std::invalid_argument&) {
        pos_ = at;
        fail("internal node label '" + text + "' is not a number");
      }
      nodes_.push_back({first, second, h});
      id = kInternal | static_cast<ClusterId>(nodes_.size() - 1);
    } else {
      const bool quoted = peek() == '\'';
      std::string text = label();
      if (text.empty() && !quoted) fail("expected a leaf label");
      leaves_.push_back(std::move(text));
      id = static_cast<ClusterId>(leaves_.size() - 1);
    }
    return id;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> leaves_;
  std::vector<RawNode> nodes_;
};

}  // namespace

std::string to_newick(const Dendrogram& d) {
  d.validate();
  const std::size_t n = d.leaves.size();
  // Iterative post-order so that deep chains do not exhaust the stack.
  // Children are written in order of their smallest leaf id, so a cluster
  // holding leaf 0 always comes first.
  std::vector<std::string> built(2 * n - 1);
  std::vector<ClusterId> first_leaf(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    built[i] = newick_label(d.leaves[i]);
    first_leaf[i] = static_cast<ClusterId>(i);
  }
  for (const Merge& m : d.merges) {
    const bool swap = first_leaf[m.right] < first_leaf[m.left];
    const ClusterId a = swap ? m.right : m.left, b = swap ? m.left : m.right;
    first_leaf[m.new_id] = first_leaf[a];
    built[m.new_id] = "(" + std::move(built[a]) + "," + std::move(built[b]) + ")" +
                      format_exact(m.entropy);
  }
  return built[2 * n - 2] + ";\n";
}

Dendrogram parse_newick(std::string_view text) { return NewickReader(text).read(); }

namespace {

std::map<std::multiset<std::string>, double> clades(const Dendrogram& d) {
  const std::size_t n = d.leaves.size();
  std::vector<std::multiset<std::string>> members(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) members[i] = {d.leaves[i]};
  std::map<std::multiset<std::string>, double> out;
  for (const Merge& m : d.merges) {
    members[m.new_id] = members[m.left];
    members[m.new_id].insert(members[m.right].begin(), members[m.right].end());
    out[members[m.new_id]] = m.entropy;
  }
  return out;
}

}  // namespace

bool same_tree(const Dendrogram& a, const Dendrogram& b) {
  if (a.leaves.size() != b.leaves.size() || a.merges.size() != b.merges.size()) return false;
  if (std::multiset<std::string>(a.leaves.begin(), a.leaves.end()) !=
      std::multiset<std::string>(b.leaves.begin(), b.leaves.end()))
    return false;
  return clades(a) == clades(b);
}

// ---------------------------------------------------------------- text

namespace {

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

// First `limit` code points of s; a cut label ends in '…'.
std::string truncate_label(std::string_view s, std::size_t limit) {
  if (code_points(s) <= limit) return std::string(s);
  std::string out;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool starts = (static_cast<unsigned char>(s[i]) & 0xC0) != 0x80;
    if (starts && ++seen == limit) break;
    out += s[i];
  }
  return out + "…";
}

enum : unsigned { kUp = 1, kDown = 2, kLeft = 4, kRight = 8 };

std::string_view box_char(unsigned cell) {
  switch (cell) {
    case 0: return " ";
    case kUp | kDown: case kUp: case kDown: return "│";
    case kLeft | kRight: case kLeft: case kRight: return "─";
    case kDown | kRight: return "┌";
    case kDown | kLeft: return "┐";
    case kUp | kRight: return "└";
    case kUp | kLeft: return "┘";
    case kUp | kDown | kRight: return "├";
    case kUp | kDown | kLeft: return "┤";
    case kLeft | kRight | kDown: return "┬";
    case kLeft | kRight | kUp: return "┴";
    default: return "┼";
  }
}

struct Layout {
  std::vector<std::size_t> row;  // per cluster
  std::vector<double> height;    // per cluster
};

// In-order listing alternates leaf and internal node, so every cluster gets
// its own line: leaves on even lines, bifurcations between their subtrees.
Layout layout_rows(const Dendrogram& d) {
  const std::size_t n = d.leaves.size();
  Layout layout{std::vector<std::size_t>(2 * n - 1), std::vector<double>(2 * n - 1, 0.0)};
  for (const Merge& m : d.merges) layout.height[m.new_id] = m.entropy;
  std::size_t next = 0;
  struct Frame {
    ClusterId id;
    bool expanded;
  };
  std::vector<Frame> stack{{static_cast<ClusterId>(2 * n - 2), false}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.id < n || f.expanded) {
      layout.row[f.id] = next++;
      continue;
    }
    const Merge& m = d.merges[f.id - n];
    stack.push_back({m.right, false});
    stack.push_back({f.id, true});
    stack.push_back({m.left, false});
  }
  return layout;
}

}  // namespace

std::string render_text(const Dendrogram& d, const RenderOptions& options) {
  options.validate();
  d.validate();
  const std::size_t n = d.leaves.size();
  if (n == 1)
    return truncate_label(d.leaves[0], std::min(options.label_truncation, options.text_width)) + "\n";

  const Layout layout = layout_rows(d);
  const bool monotone = d.heights_monotone();
  double top = 0.0;
  for (const Merge& m : d.merges) top = std::max(top, m.entropy);

  std::vector<std::string> notes(n - 1);
  std::size_t note_width = 0;
  if (options.show_entropies)
    for (std::size_t k = 0; k < n - 1; ++k) {
      notes[k] = format_short(d.merges[k].entropy);
      note_width = std::max(note_width, code_points(notes[k]));
    }
  // Labels give way first so the plot keeps at least 8 columns.
  const std::size_t fixed = 1 + (options.show_entropies ? note_width + 2 : 0) + 8;
  const std::size_t label_limit = std::min(
      options.label_truncation, options.text_width > fixed + 1 ? options.text_width - fixed : 1);
  std::vector<std::string> labels(n);
  std::size_t label_width = 0;
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = truncate_label(d.leaves[i], label_limit);
    label_width = std::max(label_width, code_points(labels[i]));
  }
  const std::size_t reserved = label_width + 1 + (options.show_entropies ? note_width + 2 : 0);
  const std::size_t plot = options.text_width > reserved + 4 ? options.text_width - reserved : 4;
  const std::size_t last = plot - 2;  // rightmost bifurcation column; root stub uses plot - 1

  std::vector<std::size_t> column(2 * n - 1, 0);
  for (std::size_t k = 0; k < n - 1; ++k) {
    const double frac = monotone ? (top > 0.0 ? d.merges[k].entropy / top : 0.0)
                                 : static_cast<double>(k + 1) / static_cast<double>(n - 1);
    column[n + k] = static_cast<std::size_t>(std::lround(frac * static_cast<double>(last)));
  }

  const std::size_t rows = 2 * n - 1;
  std::vector<std::vector<unsigned>> grid(rows, std::vector<unsigned>(plot, 0));
  auto horizontal = [&](std::size_t r, std::size_t x0, std::size_t x1) {
    if (x0 == x1) return;
    if (x0 > x1) std::swap(x0, x1);
    grid[r][x0] |= kRight;
    for (std::size_t x = x0 + 1; x < x1; ++x) grid[r][x] |= kLeft | kRight;
    grid[r][x1] |= kLeft;
  };
  auto vertical = [&](std::size_t x, std::size_t r0, std::size_t r1) {
    grid[r0][x] |= kDown;
    for (std::size_t r = r0 + 1; r < r1; ++r) grid[r][x] |= kUp | kDown;
    grid[r1][x] |= kUp;
  };
  for (const Merge& m : d.merges) {
    const std::size_t x = column[m.new_id];
    horizontal(layout.row[m.left], column[m.left], x);
    horizontal(layout.row[m.right], column[m.right], x);
    vertical(x, layout.row[m.left], layout.row[m.right]);
  }
  const ClusterId root = static_cast<ClusterId>(2 * n - 2);
  horizontal(layout.row[root], column[root], column[root] + 1);

  // Header: the longest form that fits the width.
  const std::vector<std::string> headers =
      monotone ? std::vector<std::string>{"# " + std::to_string(n) + " leaves, x: entropy 0.." +
                                              format_short(top),
                                          "# x: entropy 0.." + format_short(top), "# x: entropy"}
               : std::vector<std::string>{"# " + std::to_string(n) +
                                              " leaves, x: merge order (non-monotone heights)",
                                          "# x: merge order (non-monotone)", "# non-monotone"};
  auto header = std::find_if(headers.begin(), headers.end(), [&](const std::string& h) {
    return code_points(h) <= options.text_width;
  });
  std::string out = (header != headers.end() ? *header : headers.back()) + "\n";

  std::vector<std::string> row_label(rows), row_note(rows);
  for (ClusterId c = 0; c < n; ++c) row_label[layout.row[c]] = labels[c];
  if (options.show_entropies)
    for (std::size_t k = 0; k < n - 1; ++k) row_note[layout.row[n + k]] = notes[k];

  for (std::size_t r = 0; r < rows; ++r) {
    std::string line = row_label[r];
    line.append(label_width - code_points(row_label[r]) + 1, ' ');
    for (unsigned cell : grid[r]) line += box_char(cell);
    if (!row_note[r].empty()) line += "  " + row_note[r];
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

// ---------------------------------------------------------------- SVG

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const Dendrogram& d, const RenderOptions& options) {
  options.validate();
  d.validate();
  const std::size_t n = d.leaves.size();
  constexpr double kRow = 16.0, kMargin = 12.0, kCharWidth = 7.0, kAxis = 36.0;

  std::vector<std::string> labels(n);
  std::size_t longest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = truncate_label(d.leaves[i], options.label_truncation);
    longest = std::max(longest, code_points(labels[i]));
  }
  const double width = static_cast<double>(std::max<std::size_t>(options.svg_width, 200));
  const double natural = 2 * kMargin + static_cast<double>(n) * kRow + (d.merges.empty() ? 0 : kAxis);
  const double height = options.svg_height > 0 ? static_cast<double>(options.svg_height) : natural;
  const double row = (height - 2 * kMargin - (d.merges.empty() ? 0 : kAxis)) / static_cast<double>(n);
  const double label_right = kMargin + kCharWidth * static_cast<double>(longest);
  const double x0 = label_right + 6.0;
  const double x1 = std::max(x0 + 20.0, width - kMargin - (options.show_entropies ? 60.0 : 10.0));

  const bool monotone = d.heights_monotone();
  double top = 0.0;
  for (const Merge& m : d.merges) top = std::max(top, m.entropy);
  auto x_of = [&](double h) { return top > 0.0 ? x0 + h / top * (x1 - x0) : x0; };

  std::vector<double> y(2 * n - 1, 0.0), x(2 * n - 1, x0);
  const auto order = leaf_order(d);
  for (std::size_t i = 0; i < n; ++i)
    y[order[i]] = kMargin + (static_cast<double>(i) + 0.5) * row;
  for (const Merge& m : d.merges) {
    y[m.new_id] = (y[m.left] + y[m.right]) / 2.0;
    x[m.new_id] = x_of(m.entropy);
  }

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + px(width) +
         "\" height=\"" + px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\">\n";
  out += "<!-- " + std::to_string(n) + " leaves; x: entropy" +
         (monotone ? std::string() : std::string(", non-monotone heights drawn as given")) + " -->\n";
  out += "<g font-family=\"monospace\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < n; ++i)
    out += "<text x=\"" + px(label_right) + "\" y=\"" + px(y[i] + 4.0) +
           "\" text-anchor=\"end\" class=\"leaf\">" + xml_escape(labels[i]) + "</text>\n";
  out += "</g>\n";

  if (!d.merges.empty()) {
    out += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    auto line = [&](double ax, double ay, double bx, double by) {
      out += "<line x1=\"" + px(ax) + "\" y1=\"" + px(ay) + "\" x2=\"" + px(bx) + "\" y2=\"" +
             px(by) + "\"/>\n";
    };
    // One elbow per merge: left child across, down to the right child, back.
    for (const Merge& m : d.merges)
      out += "<path class=\"merge\" d=\"M" + px(x[m.left]) + " " + px(y[m.left]) + " H" +
             px(x[m.new_id]) + " V" + px(y[m.right]) + " H" + px(x[m.right]) + "\"/>\n";
    const ClusterId root = static_cast<ClusterId>(2 * n - 2);
    line(x[root], y[root], x[root] + 6.0, y[root]);
    const double axis_y = height - kMargin - kAxis + 14.0;
    line(x0, axis_y, x1, axis_y);
    line(x0, axis_y, x0, axis_y + 4.0);
    line(x1, axis_y, x1, axis_y + 4.0);
    out += "</g>\n";

    out += "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"#444\">\n";
    out += "<text x=\"" + px(x0) + "\" y=\"" + px(axis_y + 15.0) + "\" text-anchor=\"middle\">0</text>\n";
    out += "<text x=\"" + px(x1) + "\" y=\"" + px(axis_y + 15.0) + "\" text-anchor=\"middle\">" +
           format_short(top) + "</text>\n";
    out += "<text x=\"" + px((x0 + x1) / 2.0) + "\" y=\"" + px(axis_y + 15.0) +
           "\" text-anchor=\"middle\">entropy</text>\n";
    if (options.show_entropies)
      for (const Merge& m : d.merges)
        out += "<text x=\"" + px(x[m.new_id] + 3.0) + "\" y=\"" + px(y[m.new_id] - 3.0) + "\">" +
               format_short(m.entropy) + "</text>\n";
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render(const Dendrogram& d, const RenderOptions& options) {
  switch (options.format) {
    case Format::json: return to_json(d);
    case Format::newick: return to_newick(d);
    case Format::text: return render_text(d, options);
    case Format::svg: return render_svg(d, options);
  }
  throw std::invalid_argument("unknown format");
}

}  // namespace rebus
