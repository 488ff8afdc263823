#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rebus/agglomeration.hpp"

namespace rebus {

enum class Format { json, newick, text, svg };

// Parses "json", "newick", "text" or "svg"; throws std::invalid_argument.
Format parse_format(std::string_view name);
std::string_view format_name(Format format);
// File extension for the format, without the dot ("json", "nwk", "txt", "svg").
std::string_view format_extension(Format format);

struct RenderOptions {
  Format format = Format::text;
  std::size_t text_width = 100;    // max code points per text line
  std::size_t svg_width = 800;     // px
  std::size_t svg_height = 0;      // px; 0 sizes the image from the leaf count
  std::size_t label_truncation = 40;
  bool show_entropies = true;

  // Throws std::invalid_argument on label_truncation == 0.
  void validate() const;
};

// Leaf ids in page order: the merge tree listed recursively from the root,
// lower cluster id first.
std::vector<ClusterId> leaf_order(const Dendrogram& d);

// {"leaves":[...],"merges":[{"left":..,"right":..,"new_id":..,"entropy":..},...]}
// with that key order and shortest round-trip numbers.
std::string to_json(const Dendrogram& d);
// Inverse of to_json; validates the result. Throws std::invalid_argument.
Dendrogram dendrogram_from_json(std::string_view text);

// Nested-parenthesis tree, children in order of their smallest leaf id
// (so "((a,b)h1,c)h2;" rather than page order), each internal node
// labelled with its merge entropy, ending in ';'. Leaf labels that are empty
// or contain whitespace or any of ()[]':;,_ are single-quoted with '' for '.
std::string to_newick(const Dendrogram& d);

// Reads a binary Newick tree whose internal node labels are entropies.
// Leaves are numbered in reading order and merges in post-order, so the
// result equals the original dendrogram up to merge order and child
// orientation; compare with same_tree(). Branch lengths and [comments] are
// accepted and ignored. Throws std::invalid_argument.
Dendrogram parse_newick(std::string_view text);

// True when both dendrograms have the same leaf labels and the same clusters
// (as leaf-label sets) at the same entropies.
bool same_tree(const Dendrogram& a, const Dendrogram& b);

// Box-drawing dendrogram: one leaf per line, bifurcations between their
// children's lines, x proportional to entropy when heights are monotone and
// to merge order otherwise. A '#' header states which.
std::string render_text(const Dendrogram& d, const RenderOptions& options = {});

// Standalone SVG 1.1: x = entropy (0 next to the leaf labels), one row per
// leaf in leaf_order(); heights are drawn as given, including decreases.
std::string render_svg(const Dendrogram& d, const RenderOptions& options = {});

// Dispatches on options.format.
std::string render(const Dendrogram& d, const RenderOptions& options);

}  // namespace rebus
