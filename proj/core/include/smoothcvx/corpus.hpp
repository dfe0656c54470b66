#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smoothcvx/expr.hpp"
#include "smoothcvx/sampling.hpp"

namespace smoothcvx {

/// One built-in test function.
struct CorpusEntry {
  std::string name;
  std::string expr;
  Domain domain;
  std::vector<std::string> tags;
  /// Suggested sampling window (used for unbounded domains).
  std::optional<Box> window;

  [[nodiscard]] ConvexExpr parse() const;
  [[nodiscard]] bool has_tag(std::string_view tag) const;
};

/// The embedded manifest, in file order.
const std::vector<CorpusEntry>& corpus();
/// Throws Error when no entry has that name.
const CorpusEntry& corpus_entry(std::string_view name);
/// Parses a manifest: a JSON list of {name, expr, domain, tags[, window]}.
std::vector<CorpusEntry> parse_corpus(std::string_view json_text);

}  // namespace smoothcvx
