#include "smoothcvx/corpus.hpp"

#include <algorithm>

#include "json.hpp"
#include "smoothcvx/errors.hpp"
#include "smoothcvx/parse.hpp"

namespace smoothcvx {
namespace detail {
extern const std::string_view kCorpusManifest;
}

ConvexExpr CorpusEntry::parse() const { return parse_expr(expr, domain); }

bool CorpusEntry::has_tag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

std::vector<CorpusEntry> parse_corpus(std::string_view json_text) {
  using nlohmann::json;
  std::vector<CorpusEntry> out;
  try {
    for (const json& e : json::parse(json_text)) {
      std::optional<Box> window;
      if (e.contains("window")) {
        window = Box{e.at("window").at("lo").get<Point>(), e.at("window").at("hi").get<Point>()};
      }
      out.push_back(CorpusEntry{e.at("name").get<std::string>(), e.at("expr").get<std::string>(),
                                Domain::from_json(e.at("domain").dump()),
                                e.value("tags", std::vector<std::string>{}), std::move(window)});
    }
  } catch (const json::exception& ex) {
    throw Error(std::string("corpus manifest: ") + ex.what());
  }
  return out;
}

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = parse_corpus(detail::kCorpusManifest);
  return entries;
}

const CorpusEntry& corpus_entry(std::string_view name) {
  for (const CorpusEntry& e : corpus())
    if (e.name == name) return e;
  throw Error("no corpus entry named '" + std::string(name) + "'");
}

}  // namespace smoothcvx
