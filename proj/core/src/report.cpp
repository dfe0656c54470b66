#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "json.hpp"
#include "smoothcvx/errors.hpp"
#include "smoothcvx/verify.hpp"

namespace smoothcvx {

using nlohmann::json;

namespace {

json real_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

void Report::finalize() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
}

std::string Report::to_json() const {
  json j;
  j["suite"] = suite;
  j["seed"] = seed;
  json arr = json::array();
  for (const CheckResult& c : checks) {
    json w = json::array();
    for (const Point& p : c.witness) {
      json q = json::array();
      for (double v : p) q.push_back(real_to_json(v));
      w.push_back(std::move(q));
    }
    arr.push_back({{"id", c.id}, {"pass", c.pass}, {"worst", real_to_json(c.worst)}, {"witness", std::move(w)},
                   {"samples", c.samples}});
  }
  j["checks"] = std::move(arr);
  j["pass"] = pass();
  return j.dump(2);
}

Report Report::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    Report r;
    r.suite = j.at("suite").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const json& c : j.at("checks")) {
      CheckResult cr;
      cr.id = c.at("id").get<std::string>();
      cr.pass = c.at("pass").get<bool>();
      cr.worst = real_from_json(c.at("worst"));
      for (const json& p : c.at("witness")) {
        Point q;
        for (const json& v : p) q.push_back(real_from_json(v));
        cr.witness.push_back(std::move(q));
      }
      if (c.contains("samples")) cr.samples = c.at("samples").get<std::size_t>();
      r.checks.push_back(std::move(cr));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("report json: ") + e.what());
  }
}

GridTable read_grid_csv(std::istream& in) {
  GridTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error("grid csv: missing header");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw Error("grid csv: bad number on line " + std::to_string(lineno));
      row.push_back(v);
    }
    if (row.size() != t.header.size()) throw Error("grid csv: wrong column count on line " + std::to_string(lineno));
    t.rows.push_back(std::move(row));
  }
  return t;
}

GridSummary summarize_grid(const GridTable& table) {
  GridSummary s;
  if (table.header.empty() || table.header.back() != "diff") throw Error("grid csv: last column must be diff");
  s.points = table.rows.size();
  s.sup_diff = -std::numeric_limits<double>::infinity();
  s.min_diff = std::numeric_limits<double>::infinity();
  for (const auto& row : table.rows) {
    s.sup_diff = std::max(s.sup_diff, row.back());
    s.min_diff = std::min(s.min_diff, row.back());
  }
  return s;
}

}  // namespace smoothcvx
