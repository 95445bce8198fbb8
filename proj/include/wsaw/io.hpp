#pragma once

// JSON and CSV serialisation for tables and reports.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "wsaw/expansion.hpp"
#include "wsaw/lattice.hpp"
#include "wsaw/poly.hpp"
#include "wsaw/walks.hpp"

namespace wsaw::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string config_hash(const json& cfg) { return fnv1a_hex(cfg.dump()); }

inline std::string format_real(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline json to_json(const Site& x) {
  json a = json::array();
  for (auto c : x) a.push_back(c);
  return a;
}

inline Site site_from_json(const json& j) {
  Site x;
  for (const auto& c : j) x.push_back(c.get<Coord>());
  return x;
}

inline json to_json(const BetaPolynomial& p) { return p.to_strings(); }

inline BetaPolynomial poly_from_json(const json& j) { return BetaPolynomial::from_strings(j.get<std::vector<std::string>>()); }

inline json config_json(const LatticeConfig& cfg) {
  json j;
  j["d"] = cfg.d;
  j["geometry"] = to_string(cfg.geometry);
  if (cfg.is_torus()) j["r"] = cfg.r;
  return j;
}

inline LatticeConfig config_from_json(const json& j) {
  LatticeConfig cfg;
  cfg.d = j.at("d").get<int>();
  const auto g = j.value("geometry", std::string("infinite"));
  if (g == "torus") {
    cfg.geometry = Geometry::torus;
    cfg.r = j.at("r").get<int>();
  } else if (g != "infinite") {
    throw std::invalid_argument("unknown geometry '" + g + "'");
  }
  cfg.beta = j.value("beta", 0.0);
  cfg.validate();
  return cfg;
}

// {d, geometry, r?, n_max, entries: [{n, x, poly}]}
inline json to_json(const CoefficientTable& t) {
  json j = config_json(t.config);
  j["n_max"] = t.n_max;
  json entries = json::array();
  for (int n = 0; n <= t.n_max; ++n)
    for (const auto& [x, p] : t.rows[static_cast<std::size_t>(n)])
      entries.push_back({{"n", n}, {"x", to_json(x)}, {"poly", to_json(p)}});
  j["entries"] = std::move(entries);
  return j;
}

inline CoefficientTable table_from_json(const json& j) {
  CoefficientTable t;
  t.config = config_from_json(j);
  t.n_max = j.at("n_max").get<int>();
  if (t.n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  t.rows.assign(static_cast<std::size_t>(t.n_max) + 1, {});
  for (const auto& e : j.at("entries")) {
    const int n = e.at("n").get<int>();
    if (n < 0 || n > t.n_max) throw std::invalid_argument("entry length outside the table");
    t.rows[static_cast<std::size_t>(n)][site_from_json(e.at("x"))] = poly_from_json(e.at("poly"));
  }
  return t;
}

inline json to_json(const PiTable& t) {
  json j = config_json(t.config);
  j["n_max"] = t.n_max;
  j["N_max"] = t.N_max;
  json entries = json::array();
  for (int N = 1; N <= t.N_max; ++N)
    for (int n = 0; n <= t.n_max; ++n)
      for (const auto& [x, p] : t.rows[static_cast<std::size_t>(N)][static_cast<std::size_t>(n)])
        entries.push_back({{"N", N}, {"n", n}, {"x", to_json(x)}, {"poly", to_json(p)}});
  j["entries"] = std::move(entries);
  return j;
}

inline PiTable pi_table_from_json(const json& j) {
  PiTable t;
  t.config = config_from_json(j);
  t.n_max = j.at("n_max").get<int>();
  t.N_max = j.at("N_max").get<int>();
  if (t.n_max < 0 || t.N_max < 1) throw std::invalid_argument("bad table bounds");
  t.rows.assign(static_cast<std::size_t>(t.N_max) + 1, PolyRows(static_cast<std::size_t>(t.n_max) + 1));
  t.rows[0].clear();
  for (const auto& e : j.at("entries")) {
    const int N = e.at("N").get<int>(), n = e.at("n").get<int>();
    if (N < 1 || N > t.N_max || n < 0 || n > t.n_max) throw std::invalid_argument("entry outside the table");
    t.rows[static_cast<std::size_t>(N)][static_cast<std::size_t>(n)][site_from_json(e.at("x"))] = poly_from_json(e.at("poly"));
  }
  return t;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) { row_strings(std::move(header)); }

  template <typename... T>
  void row(const T&... cells) {
    std::vector<std::string> v;
    (v.push_back(cell(cells)), ...);
    row_strings(std::move(v));
  }

  const std::string& str() const { return text_; }

 private:
  static std::string cell(double x) { return format_real(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <typename I>
  static std::string cell(I i) requires std::is_integral_v<I> { return std::to_string(i); }

  void row_strings(std::vector<std::string> v) {
    for (std::size_t i = 0; i < v.size(); ++i) text_ += (i ? "," : "") + v[i];
    text_ += '\n';
  }

  std::string text_;
};

}  // namespace wsaw::io
