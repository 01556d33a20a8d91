#include "mdprolate/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mdprolate {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

std::vector<double> get_numbers(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + ": \"" + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + ": \"" + key + "\" must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::array<double, 2> get_pair(const json& obj, const char* key, const std::string& where) {
  const auto v = get_numbers(obj, key, where);
  if (v.size() != 2) throw ConfigError(where + ": \"" + key + "\" must have two entries");
  return {v[0], v[1]};
}

}  // namespace

BandDocument parse_band_document(const json& doc) {
  if (!doc.is_object()) throw ConfigError("band document must be a JSON object");
  reject_unknown(doc, {"dim", "cubic", "parallelepiped", "grid"}, "band document");

  BandDocument out;
  if (!doc.contains("dim") || !doc.at("dim").is_number_integer()) {
    throw ConfigError("band document: \"dim\" must be an integer");
  }
  out.dim = doc.at("dim").get<int>();
  if (out.dim < 1) throw ConfigError("band document: \"dim\" must be positive");

  if (doc.contains("cubic")) {
    const auto& arr = doc.at("cubic");
    if (!arr.is_array()) throw ConfigError("band document: \"cubic\" must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "cubic[" + std::to_string(i) + "]";
      if (!arr[i].is_object()) throw ConfigError(where + ": must be an object");
      reject_unknown(arr[i], {"center", "half_widths"}, where);
      out.cubic.push_back({get_numbers(arr[i], "center", where), get_numbers(arr[i], "half_widths", where)});
    }
  }
  if (doc.contains("parallelepiped")) {
    const auto& arr = doc.at("parallelepiped");
    if (!arr.is_array()) throw ConfigError("band document: \"parallelepiped\" must be an array");
    if (out.dim != 2 && !arr.empty()) throw ConfigError("parallelepipedic bands need \"dim\": 2");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "parallelepiped[" + std::to_string(i) + "]";
      if (!arr[i].is_object()) throw ConfigError(where + ": must be an object");
      reject_unknown(arr[i], {"a", "b", "c", "d", "half_widths", "center"}, where);
      ParallelepipedBand b;
      b.a = get_number(arr[i], "a", where);
      b.b = get_number(arr[i], "b", where);
      b.c = get_number(arr[i], "c", where);
      b.d = get_number(arr[i], "d", where);
      b.half_widths = get_pair(arr[i], "half_widths", where);
      b.center = get_pair(arr[i], "center", where);
      out.parallelepiped.push_back(b);
    }
  }
  if (!out.cubic.empty() && !out.parallelepiped.empty()) {
    throw ConfigError("band document: give either \"cubic\" or \"parallelepiped\" bands, not both");
  }
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    if (!g.is_array()) throw ConfigError("band document: \"grid\" must be an array");
    for (const auto& x : g) {
      if (!x.is_number_integer()) throw ConfigError("band document: \"grid\" must contain integers");
      out.grid.push_back(x.get<Index>());
    }
  }
  return out;
}

BandDocument load_band_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open band file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("band file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_band_document(doc);
}

json to_json(const BandDocument& doc) {
  json out;
  out["dim"] = doc.dim;
  out["cubic"] = json::array();
  for (const auto& b : doc.cubic) out["cubic"].push_back({{"center", b.center}, {"half_widths", b.half_widths}});
  out["parallelepiped"] = json::array();
  for (const auto& b : doc.parallelepiped) {
    out["parallelepiped"].push_back({{"a", b.a}, {"b", b.b}, {"c", b.c}, {"d", b.d},
                                     {"half_widths", b.half_widths}, {"center", b.center}});
  }
  if (!doc.grid.empty()) out["grid"] = doc.grid;
  return out;
}

std::vector<Violation> validate(const BandDocument& doc) {
  if (doc.is_parallelepiped()) return validate(std::span<const ParallelepipedBand>(doc.parallelepiped));
  return validate(doc.dim, std::span<const CubicBand>(doc.cubic));
}

std::vector<Index> parse_grid(const std::string& text) {
  std::vector<Index> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(part, &used);
    } catch (const std::exception&) {
      throw ConfigError("grid \"" + text + "\" must look like MxN");
    }
    if (used != part.size()) throw ConfigError("grid \"" + text + "\" must look like MxN");
    dims.push_back(static_cast<Index>(v));
  }
  if (dims.empty()) throw ConfigError("grid is empty");
  return dims;
}

void check_run_config(const RunConfig& cfg) {
  if (!(cfg.eps > 0.0 && cfg.eps < 0.5)) throw ConfigError("eps must lie in (0, 1/2)");
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
}

const std::vector<Index>& Problem::dims() const {
  return cubic ? cubic->grid().dims() : pp->grid().dims();
}

double Problem::measure() const { return cubic ? cubic->measure() : pp->measure(); }

Problem make_problem(BandDocument doc, const std::vector<Index>& grid_override) {
  if (!grid_override.empty()) doc.grid = grid_override;
  if (doc.grid.empty()) throw ConfigError("no sampling grid: add \"grid\" to the band file or pass --grid");
  if (doc.band_count() == 0) throw ConfigError("band list is empty");
  const auto violations = validate(doc);
  if (!violations.empty()) throw ConfigError(format_violations(violations));

  Problem out;
  SamplingGrid grid(doc.grid);
  if (doc.is_parallelepiped()) {
    out.pp.emplace(std::move(grid), ParallelepipedUnion(doc.parallelepiped));
  } else {
    out.cubic.emplace(std::move(grid), CubicBandUnion(doc.dim, doc.cubic));
  }
  out.doc = std::move(doc);
  return out;
}

Problem load_problem(const RunConfig& cfg) {
  if (cfg.band_file.empty()) throw ConfigError("--config <band file> is required");
  return make_problem(load_band_document(cfg.band_file), cfg.grid);
}

DictionarySizing dictionary_sizing(const OperatorSpec& spec, const RunConfig& cfg) {
  const auto& bands = spec.bands();
  const double mn = static_cast<double>(spec.size());
  DictionarySizing s;
  if (cfg.sizing == Sizing::explicit_counts) {
    if (!cfg.p) throw ConfigError("explicit sizing needs --p");
    if (cfg.q.size() != bands.size()) {
      throw ConfigError("explicit sizing needs one --q count per band (" + std::to_string(bands.size()) + ")");
    }
    s.p = *cfg.p;
    s.q = cfg.q;
  } else {
    const double total = spec.measure();
    const double upper = std::min(1.0, 1.0 / total - 1.0);
    if (!(cfg.eps > 0.0 && cfg.eps < upper)) {
      throw ConfigError("eps must lie in (0, min(1, 1/|W| - 1)) = (0, " + std::to_string(upper) + ")");
    }
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const double m = mn * bands.band_measure(i);
      const auto hi = static_cast<Index>(std::ceil(m * (1.0 + cfg.eps)));
      const auto lo = static_cast<Index>(std::floor(m * (1.0 - cfg.eps)));
      if (cfg.sizing == Sizing::psi_in_phi) {
        s.p += hi;
        s.q.push_back(lo);
      } else {
        s.p += lo;
        s.q.push_back(hi);
      }
    }
  }
  if (s.p < 0 || s.p > spec.size()) {
    throw ConfigError("dictionary size p = " + std::to_string(s.p) + " outside [0, MN]");
  }
  for (Index q : s.q) {
    if (q < 0 || q > spec.size()) throw ConfigError("dictionary size q = " + std::to_string(q) + " outside [0, MN]");
  }
  return s;
}

}  // namespace mdprolate
