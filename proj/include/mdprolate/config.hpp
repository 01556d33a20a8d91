#ifndef MDPROLATE_CONFIG_HPP_
#define MDPROLATE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdprolate/bandspec.hpp"
#include "mdprolate/mdoperator.hpp"
#include "mdprolate/parallelepiped.hpp"

namespace mdprolate {

/// Band configuration file:
///   {"dim": 2, "cubic": [{"center": [..], "half_widths": [..]}],
///    "parallelepiped": [{"a":.., "b":.., "c":.., "d":.., "half_widths": [..], "center": [..]}],
///    "grid": [M, N]}
/// Unknown keys are rejected. Geometry is not checked here; see validate().
struct BandDocument {
  int dim = 0;
  std::vector<CubicBand> cubic;
  std::vector<ParallelepipedBand> parallelepiped;
  std::vector<Index> grid;  // empty when the file has no "grid"

  bool is_parallelepiped() const { return !parallelepiped.empty(); }
  std::size_t band_count() const { return cubic.size() + parallelepiped.size(); }
};

BandDocument parse_band_document(const nlohmann::json& doc);
BandDocument load_band_document(const std::filesystem::path& path);
nlohmann::json to_json(const BandDocument& doc);

/// Geometry violations of whichever band list the document carries.
std::vector<Violation> validate(const BandDocument& doc);

/// "64", "32x32", "8x8x8".
std::vector<Index> parse_grid(const std::string& text);

enum class Sizing { psi_in_phi, phi_in_psi, explicit_counts };
enum class OutputFormat { csv, json };

struct RunConfig {
  std::filesystem::path band_file;
  std::vector<Index> grid;  // overrides the document's grid when non-empty
  double eps = 0.2;
  Sizing sizing = Sizing::psi_in_phi;
  std::optional<Index> p;
  std::vector<Index> q;
  Index trials = 2000;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::csv;
  double tolerance = 0.10;  // relative, for approx
  double min_cos = 0.95;    // pass threshold for the dictionary angle
  bool vectors = false;     // also export eigenvectors from `spectrum`
};

/// Throws ConfigError unless eps in (0, 1/2) and trials >= 1.
void check_run_config(const RunConfig& cfg);

/// A loaded, geometry-checked problem: exactly one of cubic / pp is set.
struct Problem {
  BandDocument doc;
  std::optional<OperatorSpec> cubic;
  std::optional<PPOperatorSpec> pp;

  const std::vector<Index>& dims() const;
  double measure() const;
  std::size_t band_count() const { return doc.band_count(); }
};

/// Loads cfg.band_file, applies the grid override, validates geometry.
Problem load_problem(const RunConfig& cfg);
Problem make_problem(BandDocument doc, const std::vector<Index>& grid_override = {});

/// Per-band dictionary sizes for the (1 +/- eps) rules, or the explicit counts.
struct DictionarySizing {
  Index p = 0;
  std::vector<Index> q;
};

DictionarySizing dictionary_sizing(const OperatorSpec& spec, const RunConfig& cfg);

}  // namespace mdprolate

#endif  // MDPROLATE_CONFIG_HPP_
