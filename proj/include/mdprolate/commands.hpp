#ifndef MDPROLATE_COMMANDS_HPP_
#define MDPROLATE_COMMANDS_HPP_

#include <iosfwd>
#include <vector>

#include "mdprolate/config.hpp"
#include "mdprolate/csv.hpp"

namespace mdprolate {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitConfigError = 2;

/// Writes spectrum.csv (or spectrum.json) and summary.json into cfg.out_dir.
int cmd_spectrum(const RunConfig& cfg, std::ostream& out);

/// Builds phi/psi at the configured sizing, writes phi/ and psi/ (CSV atoms + manifest.json)
/// and a dict_report, returns 1 if any report row fails.
int cmd_dict(const RunConfig& cfg, std::ostream& out);

/// Empirical approximation error of the leading-eigen-tensor basis vs the analytic tail.
int cmd_approx(const RunConfig& cfg, std::ostream& out);

/// Options for the property suite behind `verify`.
struct VerifyOptions {
  RunConfig run;
  bool use_config = false;      // run operator checks on cfg.band_file as well
  bool corrupt_kernel = false;  // test hook: perturbs one materialized entry
};

std::vector<ReportRow> run_verify_suite(const VerifyOptions& opts);
int cmd_verify(const VerifyOptions& opts, std::ostream& out);

/// Prints {"ok": bool, "violations": [...]} and returns 0 when the file is valid, 2 otherwise.
int cmd_bands_validate(const RunConfig& cfg, std::ostream& out);

/// Full command line entry point. Configuration errors print a JSON object to err and
/// return 2; numerical failures return 1.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mdprolate

#endif  // MDPROLATE_COMMANDS_HPP_
