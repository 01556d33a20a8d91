#include "mdprolate/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mdprolate/dictionary.hpp"
#include "mdprolate/mdoperator.hpp"
#include "mdprolate/parallelepiped.hpp"
#include "mdprolate/prolate.hpp"

namespace mdprolate {

namespace {

using nlohmann::json;

std::string dims_string(const std::vector<Index>& dims) {
  std::string s;
  for (std::size_t j = 0; j < dims.size(); ++j) s += (j ? "x" : "") + std::to_string(dims[j]);
  return s;
}

std::string params_string(const Problem& pr) {
  return "grid=" + dims_string(pr.dims()) + ";J=" + std::to_string(pr.band_count()) +
         ";shape=" + (pr.pp ? "parallelepiped" : "cubic");
}

void write_json(const std::filesystem::path& path, const json& doc) {
  check_finite(doc);
  write_atomic(path, doc.dump(2) + "\n");
}

void write_report(const RunConfig& cfg, const std::string& stem, std::vector<ReportRow> rows) {
  sort_rows(rows);
  if (cfg.format == OutputFormat::json) {
    write_json(cfg.out_dir / (stem + ".json"), rows_to_json(rows));
  } else {
    write_atomic(cfg.out_dir / (stem + ".csv"), rows_to_csv(rows));
  }
}

DenseCovariance<double> materialize(const Problem& pr) {
  if (pr.pp) return pp_materialize<double>(*pr.pp);
  return materialize_cubic<double>(*pr.cubic);
}

const char* kind_of(const Problem& pr) {
  if (pr.pp) return "parallelepiped";
  return pr.dims().size() == 1 ? "multiband_1d" : "cubic";
}

void write_dictionary(const std::filesystem::path& dir, const Dictionary<double>& d) {
  json manifest;
  manifest["dims"] = d.dims;
  manifest["atoms"] = json::array();
  for (std::size_t j = 0; j < d.atoms.size(); ++j) {
    const auto& a = d.atoms[j];
    char name[32];
    std::snprintf(name, sizeof name, "atom_%04zu.csv", j);
    write_atomic(dir / name, matrix_csv(a.tensor));
    json entry{{"file", name}, {"source", to_string(a.source)}, {"rank", a.rank}, {"eigenvalue", a.eigenvalue}};
    if (a.source == AtomSource::psi) {
      entry["band"] = a.band;
      entry["l"] = a.l;
      entry["k"] = a.k;
    }
    manifest["atoms"].push_back(std::move(entry));
  }
  write_json(dir / "manifest.json", manifest);
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  check_run_config(cfg);
  const Problem pr = load_problem(cfg);
  const auto cov = materialize(pr);
  const auto spec = spectrum(cov, cfg.vectors);
  const auto gap = trace_frobenius_gap(cov);
  const auto counts = cluster_counts(spec.eigenvalues, cfg.eps);

  if (cfg.format == OutputFormat::json) {
    write_json(cfg.out_dir / "spectrum.json",
               json{{"eigenvalues", std::vector<double>(spec.eigenvalues.begin(), spec.eigenvalues.end())}});
  } else {
    write_atomic(cfg.out_dir / "spectrum.csv", spectrum_csv(spec.eigenvalues));
  }
  if (cfg.vectors) write_atomic(cfg.out_dir / "eigenvectors.csv", vectors_csv(spec.eigenvectors));

  json summary{{"kind", kind_of(pr)},
               {"dims", pr.dims()},
               {"bands", pr.band_count()},
               {"measure", pr.measure()},
               {"trace", gap.trace},
               {"eigenvalue_sum", spec.eigenvalues.sum()},
               {"frobenius_sq", gap.frob_sq},
               {"gap", gap.gap},
               {"spectral_gap", spectral_gap(spec.eigenvalues)},
               {"eps", cfg.eps},
               {"max_eigenvalue", spec.eigenvalues.maxCoeff()},
               {"min_eigenvalue", spec.eigenvalues.minCoeff()},
               {"cluster_counts",
                {{"near_one", counts.near_one}, {"middle", counts.middle}, {"near_zero", counts.near_zero}}}};
  if (std::isfinite(gap.bound)) summary["gap_bound"] = gap.bound;
  write_json(cfg.out_dir / "summary.json", summary);
  out << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_dict(const RunConfig& cfg, std::ostream& out) {
  check_run_config(cfg);
  const Problem pr = load_problem(cfg);
  if (!pr.cubic || pr.cubic->dim() != 2) throw ConfigError("dict needs 2-D cubic bands");
  const OperatorSpec& opspec = *pr.cubic;
  const auto sizing = dictionary_sizing(opspec, cfg);
  Index qsum = 0;
  for (Index q : sizing.q) qsum += q;
  if (sizing.p == 0 || qsum == 0) throw ConfigError("dictionary sizing produced an empty dictionary");

  const CubicOperator<double> op(opspec);
  const auto full = spectrum(op.materialize());
  const auto phi = build_phi(full, sizing.p);
  const auto bands = band_spectra<double>(opspec);
  const auto psi = build_psi(opspec, bands, sizing.q);

  const auto phi_basis = orthonormalize(phi);
  const auto psi_basis = orthonormalize(psi);
  const double cos_theta = subspace_cos_theta(phi_basis, psi_basis);
  const auto gram = gram_stats(psi);
  const auto pseudo = pseudo_eigen_residuals(op, bands, sizing.q);
  const bool psi_smaller = psi_basis.rank <= phi_basis.rank;
  const double residual = psi_smaller ? max_projection_residual(psi, phi_basis)
                                      : max_projection_residual(phi, psi_basis);

  write_dictionary(cfg.out_dir / "phi", phi);
  write_dictionary(cfg.out_dir / "psi", psi);

  std::string params = params_string(pr) + ";p=" + std::to_string(sizing.p) + ";q=";
  for (std::size_t i = 0; i < sizing.q.size(); ++i) params += (i ? "+" : "") + std::to_string(sizing.q[i]);
  params += ";eps=" + format_number(cfg.eps);

  std::vector<ReportRow> rows{
      {"dict", params, "cos_theta", cos_theta, cfg.min_cos, cos_theta >= cfg.min_cos},
      {"dict", params, "max_projection_residual", residual, 1.0 - cfg.min_cos * cfg.min_cos,
       residual <= 1.0 - cfg.min_cos * cfg.min_cos},
      {"dict", params, "psi_max_gram_offdiag_within_band", gram.max_within_band, 1e-9, gram.max_within_band <= 1e-9},
      {"dict", params, "psi_max_gram_cross_band", gram.max_cross_band, 3.0, true},
      {"dict", params, "psi_gram_bound_min_slack", gram.bound.min_slack, -kGramSlackTolerance, gram.bound.holds()},
      {"dict", params, "psi_pseudo_eigen_min_slack", std::isfinite(pseudo.min_slack) ? pseudo.min_slack : 0.0,
       -1e-8, pseudo.holds(1e-8)},
      {"dict", params, "phi_rank", static_cast<double>(phi_basis.rank), static_cast<double>(sizing.p),
       phi_basis.rank == sizing.p},
      {"dict", params, "psi_rank", static_cast<double>(psi_basis.rank), static_cast<double>(qsum), true},
  };
  write_report(cfg, "dict_report", rows);
  sort_rows(rows);
  out << rows_to_csv(rows);
  return all_pass(rows) ? kExitOk : kExitVerificationFailed;
}

int cmd_approx(const RunConfig& cfg, std::ostream& out) {
  check_run_config(cfg);
  const Problem pr = load_problem(cfg);
  if (pr.dims().size() != 2) throw ConfigError("approx needs a 2-D problem");
  const Index mn = pr.cubic ? pr.cubic->size() : pr.pp->size();

  Index p = 0;
  if (cfg.p) {
    p = *cfg.p;
  } else {
    for (std::size_t i = 0; i < pr.band_count(); ++i) {
      const double m = pr.cubic ? pr.cubic->bands().band_measure(i) : measure_pp(pr.pp->bands()[i]);
      p += static_cast<Index>(std::ceil(static_cast<double>(mn) * m * (1.0 + cfg.eps)));
    }
  }
  if (p < 0 || p > mn) throw ConfigError("p = " + std::to_string(p) + " outside [0, MN]");

  const SignalSampler<double> sampler(spectrum(materialize(pr)));
  const auto basis = p == 0 ? SubspaceBasis<double>::empty(pr.dims())
                            : orthonormalize(build_phi(sampler.spectrum(), p));
  const auto res = approx_mse(basis, sampler, cfg.trials, cfg.seed);

  // An exhausted tail is compared absolutely.
  const bool exhausted = std::abs(res.analytic) <= 1e-9;
  const double rel = exhausted ? std::abs(res.empirical - res.analytic)
                               : std::abs(res.empirical - res.analytic) / std::abs(res.analytic);
  const double tol = exhausted ? 1e-9 : cfg.tolerance;
  const std::string params = params_string(pr) + ";p=" + std::to_string(p) + ";trials=" +
                             std::to_string(cfg.trials) + ";seed=" + std::to_string(cfg.seed);
  std::vector<ReportRow> rows{
      {"approx", params, "empirical_mse", res.empirical, res.analytic, true},
      {"approx", params, "analytic_tail", res.analytic, res.analytic, true},
      {"approx", params, exhausted ? "abs_error" : "relative_error", rel, tol, rel <= tol},
  };
  write_report(cfg, "approx_report", rows);
  out << rows_to_csv(rows);
  return all_pass(rows) ? kExitOk : kExitVerificationFailed;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out) {
  check_run_config(opts.run);
  auto rows = run_verify_suite(opts);
  sort_rows(rows);
  write_report(opts.run, "verify_report", rows);
  out << rows_to_csv(rows);
  return all_pass(rows) ? kExitOk : kExitVerificationFailed;
}

int cmd_bands_validate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.band_file.empty()) throw ConfigError("--config <band file> is required");
  const auto doc = load_band_document(cfg.band_file);
  auto violations = validate(doc);
  json report{{"ok", violations.empty()}, {"violations", json::array()}};
  for (const auto& v : violations) {
    report["violations"].push_back({{"kind", v.kind}, {"bands", v.bands}, {"message", v.message}});
  }
  out << report.dump(2) << "\n";
  return violations.empty() ? kExitOk : kExitConfigError;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time- and band-limiting operators for multi-dimensional multiband signals", "mdprolate"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string grid_text;
  std::string format_text = "csv";
  std::string sizing_text = "psi-in-phi";
  std::vector<Index> q_counts;
  Index p_count = -1;
  bool corrupt = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", cfg.band_file, "Band configuration JSON file");
    sub->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--format", format_text, "Report format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--eps", cfg.eps, "Clustering / sizing epsilon")->capture_default_str();
    sub->add_option("--grid", grid_text, "Grid override, e.g. 32x32");
  };

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Eigenvalues of the materialized operator");
  add_common(spectrum_cmd);
  spectrum_cmd->add_flag("--vectors", cfg.vectors, "Also write eigenvectors.csv");

  auto* dict_cmd = app.add_subcommand("dict", "Build phi/psi dictionaries and compare their spans");
  add_common(dict_cmd);
  dict_cmd->add_option("--sizing", sizing_text, "psi-in-phi|phi-in-psi|explicit")
      ->check(CLI::IsMember({"psi-in-phi", "phi-in-psi", "explicit"}))
      ->capture_default_str();
  dict_cmd->add_option("--p", p_count, "Explicit phi size");
  dict_cmd->add_option("--q", q_counts, "Explicit psi sizes, one per band")->delimiter(',');
  dict_cmd->add_option("--min-cos", cfg.min_cos, "Pass threshold for cos(theta)")->capture_default_str();

  auto* approx_cmd = app.add_subcommand("approx", "Signal approximation error vs eigenvalue tail");
  add_common(approx_cmd);
  approx_cmd->add_option("--p", p_count, "Basis size (default: ceil(MN|W_i|(1+eps)) summed)");
  approx_cmd->add_option("--trials", cfg.trials, "Monte-Carlo trials")->capture_default_str();
  approx_cmd->add_option("--tol", cfg.tolerance, "Relative tolerance")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
  add_common(verify_cmd);
  verify_cmd->add_flag("--inject-fault", corrupt, "Corrupt one kernel entry (self-test of the suite)")
      ->group("");

  auto* bands_cmd = app.add_subcommand("bands", "Band configuration utilities");
  bands_cmd->require_subcommand(1);
  auto* validate_cmd = bands_cmd->add_subcommand("validate", "Check a band file");
  validate_cmd->add_option("--config", cfg.band_file, "Band configuration JSON file")->required();

  auto config_error = [&](const std::string& msg) {
    err << json{{"error", "config"}, {"message", msg}}.dump() << "\n";
    return kExitConfigError;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return config_error(e.what());
  }

  try {
    if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    cfg.format = format_text == "json" ? OutputFormat::json : OutputFormat::csv;
    if (sizing_text == "phi-in-psi") cfg.sizing = Sizing::phi_in_psi;
    if (sizing_text == "explicit") cfg.sizing = Sizing::explicit_counts;
    if (p_count >= 0) cfg.p = p_count;
    cfg.q = q_counts;

    if (spectrum_cmd->parsed()) return cmd_spectrum(cfg, out);
    if (dict_cmd->parsed()) return cmd_dict(cfg, out);
    if (approx_cmd->parsed()) return cmd_approx(cfg, out);
    if (verify_cmd->parsed()) {
      VerifyOptions opts{cfg, !cfg.band_file.empty(), corrupt};
      return cmd_verify(opts, out);
    }
    if (validate_cmd->parsed()) return cmd_bands_validate(cfg, out);
  } catch (const ConfigError& e) {
    return config_error(e.what());
  } catch (const NumericalError& e) {
    err << json{{"error", "numerical"}, {"message", e.what()}}.dump() << "\n";
    return kExitVerificationFailed;
  } catch (const std::filesystem::filesystem_error& e) {
    return config_error(e.what());
  }
  return config_error("no subcommand");
}

}  // namespace mdprolate
