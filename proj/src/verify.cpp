// Invariant suite behind `mdprolate verify`.

#include <cmath>
#include <functional>
#include <random>

#include "mdprolate/commands.hpp"
#include "mdprolate/dictionary.hpp"
#include "mdprolate/mdoperator.hpp"
#include "mdprolate/parallel.hpp"
#include "mdprolate/parallelepiped.hpp"
#include "mdprolate/prolate.hpp"

namespace mdprolate {

namespace {

using Rows = std::vector<ReportRow>;

constexpr double kRangeSlack = 1e-10;

void le(Rows& rows, const std::string& exp, const std::string& params, const std::string& metric,
        double value, double bound) {
  rows.push_back({exp, params, metric, value, bound, value <= bound});
}

void ge(Rows& rows, const std::string& exp, const std::string& params, const std::string& metric,
        double value, double bound) {
  rows.push_back({exp, params, metric, value, bound, value >= bound});
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

CubicBandUnion two_band_1d() { return CubicBandUnion(1, {{{-0.10}, {0.05}}, {{0.20}, {0.05}}}); }

CubicBandUnion two_band_union() {
  return CubicBandUnion(2, {{{-0.2, -0.15}, {0.1, 0.08}}, {{0.2, 0.2}, {0.08, 0.12}}});
}

CubicBandUnion small_union() {
  return CubicBandUnion(2, {{{-0.1, -0.1}, {0.05, 0.05}}, {{0.2, 0.2}, {0.05, 0.05}}});
}

ParallelepipedUnion pp_two_band() {
  return ParallelepipedUnion({{1.0, 0.5, 0.0, 1.0, {0.1, 0.08}, {-0.2, -0.15}},
                              {1.0, 0.0, -0.5, 1.0, {0.08, 0.12}, {0.2, 0.2}}});
}

// Shared by the default operators and a user-supplied --config problem.
Rows operator_checks(const std::string& exp, const std::string& params, DenseCovariance<double> cov,
                     bool corrupt) {
  Rows rows;
  if (corrupt) cov.entries(0, cov.size() - 1) += Complex<double>(0.25, 0.0);
  const double hermitian_defect = (cov.entries - cov.entries.adjoint()).cwiseAbs().maxCoeff();
  le(rows, exp, params, "hermitian_defect", hermitian_defect, 1e-12);

  const auto spec = spectrum(cov, false);
  const double expected_trace = static_cast<double>(cov.size()) * cov.measure;
  le(rows, exp, params, "trace_rel_error", rel_diff(spec.eigenvalues.sum(), expected_trace), 1e-9);
  le(rows, exp, params, "max_eigenvalue", spec.eigenvalues.maxCoeff(), 1.0 + kRangeSlack);
  ge(rows, exp, params, "min_eigenvalue", spec.eigenvalues.minCoeff(), -kRangeSlack);

  const double trace = std::real(cov.entries.trace());
  const double gap = trace - cov.entries.squaredNorm();
  le(rows, exp, params, "gap_identity_error", std::abs(gap - spectral_gap(spec.eigenvalues)), 1e-8);
  const double bound = cov.shape == BandShape::cubic ? cubic_gap_bound(cov.dims, cov.band_count)
                                                      : std::numeric_limits<double>::infinity();
  if (std::isfinite(bound)) le(rows, exp, params, "trace_minus_frobenius", gap, bound);
  return rows;
}

Rows bandspec_checks() {
  Rows rows;
  const std::string exp = "bandspec";
  le(rows, exp, "two_band_1d", "measure_error", std::abs(measure_cubic(two_band_1d()) - 0.2), 1e-15);
  const CubicBandUnion a(2, {{{-0.2, -0.15}, {0.1, 0.08}}});
  const CubicBandUnion b(2, {{{0.2, 0.2}, {0.08, 0.12}}});
  le(rows, exp, "two_band", "additivity_error",
     std::abs(measure_cubic(two_band_union()) - measure_cubic(a) - measure_cubic(b)), 1e-15);
  const ParallelepipedBand identity{1, 0, 0, 1, {0.1, 0.08}, {-0.2, -0.15}};
  le(rows, exp, "identity_pp", "pp_vs_cubic_measure_error", std::abs(measure_pp(identity) - measure_cubic(a)), 1e-15);
  const std::vector<CubicBand> dup{{{0.1}, {0.05}}, {{0.1}, {0.05}}};
  const auto v = validate(1, dup);
  rows.push_back({exp, "duplicate_bands", "overlap_detected", static_cast<double>(v.size()), 1.0,
                  v.size() == 1 && v[0].kind == "overlap"});
  return rows;
}

Rows prolate_checks(bool corrupt) {
  Rows rows;
  const std::string exp = "prolate";
  const auto kernel = multiband_kernel_1d<double>(256, two_band_1d());
  DenseCovariance<double> cov{kernel, {256}, 0.2, 2, BandShape::cubic};
  auto op_rows = operator_checks("prolate.two_band_1d", "N=256;J=2", cov, corrupt);
  rows.insert(rows.end(), op_rows.begin(), op_rows.end());

  const auto base = hermitian_spectrum(sinc_kernel<double>(64, 0.0, 0.05), false);
  const auto pass = hermitian_spectrum(sinc_kernel<double>(64, 0.2, 0.05), false);
  le(rows, exp, "N=64;fc=0.2;W=0.05", "bandpass_spectrum_deviation",
     (base.eigenvalues - pass.eigenvalues).cwiseAbs().maxCoeff(), 1e-9);

  const auto s = dpss<double>(128, 0.1);
  const CMatrix<double> gram = s.eigenvectors.adjoint() * s.eigenvectors;
  le(rows, exp, "N=128;W=0.1", "dpss_orthonormality_error",
     (gram - CMatrix<double>::Identity(128, 128)).cwiseAbs().maxCoeff(), 1e-9);
  le(rows, exp, "N=128;W=0.1", "dpss_trace_rel_error", rel_diff(s.eigenvalues.sum(), 2.0 * 128 * 0.1), 1e-9);

  // Cross-band correlation of the leading DPSS vectors of two modulated bands.
  const double eps = 0.2;
  const Index n = 128;
  const auto s1 = dpss<double>(n, 0.05);
  const Index k0 = static_cast<Index>(std::floor(2.0 * n * 0.05 * (1 - eps)));
  const Index k1 = static_cast<Index>(std::floor(2.0 * n * 0.05 * (1 - eps)));
  CMatrix<double> first(n, k0);
  CMatrix<double> second(n, k1);
  for (Index j = 0; j < k0; ++j) first.col(j) = modulate(s1.eigenvectors.col(j), -0.10);
  for (Index j = 0; j < k1; ++j) second.col(j) = modulate(s1.eigenvectors.col(j), 0.20);
  const auto g = gram_bound(first, Vector<double>(s1.eigenvalues.head(k0)), second,
                            Vector<double>(s1.eigenvalues.head(k1)));
  ge(rows, exp, "N=128;two_band_1d;eps=0.2", "gram_bound_min_slack", g.min_slack, -kGramSlackTolerance);
  return rows;
}

Rows mdoperator_checks(bool corrupt) {
  Rows rows;
  const OperatorSpec spec(SamplingGrid({16, 16}), two_band_union());
  const CubicOperator<double> op(spec);
  auto cov = op.materialize();
  auto op_rows = operator_checks("mdoperator.two_band", "grid=16x16;J=2", cov, corrupt);
  rows.insert(rows.end(), op_rows.begin(), op_rows.end());

  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    CMatrix<double> y(16, 16);
    for (Index i = 0; i < y.size(); ++i) y(i) = {normal(rng), normal(rng)};
    const CMatrix<double> direct = op.apply(y);
    const CVector<double> viaDense = cov.entries * Eigen::Map<const CVector<double>>(y.data(), y.size());
    worst = std::max(worst, (Eigen::Map<const CVector<double>>(direct.data(), direct.size()) - viaDense).norm() /
                                direct.norm());
  }
  le(rows, "mdoperator", "grid=16x16;J=2", "apply_vs_materialize_rel_error", worst, 1e-10);

  const CubicBand band{{0.0, 0.0}, {0.1, 0.15}};
  const OperatorSpec single(SamplingGrid({8, 8}), CubicBandUnion(2, {band}));
  const auto dense = spectrum(materialize_cubic<double>(single), false);
  const auto sep = separable_spectrum<double>(8, 8, band);
  le(rows, "mdoperator", "grid=8x8;J=1", "separable_vs_dense_max_deviation",
     (dense.eigenvalues - sep.eigenvalues).cwiseAbs().maxCoeff(), 1e-9);
  return rows;
}

Rows parallelepiped_checks(bool corrupt) {
  Rows rows;
  const PPOperatorSpec spec(SamplingGrid({16, 16}), pp_two_band());
  auto op_rows = operator_checks("parallelepiped.two_band", "grid=16x16;J=2", pp_materialize<double>(spec), corrupt);
  rows.insert(rows.end(), op_rows.begin(), op_rows.end());

  const PPOperatorSpec shifted(SamplingGrid({16, 16}), shift_centers(pp_two_band(), {0.05, -0.05}));
  le(rows, "parallelepiped", "grid=16x16;shift=(0.05,-0.05)", "center_invariance_max_deviation",
     pp_center_invariance<double>(spec, shifted), 1e-9);

  const CubicBand box{{-0.2, -0.15}, {0.1, 0.08}};
  const ParallelepipedBand same{1, 0, 0, 1, {0.1, 0.08}, {-0.2, -0.15}};
  const auto cubic = materialize_cubic<double>(OperatorSpec(SamplingGrid({8, 8}), CubicBandUnion(2, {box})));
  const auto pp = pp_materialize<double>(PPOperatorSpec(SamplingGrid({8, 8}), ParallelepipedUnion({same})));
  le(rows, "parallelepiped", "grid=8x8;identity_transform", "cubic_reduction_max_error",
     (cubic.entries - pp.entries).cwiseAbs().maxCoeff(), 1e-12);
  return rows;
}

Rows dictionary_checks(std::uint64_t seed) {
  Rows rows;
  const std::string exp = "dictionary";
  const OperatorSpec spec(SamplingGrid({32, 32}), two_band_union());
  const CubicOperator<double> op(spec);
  const auto full = spectrum(op.materialize());
  const auto bands = band_spectra<double>(spec);

  for (const auto sizing : {Sizing::psi_in_phi, Sizing::phi_in_psi}) {
    RunConfig cfg;
    cfg.eps = 0.2;
    cfg.sizing = sizing;
    const auto sz = dictionary_sizing(spec, cfg);
    const auto phi = build_phi(full, sz.p);
    const auto psi = build_psi(spec, bands, sz.q);
    const std::string params = std::string("grid=32x32;eps=0.2;sizing=") + (sizing == Sizing::psi_in_phi ? "psi-in-phi" : "phi-in-psi");
    ge(rows, exp, params, "cos_theta", subspace_cos_theta(phi, psi), 0.95);
    const auto g = gram_stats(psi);
    le(rows, exp, params, "psi_within_band_gram_error", g.max_within_band, 1e-9);
    ge(rows, exp, params, "psi_gram_bound_min_slack", g.bound.min_slack, -kGramSlackTolerance);
    const auto pe = pseudo_eigen_residuals(op, bands, sz.q);
    ge(rows, exp, params, "psi_pseudo_eigen_min_slack", pe.min_slack, -1e-8);
  }

  // Projection is idempotent and self-adjoint.
  const auto basis = orthonormalize(build_phi(full, 40));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CMatrix<double> x(32, 32);
  CMatrix<double> y(32, 32);
  for (Index i = 0; i < x.size(); ++i) {
    x(i) = {normal(rng), normal(rng)};
    y(i) = {normal(rng), normal(rng)};
  }
  const CMatrix<double> px = project(basis, x);
  le(rows, exp, "grid=32x32;p=40", "projection_idempotence_error", (project(basis, px) - px).norm(), 1e-10);
  le(rows, exp, "grid=32x32;p=40", "projection_self_adjoint_error",
     std::abs(frobenius_inner(px, y) - frobenius_inner(x, project(basis, y))), 1e-10);

  // Monte-Carlo covariance of the sampler.
  const OperatorSpec small(SamplingGrid({8, 8}), small_union());
  const auto cov = materialize_cubic<double>(small);
  const SignalSampler<double> sampler(spectrum(cov));
  const int draws = 10000;
  CMatrix<double> acc = CMatrix<double>::Zero(64, 64);
  for (int t = 0; t < draws; ++t) {
    const CVector<double> v = sampler.sample_vec(seed + static_cast<std::uint64_t>(t));
    acc.noalias() += v * v.adjoint();
  }
  acc /= static_cast<double>(draws);
  le(rows, exp, "grid=8x8;draws=10000", "sample_covariance_rel_error",
     (acc - cov.entries).norm() / cov.entries.norm(), 0.1);

  // Approximation error against the analytic tail.
  const OperatorSpec mid(SamplingGrid({16, 16}), two_band_union());
  const SignalSampler<double> mid_sampler(spectrum(materialize_cubic<double>(mid)));
  const auto p = static_cast<Index>(std::ceil(256 * mid.measure() * 1.2));
  const auto res = approx_mse(orthonormalize(build_phi(mid_sampler.spectrum(), p)), mid_sampler, 2000, seed);
  le(rows, exp, "grid=16x16;p=" + std::to_string(p) + ";trials=2000", "approx_mse_rel_error",
     rel_diff(res.empirical, res.analytic), 0.1);
  return rows;
}

}  // namespace

std::vector<ReportRow> run_verify_suite(const VerifyOptions& opts) {
  std::vector<std::function<Rows()>> jobs{
      [] { return bandspec_checks(); },
      [&] { return prolate_checks(opts.corrupt_kernel); },
      [&] { return mdoperator_checks(opts.corrupt_kernel); },
      [&] { return parallelepiped_checks(opts.corrupt_kernel); },
      [&] { return dictionary_checks(opts.run.seed); },
  };
  std::optional<Problem> user;
  if (opts.use_config) {
    user = load_problem(opts.run);
    if (user->cubic && user->cubic->size() > kDefaultDenseCap) {
      throw ConfigError("verify: configured grid exceeds the dense cap");
    }
    jobs.push_back([&] {
      const auto cov = user->pp ? pp_materialize<double>(*user->pp) : materialize_cubic<double>(*user->cubic);
      std::string dims;
      for (std::size_t j = 0; j < user->dims().size(); ++j) dims += (j ? "x" : "") + std::to_string(user->dims()[j]);
      return operator_checks("config", "grid=" + dims + ";J=" + std::to_string(user->band_count()), cov,
                             opts.corrupt_kernel);
    });
  }
  std::vector<Rows> results(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { results[i] = jobs[i](); });
  Rows rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

}  // namespace mdprolate
