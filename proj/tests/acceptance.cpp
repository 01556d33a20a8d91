// One PASS/FAIL line per acceptance criterion; exit status 0 iff every line passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "mdprolate/config.hpp"
#include "mdprolate/dictionary.hpp"
#include "mdprolate/mdoperator.hpp"
#include "mdprolate/parallelepiped.hpp"
#include "mdprolate/prolate.hpp"
#include "oracle_values.hpp"
#include "quadrature.hpp"
#include "test_support.hpp"

using namespace mdprolate;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

CubicBandUnion two_band() {
  return CubicBandUnion(2, {{{-0.2, -0.15}, {0.1, 0.08}}, {{0.2, 0.2}, {0.08, 0.12}}});
}

ParallelepipedUnion pp_two_band() {
  return ParallelepipedUnion({{1.0, 0.5, 0.0, 1.0, {0.1, 0.08}, {-0.2, -0.15}},
                              {1.0, 0.0, -0.5, 1.0, {0.08, 0.12}, {0.2, 0.2}}});
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome two_band_1d() {
  const auto t0 = Clock::now();
  const CubicBandUnion u(1, {{{-0.10}, {0.05}}, {{0.20}, {0.05}}});
  const auto b = multiband_kernel_1d<double>(256, u);
  const double trace = std::real(b.trace());
  const auto s = hermitian_spectrum(b, false);
  const auto above = static_cast<int>((s.eigenvalues.array() > 0.5).count());
  const auto middle = static_cast<int>(((s.eigenvalues.array() > 0.05) && (s.eigenvalues.array() < 0.95)).count());
  const double elapsed = seconds_since(t0);
  const bool pass = rel(trace, 51.2) <= 1e-9 && rel(s.eigenvalues.sum(), 51.2) <= 1e-9 && std::abs(above - 51) <= 2 &&
                    above == oracle::kTwoBand1dCountAboveHalf && middle == oracle::kTwoBand1dCountTransition && elapsed < 5.0;
  return {pass, "trace=" + fmt("%.12g", trace) + " #{l>0.5}=" + std::to_string(above) +
                    " #(0.05,0.95)=" + std::to_string(middle) + " t=" + fmt("%.2fs", elapsed)};
}

// Shared by criteria 2 and 7.
struct RandomConfigs {
  std::vector<OperatorSpec> cubic;
  std::vector<PPOperatorSpec> pp;
};

const RandomConfigs& random_configs() {
  static const RandomConfigs configs = [] {
    RandomConfigs c;
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 5; ++i) c.cubic.emplace_back(SamplingGrid({32, 32}), testing::random_cubic(rng, 2, 1 + i % 3));
    for (int i = 0; i < 5; ++i) c.pp.emplace_back(SamplingGrid({16, 16}), testing::random_pp(rng, 1 + i % 2));
    return c;
  }();
  return configs;
}

Outcome trace_identities() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& spec : random_configs().cubic) {
    const auto s = spectrum(materialize_cubic<double>(spec), false);
    worst = std::max(worst, rel(s.eigenvalues.sum(), 1024 * spec.measure()));
  }
  for (const auto& spec : random_configs().pp) {
    const auto s = spectrum(pp_materialize<double>(spec), false);
    worst = std::max(worst, rel(s.eigenvalues.sum(), 256 * spec.measure()));
  }
  const double elapsed = seconds_since(t0);
  return {worst <= 1e-9 && elapsed < 60.0,
          "10 configs, max rel error=" + fmt("%.3g", worst) + " t=" + fmt("%.1fs", elapsed)};
}

Outcome kronecker() {
  const CubicBand band{{0.0, 0.0}, {0.1, 0.15}};
  const OperatorSpec spec(SamplingGrid({8, 8}), CubicBandUnion(2, {band}));
  const CubicOperator<double> op(spec);
  const auto cov = op.materialize();
  const auto dense = spectrum(cov, false);
  const auto sep = separable_spectrum<double>(8, 8, band);
  const double eig_dev = (dense.eigenvalues - sep.eigenvalues).cwiseAbs().maxCoeff();

  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  double apply_dev = 0.0;
  for (int t = 0; t < 20; ++t) {
    CMatrix<double> y(8, 8);
    for (Index i = 0; i < y.size(); ++i) y(i) = {normal(rng), normal(rng)};
    const CMatrix<double> direct = apply_cubic<double>(spec, y);
    const CVector<double> dense_apply = cov.entries * Eigen::Map<const CVector<double>>(y.data(), y.size());
    apply_dev = std::max(apply_dev,
                         (Eigen::Map<const CVector<double>>(direct.data(), direct.size()) - dense_apply).cwiseAbs().maxCoeff());
  }
  return {eig_dev <= 1e-9 && apply_dev <= 1e-10,
          "eigenvalue dev=" + fmt("%.3g", eig_dev) + " apply dev=" + fmt("%.3g", apply_dev)};
}

Outcome modulation() {
  const auto base = hermitian_spectrum(sinc_kernel<double>(64, 0.0, 0.05), false);
  const auto pass = hermitian_spectrum(sinc_kernel<double>(64, 0.2, 0.05), false);
  const double dev = (base.eigenvalues - pass.eigenvalues).cwiseAbs().maxCoeff();

  const CubicBand band{{0.2, -0.15}, {0.1, 0.08}};
  const CubicOperator<double> op(OperatorSpec(SamplingGrid({16, 16}), CubicBandUnion(2, {band})));
  const auto sep = separable_spectrum<double>(16, 16, band);
  double resid = 0.0;
  for (Index p = 0; p < sep.size(); ++p) {
    const auto t = sep.tensor(p);
    resid = std::max(resid, (op.apply(t) - sep.eigenvalues(p) * t).norm());
  }
  return {dev <= 1e-9 && resid <= 1e-9, "spectrum dev=" + fmt("%.3g", dev) + " eigen-tensor residual=" + fmt("%.3g", resid)};
}

Outcome quadrature() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<Index> index(0, 15);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = testing::random_pp(rng, 1 + trial % 2);
    const auto& band = u[static_cast<std::size_t>(trial) % u.size()];
    const Index m = index(rng), n = index(rng), p = index(rng), q = index(rng);
    const auto ref = testing::pp_quadrature(band, static_cast<double>(m - p), static_cast<double>(n - q));
    worst = std::max(worst, std::abs(pp_entry<double>(band, m, n, p, q) - ref));
  }

  double reduction = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto cubic = testing::random_cubic(rng, 2, 1 + trial % 3);
    std::vector<ParallelepipedBand> boxes;
    for (const auto& b : cubic.bands()) {
      boxes.push_back({1.0, 0.0, 0.0, 1.0, {b.half_widths[0], b.half_widths[1]}, {b.center[0], b.center[1]}});
    }
    const auto lhs = materialize_cubic<double>(OperatorSpec(SamplingGrid({12, 12}), cubic));
    const auto rhs = pp_materialize<double>(PPOperatorSpec(SamplingGrid({12, 12}), ParallelepipedUnion(boxes)));
    reduction = std::max(reduction, (lhs.entries - rhs.entries).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-8 && reduction <= 1e-12,
          "50 entries, max |closed form - quadrature|=" + fmt("%.3g", worst) + " identity reduction=" + fmt("%.3g", reduction)};
}

Outcome center_shift() {
  const PPOperatorSpec spec(SamplingGrid({16, 16}), pp_two_band());
  double worst = 0.0;
  for (const auto shift : {std::array<double, 2>{0.05, -0.05}, std::array<double, 2>{-0.02, 0.1}}) {
    const PPOperatorSpec shifted(SamplingGrid({16, 16}), shift_centers(pp_two_band(), shift));
    worst = std::max(worst, pp_center_invariance<double>(spec, shifted));
  }
  return {worst <= 1e-9, "max sorted-eigenvalue deviation=" + fmt("%.3g", worst)};
}

Outcome gap_inequality() {
  double min_slack = std::numeric_limits<double>::infinity();
  double identity = 0.0;
  for (const auto& spec : random_configs().cubic) {
    const auto cov = materialize_cubic<double>(spec);
    const double gap = trace_minus_frobenius(cov.entries);
    min_slack = std::min(min_slack, cubic_gap_bound(cov.dims, cov.band_count) - gap);
    identity = std::max(identity, std::abs(gap - spectral_gap(spectrum(cov, false).eigenvalues)));
  }
  for (const auto& spec : random_configs().pp) {
    const auto cov = pp_materialize<double>(spec);
    identity = std::max(identity, std::abs(trace_minus_frobenius(cov.entries) - spectral_gap(spectrum(cov, false).eigenvalues)));
  }
  return {min_slack >= 0.0 && identity <= 1e-8,
          "min bound slack=" + fmt("%.4g", min_slack) + " max |sum l(1-l) - gap|=" + fmt("%.3g", identity)};
}

Outcome psi_bounds() {
  // 128 x 128: separable atoms, every check through 1-D factors.
  const OperatorSpec big(SamplingGrid({128, 128}), two_band());
  RunConfig cfg;
  cfg.eps = 0.2;
  const auto sz = dictionary_sizing(big, cfg);
  const auto bands = band_spectra<double>(big);
  const auto pe = pseudo_eigen_residuals(CubicOperator<double>(big), bands, sz.q);

  // <u1 v1^T, u2 v2^T> = (u2^H u1)(v2^H v1).
  const CMatrix<double> left = bands[1].left.adjoint() * bands[0].left;
  const CMatrix<double> right = bands[1].right.adjoint() * bands[0].right;
  double cross_slack = std::numeric_limits<double>::infinity();
  Index pairs = 0;
  for (Index i = 0; i < sz.q[0]; ++i) {
    const auto [l0, k0] = bands[0].pairs[static_cast<std::size_t>(i)];
    for (Index j = 0; j < sz.q[1]; ++j) {
      const auto [l1, k1] = bands[1].pairs[static_cast<std::size_t>(j)];
      const double value = std::abs(left(l1, l0) * right(k1, k0));
      const double lam = std::min(bands[0].eigenvalues(i), bands[1].eigenvalues(j));
      cross_slack = std::min(cross_slack, 3.0 * std::sqrt(std::max(0.0, 1.0 - lam)) - value);
      ++pairs;
    }
  }

  // 32 x 32: the built dictionary's own Gram matrix.
  const OperatorSpec small(SamplingGrid({32, 32}), two_band());
  const auto psi = build_psi<double>(small, dictionary_sizing(small, cfg).q);
  const auto g = gram_stats(psi);

  const bool pass = pe.holds(1e-8) && cross_slack >= -kGramSlackTolerance && g.bound.holds() && g.max_within_band <= 1e-9;
  return {pass, "128x128: " + std::to_string(pe.atoms) + " atoms, min residual slack=" + fmt("%.3g", pe.min_slack) +
                    ", " + std::to_string(pairs) + " cross pairs, min slack=" + fmt("%.3g", cross_slack) +
                    "; 32x32 Gram min slack=" + fmt("%.3g", g.bound.min_slack)};
}

Outcome both_sizings() {
  const auto t0 = Clock::now();
  const OperatorSpec spec(SamplingGrid({32, 32}), two_band());
  const auto full = spectrum(materialize_cubic<double>(spec));
  const auto bands = band_spectra<double>(spec);
  std::string detail;
  bool pass = true;
  for (const auto sizing : {Sizing::psi_in_phi, Sizing::phi_in_psi}) {
    RunConfig cfg;
    cfg.eps = 0.2;
    cfg.sizing = sizing;
    const auto sz = dictionary_sizing(spec, cfg);
    const double c = subspace_cos_theta(build_phi(full, sz.p), build_psi(spec, bands, sz.q));
    const double pinned = sizing == Sizing::psi_in_phi ? oracle::kPsiInPhiCosTheta : oracle::kPhiInPsiCosTheta;
    pass = pass && c >= 0.95 && std::abs(c - pinned) <= 1e-6;
    detail += std::string(sizing == Sizing::psi_in_phi ? "psi-in-phi" : " phi-in-psi") + " p=" + std::to_string(sz.p) + " cos=" + fmt("%.10f", c);
  }
  const double elapsed = seconds_since(t0);
  return {pass && elapsed < 120.0, detail + " t=" + fmt("%.1fs", elapsed)};
}

Outcome monte_carlo() {
  const OperatorSpec small(SamplingGrid({8, 8}), CubicBandUnion(2, {{{-0.1, -0.1}, {0.05, 0.05}}, {{0.2, 0.2}, {0.05, 0.05}}}));
  const auto cov = materialize_cubic<double>(small);
  const SignalSampler<double> sampler(spectrum(cov));
  CMatrix<double> acc = CMatrix<double>::Zero(64, 64);
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) {
    const CVector<double> v = sampler.sample_vec(static_cast<std::uint64_t>(t));
    acc.noalias() += v * v.adjoint();
  }
  acc /= static_cast<double>(draws);
  const double cov_err = (acc - cov.entries).norm() / cov.entries.norm();

  const OperatorSpec mid(SamplingGrid({16, 16}), two_band());
  const SignalSampler<double> mid_sampler(spectrum(materialize_cubic<double>(mid)));
  const auto p = static_cast<Index>(std::ceil(256 * mid.measure()));
  const auto res = approx_mse(orthonormalize(build_phi(mid_sampler.spectrum(), p)), mid_sampler, 2000, 0);
  const double mse_err = rel(res.empirical, res.analytic);
  return {cov_err <= 0.1 && mse_err <= 0.1,
          "covariance rel err=" + fmt("%.4f", cov_err) + " mse empirical=" + fmt("%.5g", res.empirical) +
              " analytic=" + fmt("%.5g", res.analytic)};
}

Outcome transition_scaling() {
  const std::array<Index, 3> sizes{16, 32, 64};
  const std::array<int, 3> pinned_cubic{oracle::kCubicTransition16, oracle::kCubicTransition32, oracle::kCubicTransition64};
  const std::array<int, 3> pinned_pp{oracle::kPPTransition16, oracle::kPPTransition32, oracle::kPPTransition64};
  std::array<double, 3> cubic{};
  std::array<double, 3> pp{};
  std::string detail = "counts cubic/pp:";
  bool pinned = true;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const Index n = sizes[i];
    const double norm = 2.0 * static_cast<double>(n) * std::log(static_cast<double>(n));
    const auto cs = spectrum(materialize_cubic<double>(OperatorSpec(SamplingGrid({n, n}), two_band())), false);
    const auto ps = spectrum(pp_materialize<double>(PPOperatorSpec(SamplingGrid({n, n}), pp_two_band())), false);
    const auto cc = transition_count(cs.eigenvalues, 0.05);
    const auto pc = transition_count(ps.eigenvalues, 0.05);
    pinned = pinned && cc == pinned_cubic[i] && pc == pinned_pp[i];
    cubic[i] = static_cast<double>(cc) / norm;
    pp[i] = static_cast<double>(pc) / norm;
    detail += " " + std::to_string(n) + ":" + std::to_string(cc) + "/" + std::to_string(pc);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < sizes.size(); ++i) monotone = monotone && cubic[i] <= 1.25 * cubic[i - 1] && pp[i] <= 1.25 * pp[i - 1];
  detail += " normalized cubic " + fmt("%.3f", cubic[0]) + fmt("->%.3f", cubic[1]) + fmt("->%.3f", cubic[2]) +
            " pp " + fmt("%.3f", pp[0]) + fmt("->%.3f", pp[1]) + fmt("->%.3f", pp[2]);
  return {monotone && pinned, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 two-band 1-D spectrum (N=256)", two_band_1d},
      {"2 trace identities on random configs", trace_identities},
      {"3 Kronecker / separable consistency", kronecker},
      {"4 modulation invariance", modulation},
      {"5 parallelogram kernel vs quadrature", quadrature},
      {"6 center-shift eigenvalue invariance", center_shift},
      {"7 trace - Frobenius bound and gap identity", gap_inequality},
      {"8 psi pseudo-eigen and cross-band Gram bounds", psi_bounds},
      {"9 phi/psi subspace angle, both sizings", both_sizings},
      {"10 Monte-Carlo covariance and approximation error", monte_carlo},
      {"11 transition-width scaling", transition_scaling},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o{false, ""};
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
