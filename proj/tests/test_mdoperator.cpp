#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mdprolate/mdoperator.hpp"
#include "oracle_values.hpp"
#include "test_support.hpp"

using namespace mdprolate;

namespace {

CubicBandUnion two_band() {
  return CubicBandUnion(2, {{{-0.2, -0.15}, {0.1, 0.08}}, {{0.2, 0.2}, {0.08, 0.12}}});
}

CMatrix<double> random_tensor(std::mt19937_64& rng, Index m, Index n) {
  std::normal_distribution<double> normal;
  CMatrix<double> y(m, n);
  for (Index i = 0; i < y.size(); ++i) y(i) = {normal(rng), normal(rng)};
  return y;
}

std::vector<double> read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,eigenvalue");
  std::vector<double> out;
  while (std::getline(in, line)) out.push_back(std::stod(line.substr(line.find(',') + 1)));
  return out;
}

}  // namespace

TEST_CASE("materialized entries follow the first-axis-fastest ordering") {
  // A non-square grid catches a transposed Kronecker product.
  const CubicBand band{{0.1, -0.2}, {0.15, 0.05}};
  const OperatorSpec spec(SamplingGrid({5, 7}), CubicBandUnion(2, {band}));
  const auto cov = materialize_cubic<double>(spec);
  const auto b0 = sinc_kernel<double>(5, 0.1, 0.15);
  const auto b1 = sinc_kernel<double>(7, -0.2, 0.05);
  double worst = 0.0;
  for (Index m = 0; m < 5; ++m) {
    for (Index n = 0; n < 7; ++n) {
      for (Index p = 0; p < 5; ++p) {
        for (Index q = 0; q < 7; ++q) worst = std::max(worst, std::abs(cov.entries(m + 5 * n, p + 5 * q) - b0(m, p) * b1(n, q)));
      }
    }
  }
  CHECK(worst < 1e-15);
  CHECK(cov.dims == std::vector<Index>{5, 7});
  CHECK(cov.band_count == 1);
}

TEST_CASE("functional apply agrees with the dense operator") {
  std::mt19937_64 rng(3);
  const OperatorSpec spec(SamplingGrid({12, 9}), two_band());
  const CubicOperator<double> op(spec);
  const auto cov = op.materialize();
  for (int trial = 0; trial < 20; ++trial) {
    const auto y = random_tensor(rng, 12, 9);
    const CMatrix<double> direct = op.apply(y);
    const CVector<double> dense = cov.entries * Eigen::Map<const CVector<double>>(y.data(), y.size());
    CHECK((Eigen::Map<const CVector<double>>(direct.data(), direct.size()) - dense).norm() <= 1e-10 * dense.norm());
  }
  const auto y = random_tensor(rng, 12, 9);
  CHECK((apply_cubic<double>(spec, y) - op.apply(y)).norm() == 0.0);

  const CVector<double> u = random_tensor(rng, 12, 1);
  const CVector<double> v = random_tensor(rng, 9, 1);
  const CMatrix<double> outer = u * v.transpose();
  CHECK((op.apply_outer(u, v) - op.apply(outer)).norm() < 1e-12);

  CHECK_THROWS_AS(op.apply(CMatrix<double>::Zero(9, 12)), ConfigError);
}

TEST_CASE("one- and three-dimensional operators") {
  const CubicBandUnion two_band_1d(1, {{{-0.10}, {0.05}}, {{0.20}, {0.05}}});
  const auto cov1 = materialize_cubic<double>(OperatorSpec(SamplingGrid({40}), two_band_1d));
  CHECK((cov1.entries - multiband_kernel_1d<double>(40, two_band_1d)).cwiseAbs().maxCoeff() < 1e-15);

  const CubicBandUnion cube(3, {{{0.0, 0.1, -0.1}, {0.2, 0.1, 0.15}}});
  const auto cov3 = materialize_cubic<double>(OperatorSpec(SamplingGrid({4, 3, 5}), cube));
  CHECK(cov3.size() == 60);
  CHECK(std::real(cov3.entries.trace()) == doctest::Approx(60 * measure_cubic(cube)));
  CHECK((cov3.entries - cov3.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::isinf(cubic_gap_bound({4, 3, 5}, 1)));

  const CubicOperator<double> op3(OperatorSpec(SamplingGrid({4, 3, 5}), cube));
  CHECK_THROWS_AS(op3.apply(CMatrix<double>::Zero(4, 3)), ConfigError);

  CHECK_THROWS_AS(OperatorSpec(SamplingGrid({8, 8}), two_band_1d), ConfigError);
  CHECK_THROWS_AS(materialize_cubic<double>(OperatorSpec(SamplingGrid({64, 65}), two_band())), ConfigError);
}

TEST_CASE("two-band 16x16 spectrum matches the dense oracle") {
  const auto cov = materialize_cubic<double>(OperatorSpec(SamplingGrid({16, 16}), two_band()));
  const auto s = spectrum(cov, false);
  const auto expected = read_spectrum_csv(std::string(MDPROLATE_TEST_DATA) + "/two_band_16x16_spectrum.csv");
  REQUIRE(expected.size() == 256);
  double worst = 0.0;
  for (Index j = 0; j < 256; ++j) worst = std::max(worst, std::abs(s.eigenvalues(j) - expected[static_cast<std::size_t>(j)]));
  CHECK(worst < 1e-10);
}

TEST_CASE("small two-band 8x8 spectrum matches the dense oracle") {
  const CubicBandUnion u(2, {{{-0.1, -0.1}, {0.05, 0.05}}, {{0.2, 0.2}, {0.05, 0.05}}});
  const auto s = spectrum(materialize_cubic<double>(OperatorSpec(SamplingGrid({8, 8}), u)), false);
  for (Index j = 0; j < 64; ++j) CHECK(std::abs(s.eigenvalues(j) - oracle::kSmall2DEigenvalues[static_cast<std::size_t>(j)]) < 1e-12);
}

TEST_CASE("single band spectrum is the sorted product of 1-D spectra") {
  const CubicBand band{{0.0, 0.0}, {0.12, 0.2}};
  const auto dense = spectrum(materialize_cubic<double>(OperatorSpec(SamplingGrid({8, 8}), CubicBandUnion(2, {band}))));
  const auto sep = separable_spectrum<double>(8, 8, band);
  CHECK((dense.eigenvalues - sep.eigenvalues).cwiseAbs().maxCoeff() < 1e-9);
  for (Index p = 1; p < sep.size(); ++p) CHECK(sep.eigenvalues(p) <= sep.eigenvalues(p - 1));

  const auto vecs = sep.vectors(64);
  CHECK((vecs.adjoint() * vecs - CMatrix<double>::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("modulated eigen-tensors satisfy the operator eigen-relation") {
  const CubicBand band{{0.2, -0.15}, {0.1, 0.08}};
  const CubicOperator<double> op(OperatorSpec(SamplingGrid({16, 12}), CubicBandUnion(2, {band})));
  const auto sep = separable_spectrum<double>(16, 12, band);
  double worst = 0.0;
  for (Index p = 0; p < sep.size(); ++p) {
    const auto t = sep.tensor(p);
    worst = std::max(worst, (op.apply(t) - sep.eigenvalues(p) * t).norm());
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("trace and gap identities on random cubic configurations") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    const int bands = 1 + trial % 3;
    const OperatorSpec spec(SamplingGrid({12, 10}), testing::random_cubic(rng, 2, bands));
    const auto cov = materialize_cubic<double>(spec);
    CHECK((cov.entries - cov.entries.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    const auto s = spectrum(cov, false);
    CHECK(s.eigenvalues.sum() == doctest::Approx(120 * spec.measure()).epsilon(1e-9));
    CHECK(s.eigenvalues.maxCoeff() <= 1.0 + 1e-10);
    CHECK(s.eigenvalues.minCoeff() >= -1e-10);
    const auto gap = trace_frobenius_gap(cov);
    CHECK(gap.gap == doctest::Approx(spectral_gap(s.eigenvalues)).epsilon(1e-8).scale(1.0));
    CHECK(gap.gap <= gap.bound);
  }
}

TEST_CASE("eigenvectors are deterministic and phase-normalized") {
  const auto cov = materialize_cubic<double>(OperatorSpec(SamplingGrid({8, 8}), two_band()));
  const auto a = spectrum(cov);
  const auto b = spectrum(cov);
  CHECK(a.eigenvectors == b.eigenvectors);
  CHECK(a.tensor(0).rows() == 8);
  for (Index j = 0; j < a.size(); ++j) {
    const auto anchor = testing::phase_anchor(a.eigenvectors.col(j));
    CHECK(anchor.real() > 0.0);
    CHECK(std::abs(anchor.imag()) < 1e-14);
  }
}
