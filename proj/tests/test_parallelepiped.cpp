#include <doctest.h>

#include <random>

#include "mdprolate/parallelepiped.hpp"
#include "quadrature.hpp"
#include "test_support.hpp"

using namespace mdprolate;

namespace {

ParallelepipedUnion two_band() {
  return ParallelepipedUnion({{1.0, 0.5, 0.0, 1.0, {0.1, 0.08}, {-0.2, -0.15}},
                              {1.0, 0.0, -0.5, 1.0, {0.08, 0.12}, {0.2, 0.2}}});
}

}  // namespace

TEST_CASE("kernel entry matches direct quadrature over the parallelogram") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<Index> index(0, 15);
  double worst = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto u = testing::random_pp(rng, 1 + trial % 2);
    const auto& band = u[0];
    const Index m = index(rng), n = index(rng), p = index(rng), q = index(rng);
    const auto exact = pp_entry<double>(band, m, n, p, q);
    const auto ref = testing::pp_quadrature(band, static_cast<double>(m - p), static_cast<double>(n - q));
    worst = std::max(worst, std::abs(exact - ref));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("kernel entry at zero offset is the band area") {
  const ParallelepipedBand b{1.0, 0.5, -0.3, 1.2, {0.07, 0.05}, {0.1, -0.1}};
  CHECK(std::abs(pp_entry<double>(b, 3, 4, 3, 4) - Complex<double>(measure_pp(b))) < 1e-15);
  // Hermitian in the index pair.
  CHECK(std::abs(pp_entry<double>(b, 1, 5, 4, 2) - std::conj(pp_entry<double>(b, 4, 2, 1, 5))) < 1e-15);
}

TEST_CASE("identity transform reduces to the cubic kernel") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    const auto cubic = testing::random_cubic(rng, 2, 1 + trial % 2);
    std::vector<ParallelepipedBand> boxes;
    for (const auto& b : cubic.bands()) {
      boxes.push_back({1.0, 0.0, 0.0, 1.0, {b.half_widths[0], b.half_widths[1]}, {b.center[0], b.center[1]}});
    }
    const auto lhs = materialize_cubic<double>(OperatorSpec(SamplingGrid({9, 7}), cubic));
    const auto rhs = pp_materialize<double>(PPOperatorSpec(SamplingGrid({9, 7}), ParallelepipedUnion(boxes)));
    CHECK((lhs.entries - rhs.entries).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("materialized operator is Hermitian with the expected trace") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    const PPOperatorSpec spec(SamplingGrid({10, 12}), testing::random_pp(rng, 1 + trial % 2));
    const auto cov = pp_materialize<double>(spec);
    CHECK(cov.shape == BandShape::parallelepiped);
    CHECK((cov.entries - cov.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    const auto s = spectrum(cov, false);
    CHECK(s.eigenvalues.sum() == doctest::Approx(120 * spec.measure()).epsilon(1e-9));
    CHECK(s.eigenvalues.maxCoeff() <= 1.0 + 1e-10);
    CHECK(s.eigenvalues.minCoeff() >= -1e-10);
    const auto gap = trace_frobenius_gap(cov);
    CHECK(std::isinf(gap.bound));
    CHECK(gap.gap == doctest::Approx(spectral_gap(s.eigenvalues)).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("spectrum does not depend on the band centers") {
  const PPOperatorSpec spec(SamplingGrid({16, 16}), two_band());
  const PPOperatorSpec shifted(SamplingGrid({16, 16}), shift_centers(two_band(), {0.05, -0.05}));
  CHECK(pp_center_invariance<double>(spec, shifted) <= 1e-9);

  auto bands = two_band().bands();
  bands[0].half_widths[0] = 0.05;
  const PPOperatorSpec reshaped(SamplingGrid({16, 16}), ParallelepipedUnion(bands));
  CHECK_THROWS_AS(pp_center_invariance<double>(spec, reshaped), ConfigError);
}

TEST_CASE("parallelogram operators need a 2-D grid within the dense cap") {
  CHECK_THROWS_AS(PPOperatorSpec(SamplingGrid({16}), two_band()), ConfigError);
  CHECK_THROWS_AS(pp_materialize<double>(PPOperatorSpec(SamplingGrid({16, 16}), two_band()), 100), ConfigError);
}
