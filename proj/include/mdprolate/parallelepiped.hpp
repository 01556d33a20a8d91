#ifndef MDPROLATE_PARALLELEPIPED_HPP_
#define MDPROLATE_PARALLELEPIPED_HPP_

#include <cmath>
#include <string>
#include <utility>

#include "mdprolate/bandspec.hpp"
#include "mdprolate/mdoperator.hpp"
#include "mdprolate/types.hpp"

namespace mdprolate {

class PPOperatorSpec {
 public:
  PPOperatorSpec(SamplingGrid grid, ParallelepipedUnion bands)
      : grid_(std::move(grid)), bands_(std::move(bands)) {
    if (grid_.dim() != 2) throw ConfigError("parallelepipedic operators need a 2-D grid");
  }

  const SamplingGrid& grid() const { return grid_; }
  const ParallelepipedUnion& bands() const { return bands_; }
  Index size() const { return grid_.size(); }
  double measure() const { return measure_pp(bands_); }

 private:
  SamplingGrid grid_;
  ParallelepipedUnion bands_;
};

namespace detail {

// Integral of e^{j 2 pi x u} over u in [-w, w], i.e. 2w sinc(2 pi w x).
template <typename Real>
Real box_transform(Real w, Real x) {
  return Real(2) * w * sinc(Real(2) * kPi<Real> * w * x);
}

}  // namespace detail

/// Covariance between samples (m, n) and (p, q) of a unit-spectrum process on one
/// parallelogram: the integral over the band of e^{j 2 pi ((m-p) f + (n-q) g)}.
///
/// With t = m - p, s = n - q and V = ad - bc this is
///   |V| sin(2 pi W0 (t d - s c)/V) / (pi (t d - s c)) * sin(2 pi W1 (s a - t b)/V) / (pi (s a - t b)),
/// evaluated in the equivalent form (1/|V|) g(W0, (t d - s c)/V) g(W1, (s a - t b)/V) with
/// g(W, x) = 2W sinc(2 pi W x), so both removable singularities take their limits.
template <typename Real = double>
Complex<Real> pp_entry(const ParallelepipedBand& band, Index m, Index n, Index p, Index q) {
  const Real a = static_cast<Real>(band.a);
  const Real b = static_cast<Real>(band.b);
  const Real c = static_cast<Real>(band.c);
  const Real d = static_cast<Real>(band.d);
  const Real v = a * d - b * c;
  const Real t = static_cast<Real>(m - p);
  const Real s = static_cast<Real>(n - q);
  const Real alpha = (t * d - s * c) / v;
  const Real beta = (s * a - t * b) / v;
  const Real mag = detail::box_transform(static_cast<Real>(band.half_widths[0]), alpha) *
                   detail::box_transform(static_cast<Real>(band.half_widths[1]), beta) / std::abs(v);
  const Real phase = Real(2) * kPi<Real> *
                     (static_cast<Real>(band.center[0]) * t + static_cast<Real>(band.center[1]) * s);
  return std::polar(Real(1), phase) * mag;
}

/// Dense MN x MN operator over the union of parallelograms, same vec ordering as the
/// cubic path: row index m + M n.
template <typename Real = double>
DenseCovariance<Real> pp_materialize(const PPOperatorSpec& spec, Index cap = kDefaultDenseCap) {
  detail::check_cap(spec.size(), cap, "pp_materialize");
  const Index rows = spec.grid()[0];
  const Index cols = spec.grid()[1];
  const Index size = rows * cols;

  // The kernel depends only on (m - p, n - q); tabulate it once per offset.
  CMatrix<Real> table = CMatrix<Real>::Zero(2 * rows - 1, 2 * cols - 1);
  for (const auto& band : spec.bands().bands()) {
    for (Index dt = -(rows - 1); dt < rows; ++dt) {
      for (Index ds = -(cols - 1); ds < cols; ++ds) {
        table(dt + rows - 1, ds + cols - 1) += pp_entry<Real>(band, dt, ds, 0, 0);
      }
    }
  }

  DenseCovariance<Real> cov;
  cov.entries.resize(size, size);
  for (Index q = 0; q < cols; ++q) {
    for (Index p = 0; p < rows; ++p) {
      const Index col = p + rows * q;
      for (Index n = 0; n < cols; ++n) {
        for (Index m = 0; m < rows; ++m) {
          cov.entries(m + rows * n, col) = table(m - p + rows - 1, n - q + cols - 1);
        }
      }
    }
  }
  cov.dims = spec.grid().dims();
  cov.measure = spec.measure();
  cov.band_count = spec.bands().size();
  cov.shape = BandShape::parallelepiped;
  return cov;
}

/// Largest |lambda_p - lambda'_p| between the sorted spectra of two specs that differ
/// only in band centers.
template <typename Real = double>
Real pp_center_invariance(const PPOperatorSpec& spec, const PPOperatorSpec& shifted) {
  if (spec.grid().dims() != shifted.grid().dims() || spec.bands().size() != shifted.bands().size()) {
    throw ConfigError("pp_center_invariance: specs differ in grid or band count");
  }
  for (std::size_t i = 0; i < spec.bands().size(); ++i) {
    const auto& x = spec.bands()[i];
    const auto& y = shifted.bands()[i];
    if (x.a != y.a || x.b != y.b || x.c != y.c || x.d != y.d || x.half_widths != y.half_widths) {
      throw ConfigError("pp_center_invariance: band " + std::to_string(i) + " changes shape");
    }
  }
  const auto lhs = spectrum(pp_materialize<Real>(spec), false);
  const auto rhs = spectrum(pp_materialize<Real>(shifted), false);
  return (lhs.eigenvalues - rhs.eigenvalues).cwiseAbs().maxCoeff();
}

}  // namespace mdprolate

#endif  // MDPROLATE_PARALLELEPIPED_HPP_
