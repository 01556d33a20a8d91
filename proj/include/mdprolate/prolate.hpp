#ifndef MDPROLATE_PROLATE_HPP_
#define MDPROLATE_PROLATE_HPP_

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "mdprolate/bandspec.hpp"
#include "mdprolate/spectral.hpp"
#include "mdprolate/types.hpp"

namespace mdprolate {

namespace detail {

/// sin(x)/x, with the limit value 1 for |x| < 1e-8.
template <typename Real>
Real sinc(Real x) {
  return std::abs(x) < Real(1e-8) ? Real(1) : std::sin(x) / x;
}

/// Toeplitz generator of one modulated sinc band, offsets k = 0 .. n-1:
/// e^{j 2 pi fc k} sin(2 pi W k) / (pi k), value 2W at k = 0.
template <typename Real>
CVector<Real> sinc_generator(Index n, Real fc, Real w) {
  CVector<Real> g(n);
  g(0) = Complex<Real>(Real(2) * w, Real(0));
  for (Index k = 1; k < n; ++k) {
    const Real kr = static_cast<Real>(k);
    const Real mag = std::sin(Real(2) * kPi<Real> * w * kr) / (kPi<Real> * kr);
    g(k) = std::polar(Real(1), Real(2) * kPi<Real> * fc * kr) * mag;
  }
  return g;
}

template <typename Real>
void accumulate_toeplitz(CMatrix<Real>& out, const CVector<Real>& g) {
  const Index n = out.rows();
  for (Index col = 0; col < n; ++col) {
    out(col, col) += g(0);
    for (Index row = col + 1; row < n; ++row) {
      out(row, col) += g(row - col);
      out(col, row) += std::conj(g(row - col));
    }
  }
}

template <typename Real>
void check_band_1d(Real fc, Real w, const char* what) {
  if (!(w > Real(0)) || !(w <= Real(0.5)) || !std::isfinite(fc) ||
      std::abs(fc) + w > Real(0.5) + Real(kTouchTolerance)) {
    std::ostringstream os;
    os << what << ": band (fc=" << fc << ", W=" << w << ") is outside [-1/2, 1/2]";
    throw ConfigError(os.str());
  }
}

}  // namespace detail

/// Covariance of n samples of a unit-spectrum process on [fc - W, fc + W]:
/// entry(m, n) = e^{j 2 pi fc (m-n)} sin(2 pi W (m-n)) / (pi (m-n)).
/// Exactly Hermitian by construction.
template <typename Real = double>
CMatrix<Real> sinc_kernel(Index n, Real fc, Real w) {
  if (n < 1) throw ConfigError("sinc_kernel: size must be positive");
  detail::check_band_1d(fc, w, "sinc_kernel");
  CMatrix<Real> out = CMatrix<Real>::Zero(n, n);
  detail::accumulate_toeplitz(out, detail::sinc_generator(n, fc, w));
  return out;
}

/// Sum of modulated sinc kernels, one per interval of a 1-D band union.
template <typename Real = double>
CMatrix<Real> multiband_kernel_1d(Index n, const CubicBandUnion& u) {
  if (u.dim() != 1) throw ConfigError("multiband_kernel_1d: band union must be 1-D");
  if (n < 1) throw ConfigError("multiband_kernel_1d: size must be positive");
  CMatrix<Real> out = CMatrix<Real>::Zero(n, n);
  for (const auto& band : u.bands()) {
    const auto fc = static_cast<Real>(band.center[0]);
    const auto w = static_cast<Real>(band.half_widths[0]);
    detail::accumulate_toeplitz(out, detail::sinc_generator(n, fc, w));
  }
  return out;
}

/// Discrete prolate spheroidal sequences: full descending eigendecomposition of the
/// baseband sinc kernel. Columns follow the largest-entry-real-positive convention.
template <typename Real = double>
Spectrum<Real> dpss(Index n, Real w) {
  detail::check_band_1d(Real(0), w, "dpss");
  std::ostringstream ctx;
  ctx << "dpss(n=" << n << ", W=" << w << ")";
  return hermitian_spectrum(sinc_kernel<Real>(n, Real(0), w), true, ctx.str());
}

/// Multiplies v entrywise by e^{j 2 pi fc m}, m = 0 .. n-1.
template <typename Derived>
auto modulate(const Eigen::MatrixBase<Derived>& v, typename Derived::RealScalar fc) {
  using Real = typename Derived::RealScalar;
  CVector<Real> out(v.size());
  for (Index m = 0; m < v.size(); ++m) {
    out(m) = std::polar(Real(1), Real(2) * kPi<Real> * fc * static_cast<Real>(m)) *
             Complex<Real>(v(m));
  }
  return out;
}

/// Diagonal of the modulation operator E_fc.
template <typename Real = double>
CVector<Real> modulation_diagonal(Index n, Real fc) {
  return modulate(CVector<Real>::Ones(n), fc);
}

/// trace(B) - ||B||_F^2, i.e. sum lambda (1 - lambda) computed without a decomposition.
template <typename Derived>
auto trace_minus_frobenius(const Eigen::MatrixBase<Derived>& b) {
  return std::real(b.trace()) - b.squaredNorm();
}

/// (4 n J / pi^2)(3 + ln n): upper bound on trace - ||B||_F^2 for a J-band 1-D kernel.
inline double multiband_gap_bound_1d(Index n, std::size_t bands) {
  const double nn = static_cast<double>(n);
  return 4.0 * nn * static_cast<double>(bands) / (kPi<double> * kPi<double>) * (3.0 + std::log(nn));
}

// Inner products of unit vectors carry rounding of a few ulps; slack below this counts as zero.
inline constexpr double kGramSlackTolerance = 1e-12;

/// Worst case of the cross-band DPSS correlation bound
/// |<s1, s2>| <= 3 sqrt(1 - min(lambda1, lambda2)) over the leading columns of two bands.
struct GramBoundReport {
  double max_abs_inner = 0.0;
  double min_slack = 0.0;  // min over pairs of bound - |<s1, s2>|; negative means violated
  Index pairs = 0;
  bool holds(double tol = kGramSlackTolerance) const { return min_slack >= -tol; }
};

/// Columns of `first`/`second` are the leading DPSS vectors of two different bands
/// (already modulated), with their eigenvalues.
template <typename Real>
GramBoundReport gram_bound(const CMatrix<Real>& first, const Vector<Real>& first_eigs,
                           const CMatrix<Real>& second, const Vector<Real>& second_eigs) {
  GramBoundReport r;
  r.min_slack = std::numeric_limits<double>::infinity();
  const CMatrix<Real> inner = first.adjoint() * second;
  for (Index i = 0; i < inner.rows(); ++i) {
    for (Index j = 0; j < inner.cols(); ++j) {
      const double lam = static_cast<double>(std::min(first_eigs(i), second_eigs(j)));
      const double bound = 3.0 * std::sqrt(std::max(0.0, 1.0 - lam));
      const double value = static_cast<double>(std::abs(inner(i, j)));
      r.max_abs_inner = std::max(r.max_abs_inner, value);
      r.min_slack = std::min(r.min_slack, bound - value);
      ++r.pairs;
    }
  }
  if (r.pairs == 0) r.min_slack = 0.0;
  return r;
}

}  // namespace mdprolate

#endif  // MDPROLATE_PROLATE_HPP_
