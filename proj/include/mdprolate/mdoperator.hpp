#ifndef MDPROLATE_MDOPERATOR_HPP_
#define MDPROLATE_MDOPERATOR_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "mdprolate/bandspec.hpp"
#include "mdprolate/prolate.hpp"
#include "mdprolate/spectral.hpp"
#include "mdprolate/types.hpp"

namespace mdprolate {

/// Sampling grid plus cubic band union of the same dimension (1 <= d <= 3).
class OperatorSpec {
 public:
  OperatorSpec(SamplingGrid grid, CubicBandUnion bands)
      : grid_(std::move(grid)), bands_(std::move(bands)) {
    if (grid_.dim() != bands_.dim()) {
      throw ConfigError("grid has " + std::to_string(grid_.dim()) + " axes but bands have " +
                        std::to_string(bands_.dim()));
    }
    if (grid_.dim() > 3) throw ConfigError("cubic operators support at most 3 axes");
  }

  const SamplingGrid& grid() const { return grid_; }
  const CubicBandUnion& bands() const { return bands_; }
  int dim() const { return grid_.dim(); }
  Index size() const { return grid_.size(); }
  double measure() const { return measure_cubic(bands_); }

 private:
  SamplingGrid grid_;
  CubicBandUnion bands_;
};

enum class BandShape { cubic, parallelepiped };

/// Materialized operator on vec(Y), first axis fastest: vec(u v^T) = v (x) u.
template <typename Real = double>
struct DenseCovariance {
  CMatrix<Real> entries;
  std::vector<Index> dims;
  double measure = 0.0;       // Lebesgue measure of the band union
  std::size_t band_count = 0;  // J
  BandShape shape = BandShape::cubic;

  Index size() const { return entries.rows(); }
};

/// Eigenvalues with eigenvectors reshaped to tensors over the grid.
template <typename Real = double>
struct SpectrumND {
  Vector<Real> eigenvalues;
  CMatrix<Real> eigenvectors;  // columns are vec(tensor); empty when values-only
  std::vector<Index> dims;

  Index size() const { return eigenvalues.size(); }
  bool has_vectors() const { return eigenvectors.cols() > 0; }

  /// p-th eigen-tensor as an M x N matrix (2-D) or a column (1-D).
  CMatrix<Real> tensor(Index p) const {
    const Index rows = dims.empty() ? eigenvectors.rows() : dims.front();
    return Eigen::Map<const CMatrix<Real>>(eigenvectors.col(p).data(), rows,
                                           eigenvectors.rows() / rows);
  }
};

namespace detail {

inline void check_cap(Index size, Index cap, const char* what) {
  if (size > cap) {
    throw ConfigError(std::string(what) + ": operator size " + std::to_string(size) +
                      " exceeds the dense cap " + std::to_string(cap) +
                      "; use the functional apply path instead");
  }
}

}  // namespace detail

/// The cubic time- and band-limiting operator with its per-band, per-axis sinc factors.
template <typename Real = double>
class CubicOperator {
 public:
  explicit CubicOperator(OperatorSpec spec) : spec_(std::move(spec)) {
    const auto& bands = spec_.bands();
    factors_.resize(bands.size());
    for (std::size_t i = 0; i < bands.size(); ++i) {
      for (int j = 0; j < spec_.dim(); ++j) {
        const auto ju = static_cast<std::size_t>(j);
        factors_[i].push_back(sinc_kernel<Real>(spec_.grid()[j], static_cast<Real>(bands[i].center[ju]),
                                                static_cast<Real>(bands[i].half_widths[ju])));
      }
    }
  }

  const OperatorSpec& spec() const { return spec_; }
  const CMatrix<Real>& factor(std::size_t band, int axis) const {
    return factors_[band][static_cast<std::size_t>(axis)];
  }

  /// sum_i B0_i Y B1_i^T (plain transpose).
  CMatrix<Real> apply(const CMatrix<Real>& y) const {
    require_2d("apply_cubic");
    if (y.rows() != spec_.grid()[0] || y.cols() != spec_.grid()[1]) {
      throw ConfigError("apply_cubic: input is " + std::to_string(y.rows()) + "x" +
                        std::to_string(y.cols()) + ", grid is " + std::to_string(spec_.grid()[0]) +
                        "x" + std::to_string(spec_.grid()[1]));
    }
    CMatrix<Real> out = CMatrix<Real>::Zero(y.rows(), y.cols());
    for (const auto& f : factors_) out.noalias() += f[0] * y * f[1].transpose();
    return out;
  }

  /// Operator applied to the rank-one tensor u v^T, without forming a dense product chain.
  CMatrix<Real> apply_outer(const CVector<Real>& u, const CVector<Real>& v) const {
    require_2d("apply_outer");
    CMatrix<Real> out = CMatrix<Real>::Zero(u.size(), v.size());
    for (const auto& f : factors_) {
      const CVector<Real> left = f[0] * u;
      const CVector<Real> right = f[1] * v;
      out.noalias() += left * right.transpose();
    }
    return out;
  }

  /// sum_i B_{d-1,i} (x) ... (x) B_{0,i}.
  DenseCovariance<Real> materialize(Index cap = kDefaultDenseCap) const {
    detail::check_cap(spec_.size(), cap, "materialize_cubic");
    DenseCovariance<Real> cov;
    cov.entries = CMatrix<Real>::Zero(spec_.size(), spec_.size());
    for (const auto& f : factors_) {
      CMatrix<Real> term = f[0];
      for (std::size_t j = 1; j < f.size(); ++j) {
        CMatrix<Real> next = Eigen::kroneckerProduct(f[j], term);
        term.swap(next);
      }
      cov.entries += term;
    }
    cov.dims = spec_.grid().dims();
    cov.measure = spec_.measure();
    cov.band_count = spec_.bands().size();
    cov.shape = BandShape::cubic;
    return cov;
  }

 private:
  void require_2d(const char* what) const {
    if (spec_.dim() != 2) throw ConfigError(std::string(what) + " needs a 2-D operator");
  }

  OperatorSpec spec_;
  std::vector<std::vector<CMatrix<Real>>> factors_;  // [band][axis]
};

template <typename Real = double>
CMatrix<Real> apply_cubic(const OperatorSpec& spec, const CMatrix<Real>& y) {
  return CubicOperator<Real>(spec).apply(y);
}

template <typename Real = double>
DenseCovariance<Real> materialize_cubic(const OperatorSpec& spec, Index cap = kDefaultDenseCap) {
  return CubicOperator<Real>(spec).materialize(cap);
}

/// Dense Hermitian eigendecomposition; eigenvectors keep the vec ordering of `cov`.
template <typename Real>
SpectrumND<Real> spectrum(const DenseCovariance<Real>& cov, bool with_vectors = true) {
  auto s = hermitian_spectrum(cov.entries, with_vectors, "operator spectrum");
  SpectrumND<Real> out;
  out.eigenvalues = std::move(s.eigenvalues);
  out.eigenvectors = std::move(s.eigenvectors);
  out.dims = cov.dims;
  return out;
}

/// Closed-form spectrum of a single cubic 2-D band from two 1-D DPSS decompositions:
/// eigenvalues lambda_l lambda_k, eigen-tensors E s_l (E s_k)^T. Nothing MN x MN is formed.
template <typename Real = double>
struct SeparableSpectrum {
  Vector<Real> eigenvalues;                 // descending products, length M N
  std::vector<std::pair<Index, Index>> pairs;  // (l, k) for each eigenvalue
  CMatrix<Real> left;                       // modulated DPSS along axis 0, M x M
  CMatrix<Real> right;                      // modulated DPSS along axis 1, N x N
  Vector<Real> left_eigs;
  Vector<Real> right_eigs;

  Index size() const { return eigenvalues.size(); }

  CMatrix<Real> tensor(Index p) const {
    const auto [l, k] = pairs[static_cast<std::size_t>(p)];
    return left.col(l) * right.col(k).transpose();
  }

  /// vec of the first `count` eigen-tensors as columns.
  CMatrix<Real> vectors(Index count) const {
    CMatrix<Real> out(left.rows() * right.rows(), count);
    for (Index p = 0; p < count; ++p) {
      const auto [l, k] = pairs[static_cast<std::size_t>(p)];
      out.col(p) = Eigen::kroneckerProduct(right.col(k), left.col(l));
    }
    return out;
  }
};

template <typename Real = double>
SeparableSpectrum<Real> separable_spectrum(Index m, Index n, const CubicBand& band) {
  if (band.center.size() != 2 || band.half_widths.size() != 2) {
    throw ConfigError("separable_spectrum: band must be 2-D");
  }
  // validates containment in [-1/2, 1/2]^2
  const CubicBandUnion single(2, {band});
  (void)single;
  const auto s0 = dpss<Real>(m, static_cast<Real>(band.half_widths[0]));
  const auto s1 = dpss<Real>(n, static_cast<Real>(band.half_widths[1]));

  SeparableSpectrum<Real> out;
  out.left_eigs = s0.eigenvalues;
  out.right_eigs = s1.eigenvalues;
  out.left.resize(m, m);
  out.right.resize(n, n);
  for (Index l = 0; l < m; ++l) out.left.col(l) = modulate(s0.eigenvectors.col(l), static_cast<Real>(band.center[0]));
  for (Index k = 0; k < n; ++k) out.right.col(k) = modulate(s1.eigenvectors.col(k), static_cast<Real>(band.center[1]));

  out.pairs.reserve(static_cast<std::size_t>(m * n));
  for (Index l = 0; l < m; ++l) {
    for (Index k = 0; k < n; ++k) out.pairs.emplace_back(l, k);
  }
  // Lexicographic (l, k) order survives the stable sort for equal products.
  std::stable_sort(out.pairs.begin(), out.pairs.end(), [&](const auto& x, const auto& y) {
    return s0.eigenvalues(x.first) * s1.eigenvalues(x.second) >
           s0.eigenvalues(y.first) * s1.eigenvalues(y.second);
  });
  out.eigenvalues.resize(m * n);
  for (Index p = 0; p < m * n; ++p) {
    const auto [l, k] = out.pairs[static_cast<std::size_t>(p)];
    out.eigenvalues(p) = s0.eigenvalues(l) * s1.eigenvalues(k);
  }
  return out;
}

/// (4 M J / pi^2)(3 + ln N) + (4 N J / pi^2)(3 + ln M) for 2-D grids; the 1-D bound for d = 1.
/// No bound is known for d = 3 (returns +inf).
inline double cubic_gap_bound(const std::vector<Index>& dims, std::size_t bands) {
  const double jj = static_cast<double>(bands);
  const double pi2 = kPi<double> * kPi<double>;
  if (dims.size() == 1) return multiband_gap_bound_1d(dims[0], bands);
  if (dims.size() == 2) {
    const double m = static_cast<double>(dims[0]);
    const double n = static_cast<double>(dims[1]);
    return 4.0 * m * jj / pi2 * (3.0 + std::log(n)) + 4.0 * n * jj / pi2 * (3.0 + std::log(m));
  }
  return std::numeric_limits<double>::infinity();
}

struct GapReport {
  double trace = 0.0;
  double frob_sq = 0.0;
  double gap = 0.0;    // trace - frob_sq = sum lambda (1 - lambda)
  double bound = 0.0;  // +inf when no bound applies
};

/// trace, ||cov||_F^2 and their difference. For cubic operators the gap is checked
/// against cubic_gap_bound; a violation throws NumericalError.
template <typename Real>
GapReport trace_frobenius_gap(const DenseCovariance<Real>& cov) {
  GapReport r;
  r.trace = static_cast<double>(std::real(cov.entries.trace()));
  r.frob_sq = static_cast<double>(cov.entries.squaredNorm());
  r.gap = r.trace - r.frob_sq;
  r.bound = cov.shape == BandShape::cubic ? cubic_gap_bound(cov.dims, cov.band_count)
                                          : std::numeric_limits<double>::infinity();
  if (!(r.gap <= r.bound)) {
    throw NumericalError("trace - ||B||_F^2 = " + std::to_string(r.gap) + " exceeds its bound " +
                         std::to_string(r.bound));
  }
  return r;
}

}  // namespace mdprolate

#endif  // MDPROLATE_MDOPERATOR_HPP_
