#ifndef MDPROLATE_SPECTRAL_HPP_
#define MDPROLATE_SPECTRAL_HPP_

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mdprolate/types.hpp"

namespace mdprolate {

/// Descending eigenvalues and (optionally) matching unit eigenvectors as columns.
template <typename Real>
struct Spectrum {
  Vector<Real> eigenvalues;
  CMatrix<Real> eigenvectors;  // empty when computed values-only

  Index size() const { return eigenvalues.size(); }
  bool has_vectors() const { return eigenvectors.cols() == eigenvalues.size() && size() > 0; }
};

/// (A + A^H) / 2.
template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  return ((a + a.adjoint()) * Scalar(0.5)).eval();
}

/// Scales every column so that its largest-magnitude entry is real and positive.
/// Among entries within a relative 1e-9 of the largest, the first one wins.
template <typename Real>
void normalize_phase(CMatrix<Real>& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    auto col = vectors.col(j);
    const Real peak = col.cwiseAbs().maxCoeff();
    if (peak == Real(0)) continue;
    Index pivot = 0;
    while (std::abs(col(pivot)) < peak * (Real(1) - Real(1e-9))) ++pivot;
    const Complex<Real> z = col(pivot);
    col *= std::conj(z) / std::abs(z);
  }
}

/// Dense Hermitian eigendecomposition, eigenvalues descending.
/// Ties keep the solver's output order (stable sort).
template <typename Real>
Spectrum<Real> hermitian_spectrum(const CMatrix<Real>& a, bool with_vectors = true,
                                  const std::string& context = "hermitian operator") {
  if (a.rows() != a.cols()) throw NumericalError(context + ": matrix is not square");
  const CMatrix<Real> h = hermitian_part(a);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(
      h, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(context + ": eigensolver did not converge");
  }
  const Vector<Real>& values = solver.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return values(i) > values(j); });

  Spectrum<Real> out;
  out.eigenvalues.resize(values.size());
  for (Index k = 0; k < values.size(); ++k) out.eigenvalues(k) = values(order[static_cast<std::size_t>(k)]);
  if (with_vectors) {
    const auto& vecs = solver.eigenvectors();
    out.eigenvectors.resize(vecs.rows(), vecs.cols());
    for (Index k = 0; k < values.size(); ++k) {
      out.eigenvectors.col(k) = vecs.col(order[static_cast<std::size_t>(k)]);
    }
    normalize_phase(out.eigenvectors);
  }
  return out;
}

/// Counts of eigenvalues near one (> 1-eps), in the transition band [eps, 1-eps],
/// and near zero (< eps).
struct ClusterCounts {
  Index near_one = 0;
  Index middle = 0;
  Index near_zero = 0;
};

template <typename Real>
ClusterCounts cluster_counts(std::span<const Real> eigs, Real eps) {
  if (!(eps > Real(0) && eps < Real(0.5))) throw ConfigError("eps must lie in (0, 1/2)");
  ClusterCounts c;
  for (Real x : eigs) {
    if (x > Real(1) - eps) {
      ++c.near_one;
    } else if (x < eps) {
      ++c.near_zero;
    } else {
      ++c.middle;
    }
  }
  return c;
}

template <typename Real>
ClusterCounts cluster_counts(const Vector<Real>& eigs, Real eps) {
  return cluster_counts(std::span<const Real>(eigs.data(), static_cast<std::size_t>(eigs.size())), eps);
}

/// #{p : eps <= lambda_p <= 1 - eps}.
template <typename Real>
Index transition_count(const Vector<Real>& eigs, Real eps) {
  return cluster_counts(eigs, eps).middle;
}

/// Sum of lambda (1 - lambda) over a spectrum.
template <typename Real>
Real spectral_gap(const Vector<Real>& eigs) {
  return (eigs.array() * (Real(1) - eigs.array())).sum();
}

}  // namespace mdprolate

#endif  // MDPROLATE_SPECTRAL_HPP_
