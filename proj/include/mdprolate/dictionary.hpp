#ifndef MDPROLATE_DICTIONARY_HPP_
#define MDPROLATE_DICTIONARY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "mdprolate/mdoperator.hpp"
#include "mdprolate/parallel.hpp"
#include "mdprolate/parallelepiped.hpp"
#include "mdprolate/prolate.hpp"
#include "mdprolate/types.hpp"

namespace mdprolate {

enum class AtomSource { phi, psi };

inline const char* to_string(AtomSource s) { return s == AtomSource::phi ? "phi" : "psi"; }

template <typename Real = double>
struct Atom {
  CMatrix<Real> tensor;  // unit Frobenius norm
  AtomSource source = AtomSource::phi;
  std::size_t band = 0;  // subband index (psi only)
  Index rank = 0;        // position in the eigen ordering (phi: p; psi: rank within its band)
  Index l = -1;          // DPSS index along axis 0 (psi only)
  Index k = -1;          // DPSS index along axis 1 (psi only)
  Real eigenvalue = 0;
};

template <typename Real = double>
struct Dictionary {
  std::vector<Atom<Real>> atoms;
  std::vector<Index> dims;

  Index size() const { return static_cast<Index>(atoms.size()); }
  bool empty() const { return atoms.empty(); }

  /// vec(atom) as columns, MN x K.
  CMatrix<Real> stacked() const {
    const Index len = dims.empty() ? 0 : dims[0] * dims[1];
    CMatrix<Real> out(len, size());
    for (Index j = 0; j < size(); ++j) {
      out.col(j) = Eigen::Map<const CVector<Real>>(atoms[static_cast<std::size_t>(j)].tensor.data(), len);
    }
    return out;
  }
};

/// Orthonormal basis (columns, vectorized) of a dictionary's span.
template <typename Real = double>
struct SubspaceBasis {
  CMatrix<Real> basis;
  std::vector<Index> dims;
  Index rank = 0;
  Real tolerance = 0;

  static SubspaceBasis empty(std::vector<Index> dims) {
    SubspaceBasis b;
    b.basis = CMatrix<Real>(dims[0] * dims[1], 0);
    b.dims = std::move(dims);
    return b;
  }
};

/// <A, B> = trace(B^H A).
template <typename Real>
Complex<Real> frobenius_inner(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  return (b.adjoint() * a).trace();
}

/// First p eigen-tensors of a decomposed operator, descending eigenvalue order.
template <typename Real>
Dictionary<Real> build_phi(const SpectrumND<Real>& spec, Index p) {
  if (!spec.has_vectors()) throw ConfigError("build_phi: spectrum was computed without eigenvectors");
  if (p < 0 || p > spec.size()) {
    throw ConfigError("build_phi: p = " + std::to_string(p) + " outside [0, " + std::to_string(spec.size()) + "]");
  }
  Dictionary<Real> d;
  d.dims = spec.dims;
  d.atoms.reserve(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) {
    Atom<Real> a;
    a.tensor = spec.tensor(j);
    a.source = AtomSource::phi;
    a.rank = j;
    a.eigenvalue = spec.eigenvalues(j);
    d.atoms.push_back(std::move(a));
  }
  return d;
}

template <typename Real = double>
Dictionary<Real> build_phi(const OperatorSpec& spec, Index p, Index cap = kDefaultDenseCap) {
  if (spec.dim() != 2) throw ConfigError("build_phi: dictionaries are 2-D");
  if (p < 0 || p > spec.size()) {
    throw ConfigError("build_phi: p = " + std::to_string(p) + " outside [0, " + std::to_string(spec.size()) + "]");
  }
  return build_phi(spectrum(materialize_cubic<Real>(spec, cap)), p);
}

/// One separable decomposition per subband, in band order.
template <typename Real = double>
std::vector<SeparableSpectrum<Real>> band_spectra(const OperatorSpec& spec) {
  if (spec.dim() != 2) throw ConfigError("band_spectra: dictionaries are 2-D");
  std::vector<SeparableSpectrum<Real>> out;
  for (const auto& band : spec.bands().bands()) {
    out.push_back(separable_spectrum<Real>(spec.grid()[0], spec.grid()[1], band));
  }
  return out;
}

/// Modulated-DPSS dictionary: the top q_i separable eigen-tensors of each subband,
/// concatenated in band order.
template <typename Real>
Dictionary<Real> build_psi(const OperatorSpec& spec, const std::vector<SeparableSpectrum<Real>>& bands,
                           const std::vector<Index>& counts) {
  if (counts.size() != bands.size()) {
    throw ConfigError("build_psi: need one count per subband (" + std::to_string(bands.size()) + ")");
  }
  Dictionary<Real> d;
  d.dims = spec.grid().dims();
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (counts[i] < 0 || counts[i] > spec.size()) {
      throw ConfigError("build_psi: q_" + std::to_string(i) + " outside [0, MN]");
    }
    for (Index j = 0; j < counts[i]; ++j) {
      Atom<Real> a;
      a.tensor = bands[i].tensor(j);
      a.source = AtomSource::psi;
      a.band = i;
      a.rank = j;
      a.l = bands[i].pairs[static_cast<std::size_t>(j)].first;
      a.k = bands[i].pairs[static_cast<std::size_t>(j)].second;
      a.eigenvalue = bands[i].eigenvalues(j);
      d.atoms.push_back(std::move(a));
    }
  }
  return d;
}

template <typename Real = double>
Dictionary<Real> build_psi(const OperatorSpec& spec, const std::vector<Index>& counts) {
  return build_psi(spec, band_spectra<Real>(spec), counts);
}

/// Orthonormal basis of span(atoms) from the thin SVD of the stacked atoms;
/// singular values below 1e-10 sigma_max are dropped.
template <typename Real>
SubspaceBasis<Real> orthonormalize(const Dictionary<Real>& d) {
  if (d.empty()) throw ConfigError("orthonormalize: dictionary is empty");
  const CMatrix<Real> a = d.stacked();
  Eigen::BDCSVD<CMatrix<Real>> svd(a, Eigen::ComputeThinU);
  const Vector<Real>& sv = svd.singularValues();
  SubspaceBasis<Real> out;
  out.dims = d.dims;
  out.tolerance = Real(1e-10) * (sv.size() ? sv(0) : Real(0));
  out.rank = 0;
  while (out.rank < sv.size() && sv(out.rank) > out.tolerance) ++out.rank;
  out.basis = svd.matrixU().leftCols(out.rank);
  return out;
}

/// Orthogonal projection of y onto the span.
template <typename Real>
CMatrix<Real> project(const SubspaceBasis<Real>& basis, const CMatrix<Real>& y) {
  if (basis.dims.size() != 2 || y.rows() != basis.dims[0] || y.cols() != basis.dims[1]) {
    throw ConfigError("project: tensor shape does not match the basis grid");
  }
  const Eigen::Map<const CVector<Real>> v(y.data(), y.size());
  const CVector<Real> pv = basis.basis * (basis.basis.adjoint() * v);
  return Eigen::Map<const CMatrix<Real>>(pv.data(), y.rows(), y.cols());
}

/// cos of the angle between two spans: the infimum over the unit sphere of the
/// smaller-rank span of the norm of its projection onto the other span.
template <typename Real>
Real subspace_cos_theta(const SubspaceBasis<Real>& a, const SubspaceBasis<Real>& b) {
  if (a.rank == 0 || b.rank == 0) throw ConfigError("subspace_cos_theta: empty span");
  if (a.basis.rows() != b.basis.rows()) throw ConfigError("subspace_cos_theta: grids differ");
  const auto& small = a.rank <= b.rank ? a : b;
  const auto& large = a.rank <= b.rank ? b : a;
  const CMatrix<Real> cross = small.basis.adjoint() * large.basis;
  Eigen::JacobiSVD<CMatrix<Real>> svd(cross);
  const Real s = svd.singularValues().minCoeff();
  return std::clamp(s, Real(0), Real(1));
}

template <typename Real>
Real subspace_cos_theta(const Dictionary<Real>& a, const Dictionary<Real>& b) {
  if (a.dims != b.dims) throw ConfigError("subspace_cos_theta: dictionaries live on different grids");
  return subspace_cos_theta(orthonormalize(a), orthonormalize(b));
}

/// max_j ||atom_j - P atom_j||_F^2.
template <typename Real>
Real max_projection_residual(const Dictionary<Real>& atoms, const SubspaceBasis<Real>& basis) {
  Real worst = 0;
  for (const auto& a : atoms.atoms) worst = std::max(worst, (a.tensor - project(basis, a.tensor)).squaredNorm());
  return worst;
}

struct GramStats {
  double max_within_band = 0.0;  // largest |<a_i, a_j> - delta_ij| within one subband
  double max_cross_band = 0.0;   // largest |<a_i, a_j>| across subbands
  GramBoundReport bound;         // cross-band 3 sqrt(1 - min lambda) check
};

/// Gram statistics; for psi dictionaries the cross-band bound uses each atom's eigenvalue.
template <typename Real>
GramStats gram_stats(const Dictionary<Real>& d) {
  GramStats g;
  g.bound.min_slack = std::numeric_limits<double>::infinity();
  const CMatrix<Real> a = d.stacked();
  const CMatrix<Real> gram = a.adjoint() * a;
  for (Index i = 0; i < gram.rows(); ++i) {
    for (Index j = 0; j < gram.cols(); ++j) {
      const auto& ai = d.atoms[static_cast<std::size_t>(i)];
      const auto& aj = d.atoms[static_cast<std::size_t>(j)];
      if (ai.band == aj.band) {
        const double target = i == j ? 1.0 : 0.0;
        g.max_within_band = std::max(g.max_within_band, static_cast<double>(std::abs(gram(i, j) - Complex<Real>(target))));
      } else if (i < j) {
        const double value = static_cast<double>(std::abs(gram(i, j)));
        const double lam = static_cast<double>(std::min(ai.eigenvalue, aj.eigenvalue));
        const double bound = 3.0 * std::sqrt(std::max(0.0, 1.0 - lam));
        g.max_cross_band = std::max(g.max_cross_band, value);
        g.bound.max_abs_inner = g.max_cross_band;
        g.bound.min_slack = std::min(g.bound.min_slack, bound - value);
        ++g.bound.pairs;
      }
    }
  }
  if (g.bound.pairs == 0) g.bound.min_slack = 0.0;
  return g;
}

/// ||B(psi) - lambda_l lambda_k psi||_F^2 against 1 - (lambda_l lambda_k)^2 for separable atoms.
struct PseudoEigenReport {
  double max_residual = 0.0;
  double min_slack = std::numeric_limits<double>::infinity();  // bound - residual
  Index atoms = 0;
  bool holds(double tol) const { return atoms == 0 || min_slack >= -tol; }
};

template <typename Real>
PseudoEigenReport pseudo_eigen_residuals(const CubicOperator<Real>& op,
                                         const std::vector<SeparableSpectrum<Real>>& bands,
                                         const std::vector<Index>& counts) {
  PseudoEigenReport r;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& sb = bands[i];
    for (Index j = 0; j < counts[i]; ++j) {
      const auto [l, k] = sb.pairs[static_cast<std::size_t>(j)];
      const CVector<Real> u = sb.left.col(l);
      const CVector<Real> v = sb.right.col(k);
      const Real lam = sb.eigenvalues(j);
      const CMatrix<Real> res = op.apply_outer(u, v) - lam * (u * v.transpose());
      const double resid = static_cast<double>(res.squaredNorm());
      const double bound = 1.0 - static_cast<double>(lam * lam);
      r.max_residual = std::max(r.max_residual, resid);
      r.min_slack = std::min(r.min_slack, bound - resid);
      ++r.atoms;
    }
  }
  return r;
}

/// Draws x = sum_k sqrt(lambda_k) g_k Phi_k with g_k circular complex standard Gaussian.
/// Output is a pure function of the seed.
template <typename Real = double>
class SignalSampler {
 public:
  explicit SignalSampler(SpectrumND<Real> spec) : spec_(std::move(spec)) {
    if (!spec_.has_vectors()) throw ConfigError("SignalSampler: spectrum needs eigenvectors");
    scale_ = spec_.eigenvalues.cwiseMax(Real(0)).cwiseSqrt();
  }

  const SpectrumND<Real>& spectrum() const { return spec_; }

  /// Coefficients g_k for a seed.
  CVector<Real> coefficients(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<Real> normal(Real(0), std::sqrt(Real(0.5)));
    CVector<Real> g(spec_.size());
    for (Index k = 0; k < g.size(); ++k) {
      const Real re = normal(rng);
      const Real im = normal(rng);
      g(k) = Complex<Real>(re, im);
    }
    return g;
  }

  /// vec(x).
  CVector<Real> sample_vec(std::uint64_t seed) const {
    return spec_.eigenvectors * scale_.template cast<Complex<Real>>().cwiseProduct(coefficients(seed));
  }

  CMatrix<Real> sample(std::uint64_t seed) const {
    const CVector<Real> v = sample_vec(seed);
    const Index rows = spec_.dims.front();
    return Eigen::Map<const CMatrix<Real>>(v.data(), rows, v.size() / rows);
  }

 private:
  SpectrumND<Real> spec_;
  Vector<Real> scale_;
};

template <typename Real = double>
CMatrix<Real> sample_signal(const OperatorSpec& spec, std::uint64_t seed) {
  return SignalSampler<Real>(spectrum(materialize_cubic<Real>(spec))).sample(seed);
}

template <typename Real = double>
CMatrix<Real> sample_signal(const PPOperatorSpec& spec, std::uint64_t seed) {
  return SignalSampler<Real>(spectrum(pp_materialize<Real>(spec))).sample(seed);
}

struct ApproxResult {
  double empirical = 0.0;  // mean ||x - P x||_F^2 over trials
  double analytic = 0.0;   // sum_{k >= p} lambda_k
  Index trials = 0;
};

/// Empirical approximation error of a basis against the analytic eigenvalue tail beyond
/// its rank. Trial t uses seed + t; trials run in parallel and are summed in index order.
template <typename Real>
ApproxResult approx_mse(const SubspaceBasis<Real>& basis, const SignalSampler<Real>& sampler,
                        Index trials, std::uint64_t seed) {
  if (trials < 1) throw ConfigError("approx_mse: trials must be at least 1");
  const auto& eig = sampler.spectrum().eigenvalues;
  if (basis.basis.rows() != sampler.spectrum().eigenvectors.rows()) {
    throw ConfigError("approx_mse: basis and sampler live on different grids");
  }
  std::vector<double> errors(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    const CVector<Real> x = sampler.sample_vec(seed + t);
    const CVector<Real> r = x - basis.basis * (basis.basis.adjoint() * x);
    errors[t] = static_cast<double>(r.squaredNorm());
  });
  ApproxResult out;
  out.trials = trials;
  for (double e : errors) out.empirical += e;
  out.empirical /= static_cast<double>(trials);
  for (Index k = basis.rank; k < eig.size(); ++k) out.analytic += static_cast<double>(eig(k));
  return out;
}

}  // namespace mdprolate

#endif  // MDPROLATE_DICTIONARY_HPP_
