#ifndef MDPROLATE_BANDSPEC_HPP_
#define MDPROLATE_BANDSPEC_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mdprolate/types.hpp"

namespace mdprolate {

/// Axis-aligned frequency box: center +/- half_widths on every axis.
/// Units are cycles/sample unless stated otherwise.
struct CubicBand {
  std::vector<double> center;
  std::vector<double> half_widths;
};

/// Parallelogram {(f,g) : |a f + b g| <= W0, |c f + d g| <= W1}, shifted by center.
struct ParallelepipedBand {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;
  std::array<double, 2> half_widths{};
  std::array<double, 2> center{};

  double det() const { return a * d - b * c; }

  /// Corner points in (f, g), counter-clockwise when det() > 0.
  std::array<std::array<double, 2>, 4> vertices() const;
};

/// One broken invariant. `bands` holds the offending indices in input order.
struct Violation {
  std::string kind;  // "dimension", "half_width", "range", "overlap", "determinant", "non_finite"
  std::vector<std::size_t> bands;
  std::string message;
};

inline constexpr double kTouchTolerance = 1e-12;
inline constexpr double kMinDeterminant = 1e-12;

std::vector<Violation> validate(int dim, std::span<const CubicBand> bands);
std::vector<Violation> validate(std::span<const ParallelepipedBand> bands);

/// Human-readable one-line-per-violation report.
std::string format_violations(std::span<const Violation> violations);

/// Validated union of disjoint cubic bands inside [-1/2, 1/2]^d.
class CubicBandUnion {
 public:
  /// Throws ConfigError carrying the violation report when invalid.
  CubicBandUnion(int dim, std::vector<CubicBand> bands);

  int dim() const { return dim_; }
  std::size_t size() const { return bands_.size(); }
  const std::vector<CubicBand>& bands() const { return bands_; }
  const CubicBand& operator[](std::size_t i) const { return bands_[i]; }

  /// Lebesgue measure of band i alone.
  double band_measure(std::size_t i) const;

 private:
  int dim_;
  std::vector<CubicBand> bands_;
};

/// Validated union of disjoint parallelepipedic bands inside [-1/2, 1/2]^2.
class ParallelepipedUnion {
 public:
  explicit ParallelepipedUnion(std::vector<ParallelepipedBand> bands);

  std::size_t size() const { return bands_.size(); }
  const std::vector<ParallelepipedBand>& bands() const { return bands_; }
  const ParallelepipedBand& operator[](std::size_t i) const { return bands_[i]; }

 private:
  std::vector<ParallelepipedBand> bands_;
};

/// Samples per axis, first axis first: (M, N) in 2-D.
class SamplingGrid {
 public:
  explicit SamplingGrid(std::vector<Index> dims);

  int dim() const { return static_cast<int>(dims_.size()); }
  Index operator[](int axis) const { return dims_[static_cast<std::size_t>(axis)]; }
  const std::vector<Index>& dims() const { return dims_; }
  Index size() const;

 private:
  std::vector<Index> dims_;
};

double measure_cubic(const CubicBandUnion& u);
double measure_pp(const ParallelepipedBand& b);
double measure_pp(const ParallelepipedUnion& u);

/// Maps analog bands (Hz) to normalized frequency with sampling intervals ts (seconds).
/// Throws ConfigError naming the band and axis when Nyquist is violated.
CubicBandUnion scale_analog(int dim, std::span<const CubicBand> analog, std::span<const double> ts);

/// Copy of u with every center moved by shift. Throws ConfigError if the result is invalid.
ParallelepipedUnion shift_centers(const ParallelepipedUnion& u, std::array<double, 2> shift);

}  // namespace mdprolate

#endif  // MDPROLATE_BANDSPEC_HPP_
