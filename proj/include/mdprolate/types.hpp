#ifndef MDPROLATE_TYPES_HPP_
#define MDPROLATE_TYPES_HPP_

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace mdprolate {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
inline constexpr Real kPi = std::numbers::pi_v<Real>;

// Largest operator (product of grid dims) that may be materialized densely.
inline constexpr Index kDefaultDenseCap = 4096;

/// Bad input: band geometry, grid shape, sizing rule, file contents.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed or a checked identity was violated.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mdprolate

#endif  // MDPROLATE_TYPES_HPP_
