#include "mdprolate/bandspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mdprolate {

namespace {

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

std::string join_indices(std::span<const std::size_t> idx) {
  std::ostringstream os;
  for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k];
  return os.str();
}

using Point = std::array<double, 2>;
using Quad = std::array<Point, 4>;

// Projection extent of a quad onto an axis.
std::pair<double, double> project(const Quad& q, const Point& axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : q) {
    const double s = p[0] * axis[0] + p[1] * axis[1];
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

// Separating-axis test over the edge normals of both quads. Shared boundaries count as disjoint.
bool quads_overlap(const Quad& p, const Quad& q) {
  for (const Quad* shape : {&p, &q}) {
    for (int e = 0; e < 4; ++e) {
      const Point& v0 = (*shape)[e];
      const Point& v1 = (*shape)[(e + 1) % 4];
      Point normal{-(v1[1] - v0[1]), v1[0] - v0[0]};
      const double len = std::hypot(normal[0], normal[1]);
      if (len == 0.0) continue;
      normal = {normal[0] / len, normal[1] / len};
      const auto [plo, phi] = project(p, normal);
      const auto [qlo, qhi] = project(q, normal);
      if (phi <= qlo + kTouchTolerance || qhi <= plo + kTouchTolerance) return false;
    }
  }
  return true;
}

}  // namespace

std::array<std::array<double, 2>, 4> ParallelepipedBand::vertices() const {
  const double v = det();
  const double w0 = half_widths[0];
  const double w1 = half_widths[1];
  // (u, v) = (a f + b g, c f + d g); invert the 2x2 map for each corner of the (u, v) box.
  const std::array<std::array<double, 2>, 4> uv{{{-w0, -w1}, {w0, -w1}, {w0, w1}, {-w0, w1}}};
  std::array<std::array<double, 2>, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) {
    const double uu = uv[k][0];
    const double vv = uv[k][1];
    out[k] = {(d * uu - b * vv) / v + center[0], (-c * uu + a * vv) / v + center[1]};
  }
  return out;
}

std::vector<Violation> validate(int dim, std::span<const CubicBand> bands) {
  std::vector<Violation> out;
  if (dim < 1) {
    out.push_back({"dimension", {}, "dimension must be positive, got " + std::to_string(dim)});
    return out;
  }
  if (bands.empty()) {
    out.push_back({"empty", {}, "band list is empty"});
    return out;
  }
  std::vector<bool> usable(bands.size(), true);
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    if (b.center.size() != static_cast<std::size_t>(dim) ||
        b.half_widths.size() != static_cast<std::size_t>(dim)) {
      out.push_back({"dimension", {i}, "band " + std::to_string(i) + " does not have " +
                                          std::to_string(dim) + " center/half-width entries"});
      usable[i] = false;
      continue;
    }
    if (!all_finite(b.center) || !all_finite(b.half_widths)) {
      out.push_back({"non_finite", {i}, "band " + std::to_string(i) + " has a non-finite value"});
      usable[i] = false;
      continue;
    }
    for (int j = 0; j < dim; ++j) {
      const double c = b.center[static_cast<std::size_t>(j)];
      const double w = b.half_widths[static_cast<std::size_t>(j)];
      if (!(w > 0.0)) {
        out.push_back({"half_width", {i},
                       "band " + std::to_string(i) + " axis " + std::to_string(j) +
                           ": half-width must be positive"});
        usable[i] = false;
      } else if (std::abs(c) + w > 0.5 + kTouchTolerance) {
        out.push_back({"range", {i},
                       "band " + std::to_string(i) + " axis " + std::to_string(j) +
                           ": |center| + half-width exceeds 1/2"});
      }
    }
  }
  for (std::size_t i = 0; i < bands.size(); ++i) {
    for (std::size_t k = i + 1; k < bands.size(); ++k) {
      if (!usable[i] || !usable[k]) continue;
      bool overlap = true;
      for (int j = 0; j < dim && overlap; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const double lo = std::max(bands[i].center[ju] - bands[i].half_widths[ju],
                                   bands[k].center[ju] - bands[k].half_widths[ju]);
        const double hi = std::min(bands[i].center[ju] + bands[i].half_widths[ju],
                                   bands[k].center[ju] + bands[k].half_widths[ju]);
        overlap = hi - lo > kTouchTolerance;
      }
      if (overlap) {
        out.push_back({"overlap", {i, k},
                       "bands " + std::to_string(i) + " and " + std::to_string(k) + " overlap"});
      }
    }
  }
  return out;
}

std::vector<Violation> validate(std::span<const ParallelepipedBand> bands) {
  std::vector<Violation> out;
  if (bands.empty()) {
    out.push_back({"empty", {}, "band list is empty"});
    return out;
  }
  std::vector<bool> usable(bands.size(), true);
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    const std::array<double, 8> vals{b.a, b.b, b.c, b.d, b.half_widths[0], b.half_widths[1],
                                     b.center[0], b.center[1]};
    if (!all_finite(vals)) {
      out.push_back({"non_finite", {i}, "band " + std::to_string(i) + " has a non-finite value"});
      usable[i] = false;
      continue;
    }
    if (std::abs(b.det()) < kMinDeterminant) {
      out.push_back({"determinant", {i},
                     "band " + std::to_string(i) + ": transform is singular (|ad - bc| < 1e-12)"});
      usable[i] = false;
      continue;
    }
    if (!(b.half_widths[0] > 0.0) || !(b.half_widths[1] > 0.0)) {
      out.push_back({"half_width", {i}, "band " + std::to_string(i) + ": half-widths must be positive"});
      usable[i] = false;
      continue;
    }
    for (const auto& v : b.vertices()) {
      if (std::abs(v[0]) > 0.5 + kTouchTolerance || std::abs(v[1]) > 0.5 + kTouchTolerance) {
        out.push_back({"range", {i}, "band " + std::to_string(i) + " leaves [-1/2, 1/2]^2"});
        break;
      }
    }
  }
  for (std::size_t i = 0; i < bands.size(); ++i) {
    for (std::size_t k = i + 1; k < bands.size(); ++k) {
      if (!usable[i] || !usable[k]) continue;
      if (quads_overlap(bands[i].vertices(), bands[k].vertices())) {
        out.push_back({"overlap", {i, k},
                       "bands " + std::to_string(i) + " and " + std::to_string(k) + " overlap"});
      }
    }
  }
  return out;
}

std::string format_violations(std::span<const Violation> violations) {
  std::ostringstream os;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    const auto& v = violations[k];
    os << (k ? "\n" : "") << v.kind;
    if (!v.bands.empty()) os << " [" << join_indices(v.bands) << "]";
    os << ": " << v.message;
  }
  return os.str();
}

CubicBandUnion::CubicBandUnion(int dim, std::vector<CubicBand> bands)
    : dim_(dim), bands_(std::move(bands)) {
  const auto violations = validate(dim_, bands_);
  if (!violations.empty()) throw ConfigError(format_violations(violations));
}

double CubicBandUnion::band_measure(std::size_t i) const {
  double m = 1.0;
  for (double w : bands_[i].half_widths) m *= 2.0 * w;
  return m;
}

ParallelepipedUnion::ParallelepipedUnion(std::vector<ParallelepipedBand> bands)
    : bands_(std::move(bands)) {
  const auto violations = validate(bands_);
  if (!violations.empty()) throw ConfigError(format_violations(violations));
}

SamplingGrid::SamplingGrid(std::vector<Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ConfigError("sampling grid needs at least one axis");
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (dims_[j] < 2) {
      throw ConfigError("sampling grid axis " + std::to_string(j) + " must have at least 2 samples");
    }
  }
}

Index SamplingGrid::size() const {
  Index n = 1;
  for (Index d : dims_) n *= d;
  return n;
}

double measure_cubic(const CubicBandUnion& u) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) total += u.band_measure(i);
  return total;
}

double measure_pp(const ParallelepipedBand& b) {
  return 4.0 * b.half_widths[0] * b.half_widths[1] / std::abs(b.det());
}

double measure_pp(const ParallelepipedUnion& u) {
  double total = 0.0;
  for (const auto& b : u.bands()) total += measure_pp(b);
  return total;
}

CubicBandUnion scale_analog(int dim, std::span<const CubicBand> analog, std::span<const double> ts) {
  if (ts.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("sampling interval vector must have one entry per axis");
  }
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (!(ts[j] > 0.0) || !std::isfinite(ts[j])) {
      throw ConfigError("sampling interval on axis " + std::to_string(j) + " must be positive");
    }
  }
  std::vector<CubicBand> scaled;
  scaled.reserve(analog.size());
  for (std::size_t i = 0; i < analog.size(); ++i) {
    const auto& b = analog[i];
    if (b.center.size() != ts.size() || b.half_widths.size() != ts.size()) {
      throw ConfigError("analog band " + std::to_string(i) + " has the wrong dimension");
    }
    CubicBand out{b.center, b.half_widths};
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (ts[j] * (std::abs(b.center[j]) + b.half_widths[j]) > 0.5 + kTouchTolerance) {
        throw ConfigError("Nyquist violated by analog band " + std::to_string(i) + " on axis " +
                          std::to_string(j));
      }
      out.center[j] *= ts[j];
      out.half_widths[j] *= ts[j];
    }
    scaled.push_back(std::move(out));
  }
  return CubicBandUnion(dim, std::move(scaled));
}

ParallelepipedUnion shift_centers(const ParallelepipedUnion& u, std::array<double, 2> shift) {
  auto bands = u.bands();
  for (auto& b : bands) {
    b.center[0] += shift[0];
    b.center[1] += shift[1];
  }
  return ParallelepipedUnion(std::move(bands));
}

}  // namespace mdprolate
