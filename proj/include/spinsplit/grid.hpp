#pragma once

#include <cstddef>

namespace spinsplit {

/// Uniform periodic 1-D grid covering [origin - length/2, origin + length/2).
///
/// The number of points must be a power of two. When `resolve_wavenumber` is
/// positive the spacing must not exceed pi/(8k), i.e. the cos(4kz) structure
/// of the Bragg potentials is sampled with at least four points per period.
class SpatialGrid {
 public:
  SpatialGrid(double length, std::size_t points, double origin = 0.0,
              double resolve_wavenumber = 0.0);

  double length() const { return length_; }
  std::size_t points() const { return points_; }
  double origin() const { return origin_; }
  double spacing() const { return length_ / static_cast<double>(points_); }
  double momentum_spacing() const;

  double position(std::size_t j) const {
    return origin_ - 0.5 * length_ + static_cast<double>(j) * spacing();
  }
  /// Momentum of FFT bin j in standard (unshifted) FFT ordering.
  double momentum(std::size_t j) const;

  double lower_edge() const { return origin_ - 0.5 * length_; }
  double upper_edge() const { return origin_ + 0.5 * length_; }

  /// Throws if the spacing exceeds pi/(8k).
  void require_resolves(double wavenumber) const;

  bool operator==(const SpatialGrid&) const = default;

 private:
  double length_;
  std::size_t points_;
  double origin_;
};

}  // namespace spinsplit
