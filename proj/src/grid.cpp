#include "spinsplit/grid.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spinsplit/units.hpp"

namespace spinsplit {

SpatialGrid::SpatialGrid(double length, std::size_t points, double origin,
                         double resolve_wavenumber)
    : length_(length), points_(points), origin_(origin) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid length must be positive and finite");
  }
  if (points < 2 || !std::has_single_bit(points)) {
    throw std::invalid_argument("grid points must be a power of two >= 2, got " +
                                std::to_string(points));
  }
  if (!std::isfinite(origin)) {
    throw std::invalid_argument("grid origin must be finite");
  }
  if (resolve_wavenumber > 0.0) require_resolves(resolve_wavenumber);
}

double SpatialGrid::momentum_spacing() const { return 2.0 * units::pi / length_; }

double SpatialGrid::momentum(std::size_t j) const {
  const auto n = static_cast<long long>(points_);
  auto idx = static_cast<long long>(j);
  if (idx >= n / 2) idx -= n;
  return static_cast<double>(idx) * momentum_spacing();
}

void SpatialGrid::require_resolves(double wavenumber) const {
  const double limit = units::pi / (8.0 * wavenumber);
  if (spacing() > limit * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "grid spacing " + std::to_string(units::to_nm(spacing())) +
        " nm exceeds pi/(8k) = " + std::to_string(units::to_nm(limit)) +
        " nm; increase the number of points");
  }
}

}  // namespace spinsplit
