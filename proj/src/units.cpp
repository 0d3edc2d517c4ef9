#include "spinsplit/units.hpp"

#include <cmath>

namespace spinsplit::units {

double field_from_intensity(double intensity) {
  const double e_v_per_m =
      std::sqrt(2.0 * intensity * 1e4 / (vacuum_permittivity * speed_of_light));
  return e_v_per_m * m_per_length_unit;
}

}  // namespace spinsplit::units
