#pragma once

namespace spinsplit {

inline constexpr double kSmallSinCosRange = 1.5;

// sin and cos for |x| <= kSmallSinCosRange: Taylor series at x/2 (truncation error
// below 1e-19) followed by the double-angle formulas, so results agree with
// libm to a few ulp.
inline void small_sincos(double x, double& s, double& c) {
  x *= 0.5;
  const double x2 = x * x;
  double ps = 1.0 / 355687428096000.0;   // 1/17!
  double pc = 1.0 / 6402373705728000.0;  // 1/18!
  ps = ps * -x2 + 1.0 / 1307674368000.0;
  pc = pc * -x2 + 1.0 / 20922789888000.0;
  ps = ps * -x2 + 1.0 / 6227020800.0;
  pc = pc * -x2 + 1.0 / 87178291200.0;
  ps = ps * -x2 + 1.0 / 39916800.0;
  pc = pc * -x2 + 1.0 / 479001600.0;
  ps = ps * -x2 + 1.0 / 362880.0;
  pc = pc * -x2 + 1.0 / 3628800.0;
  ps = ps * -x2 + 1.0 / 5040.0;
  pc = pc * -x2 + 1.0 / 40320.0;
  ps = ps * -x2 + 1.0 / 120.0;
  pc = pc * -x2 + 1.0 / 720.0;
  ps = ps * -x2 + 1.0 / 6.0;
  pc = pc * -x2 + 1.0 / 24.0;
  ps = ps * -x2 + 1.0;
  pc = pc * -x2 + 0.5;
  const double sh = x * ps;
  const double ch = 1.0 - x2 * pc;
  s = 2.0 * sh * ch;
  c = (ch - sh) * (ch + sh);
}

}  // namespace spinsplit
