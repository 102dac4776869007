#pragma once

#include "certikraw/interval.hpp"

namespace certikraw {

// Enclosures of pi/4, pi/2, pi and 2 pi by adjacent doubles.
struct PiEnclosure {
  Interval quarter_pi;
  Interval half_pi;
  Interval pi;
  Interval two_pi;
};

const PiEnclosure& pi_enclosure() noexcept;

// Largest |t| on which atan_point evaluates the series without a further
// argument reduction; a double just above sqrt(2) - 1.
inline constexpr double kAtanReductionBound = 0.41421356237309509;

// Odd degree n of the remainder term used for arguments of magnitude up to
// `magnitude` (< 1): the smallest odd n with magnitude^n / n <= 2^-53.
unsigned atan_remainder_degree(double magnitude);

// Upper bound on magnitude^n / n.
double atan_remainder_bound(double magnitude, unsigned n);

// Maclaurin enclosure of arctan over t, valid for mag(t) < 1:
//   t - t^3/3 + ... +/- t^(n-2)/(n-2) + [-1, 1] |t|^n / n.
Interval atan_series(const Interval& t);

// Enclosure of arctan(x).
Interval atan_point(double x);

// Enclosure of arctan over X, from its endpoints by monotonicity.
Interval atan_interval(const Interval& x);

// Enclosure of atan2(y, x) in (-pi, pi]; the negative real axis maps to +pi.
// Throws OriginArg for (0, 0).
Interval atan2_point(double y, double x);

// Interval extension of atan2 following the nine-case table. The case
// "Ix < 0, 0 in Iy" straddles the branch cut; it returns a single interval
// whose upper part has been shifted by +2 pi, so the result encloses the
// arguments only modulo 2 pi and may extend past pi. When 0 lies in both Ix and
// Iy the result is [-pi, pi] (outward).
Interval atan2_interval(const Interval& iy, const Interval& ix);

// Which row of the nine-case table applies; exposed for tests.
enum class Atan2Case {
  kBothContainZero,
  kXZeroYPositive,
  kXZeroYNegative,
  kYZeroXPositive,
  kYZeroXNegativeWrap,
  kXPositiveYPositive,
  kXPositiveYNegative,
  kXNegativeYPositive,
  kXNegativeYNegative,
};

Atan2Case classify_atan2(const Interval& iy, const Interval& ix) noexcept;

}  // namespace certikraw
