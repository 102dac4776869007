#include "certikraw/rigorous_arg.hpp"

#include <cmath>
#include <numbers>

namespace certikraw {

namespace {

constexpr double kRemainderTarget = 0x1p-53;

// std::numbers::pi is the double just below pi.
constexpr double kPiLo = std::numbers::pi;

Interval scaled_pi(double factor) {
  const double hi = std::nextafter(kPiLo, 4.0);
  return Interval(kPiLo * factor, hi * factor);  // power-of-two factors are exact
}

Interval quotient(double num, double den) {
  return Interval(Round::div_down(num, den), Round::div_up(num, den));
}

// [lower endpoint of a, upper endpoint of b]
Interval span_of(const Interval& a, const Interval& b) { return Interval(a.lo(), b.hi()); }

}  // namespace

const PiEnclosure& pi_enclosure() noexcept {
  static const PiEnclosure kPi{scaled_pi(0.25), scaled_pi(0.5), scaled_pi(1.0), scaled_pi(2.0)};
  return kPi;
}

double atan_remainder_bound(double magnitude, unsigned n) {
  double p = 1.0;
  for (unsigned i = 0; i < n; ++i) p = Round::mul_up(p, magnitude);
  return Round::div_up(p, static_cast<double>(n));
}

unsigned atan_remainder_degree(double magnitude) {
  unsigned n = 1;
  while (atan_remainder_bound(magnitude, n) > kRemainderTarget) n += 2;
  return n;
}

Interval atan_series(const Interval& t) {
  const double a = mag(t);
  if (!(a < 1.0)) throw std::domain_error("atan_series needs |t| < 1");
  if (a == 0.0) return Interval(0.0);

  const unsigned n = atan_remainder_degree(a);
  const double bound = atan_remainder_bound(a, n);
  const Interval remainder(-bound, bound);
  if (n == 1) return remainder;

  // Terms of degree 1, 3, ..., n - 2 as t * p(t^2); p evaluated by Horner
  // from the highest coefficient down.
  const unsigned terms = (n - 1) / 2;
  const Interval u = sqr(t);
  auto coefficient = [](unsigned k) {
    const Interval c = Interval(1.0) / Interval(static_cast<double>(2 * k + 1));
    return (k % 2 == 0) ? c : -c;
  };
  Interval acc = coefficient(terms - 1);
  for (unsigned k = terms - 1; k-- > 0;) acc = coefficient(k) + u * acc;
  return t * acc + remainder;
}

Interval atan_point(double x) {
  if (x == 0.0) return Interval(0.0);
  if (x < 0.0) return -atan_point(-x);

  const auto& pi = pi_enclosure();
  if (x <= kAtanReductionBound) return atan_series(Interval(x));
  if (x <= 1.0) {
    // arctan x = pi/4 + arctan((x - 1) / (x + 1))
    const Interval ix(x);
    return pi.quarter_pi + atan_series((ix - Interval(1.0)) / (ix + Interval(1.0)));
  }
  // arctan x = pi/2 - arctan(1 / x); 1/x lies in (0, 1].
  return pi.half_pi - atan_interval(quotient(1.0, x));
}

Interval atan_interval(const Interval& x) {
  if (x.is_point()) return atan_point(x.lo());
  return span_of(atan_point(x.lo()), atan_point(x.hi()));
}

Interval atan2_point(double y, double x) {
  if (x == 0.0 && y == 0.0) throw OriginArg();
  const auto& pi = pi_enclosure();
  if (y <= x && y > -x) return atan_interval(quotient(y, x));
  if (y > x && y > -x) return pi.half_pi - atan_interval(quotient(x, y));
  if (y > x && y <= -x) {
    if (y >= 0.0) return pi.pi + atan_interval(quotient(y, x));
    return -pi.pi + atan_interval(quotient(y, x));
  }
  // y <= x && y <= -x
  return -pi.half_pi - atan_interval(quotient(x, y));
}

Atan2Case classify_atan2(const Interval& iy, const Interval& ix) noexcept {
  const bool x0 = ix.contains_zero();
  const bool y0 = iy.contains_zero();
  if (x0 && y0) return Atan2Case::kBothContainZero;
  if (x0) return iy.lo() > 0.0 ? Atan2Case::kXZeroYPositive : Atan2Case::kXZeroYNegative;
  if (y0) return ix.lo() > 0.0 ? Atan2Case::kYZeroXPositive : Atan2Case::kYZeroXNegativeWrap;
  if (ix.lo() > 0.0) return iy.lo() > 0.0 ? Atan2Case::kXPositiveYPositive : Atan2Case::kXPositiveYNegative;
  return iy.lo() > 0.0 ? Atan2Case::kXNegativeYPositive : Atan2Case::kXNegativeYNegative;
}

Interval atan2_interval(const Interval& iy, const Interval& ix) {
  const auto& pi = pi_enclosure();
  const double ylo = iy.lo(), yhi = iy.hi(), xlo = ix.lo(), xhi = ix.hi();
  switch (classify_atan2(iy, ix)) {
    case Atan2Case::kBothContainZero:
      return Interval(-pi.pi.hi(), pi.pi.hi());
    case Atan2Case::kXZeroYPositive:
      return span_of(atan2_point(ylo, xhi), atan2_point(ylo, xlo));
    case Atan2Case::kXZeroYNegative:
      return span_of(atan2_point(yhi, xlo), atan2_point(yhi, xhi));
    case Atan2Case::kYZeroXPositive:
      return span_of(atan2_point(ylo, xlo), atan2_point(yhi, xlo));
    case Atan2Case::kYZeroXNegativeWrap:
      return span_of(atan2_point(yhi, xhi), pi.two_pi + atan2_point(ylo, xhi));
    case Atan2Case::kXPositiveYPositive:
      return span_of(atan2_point(ylo, xhi), atan2_point(yhi, xlo));
    case Atan2Case::kXPositiveYNegative:
      return span_of(atan2_point(ylo, xlo), atan2_point(yhi, xhi));
    case Atan2Case::kXNegativeYPositive:
      return span_of(atan2_point(yhi, xhi), atan2_point(ylo, xlo));
    case Atan2Case::kXNegativeYNegative:
      return span_of(atan2_point(yhi, xlo), atan2_point(ylo, xhi));
  }
  return Interval(-pi.pi.hi(), pi.pi.hi());
}

}  // namespace certikraw
