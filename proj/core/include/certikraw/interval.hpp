#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <stdexcept>

#include "certikraw/errors.hpp"
#include "certikraw/rounding.hpp"

namespace certikraw {

// A closed interval [lo, hi] with finite double endpoints.
//
// Every arithmetic operation rounds its lower endpoint toward -inf and its
// upper endpoint toward +inf, so the result contains the exact real result for
// every choice of operands inside the inputs. Results that would have an
// infinite endpoint are rejected with NonFiniteInterval.
class Interval {
 public:
  constexpr Interval() noexcept = default;

  explicit Interval(double point) : Interval(point, point) {}

  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw NonFiniteInterval("interval endpoint is not finite");
    }
    if (lo > hi) {
      throw std::invalid_argument("interval lower endpoint exceeds upper endpoint");
    }
  }

  [[nodiscard]] constexpr double lo() const noexcept { return lo_; }
  [[nodiscard]] constexpr double hi() const noexcept { return hi_; }

  [[nodiscard]] constexpr bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  [[nodiscard]] constexpr bool contains_zero() const noexcept { return lo_ <= 0.0 && 0.0 <= hi_; }
  [[nodiscard]] constexpr bool is_point() const noexcept { return lo_ == hi_; }

  friend constexpr bool operator==(const Interval&, const Interval&) noexcept = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

using Round = rounding::Active;

inline Interval operator-(const Interval& x) { return Interval(-x.hi(), -x.lo()); }

inline Interval operator+(const Interval& x, const Interval& y) {
  return Interval(Round::add_down(x.lo(), y.lo()), Round::add_up(x.hi(), y.hi()));
}

inline Interval operator-(const Interval& x, const Interval& y) {
  return Interval(Round::sub_down(x.lo(), y.hi()), Round::sub_up(x.hi(), y.lo()));
}

inline Interval operator*(const Interval& x, const Interval& y) {
  const double a = x.lo(), b = x.hi(), c = y.lo(), d = y.hi();
  const double lo = std::min({Round::mul_down(a, c), Round::mul_down(a, d), Round::mul_down(b, c),
                              Round::mul_down(b, d)});
  const double hi = std::max({Round::mul_up(a, c), Round::mul_up(a, d), Round::mul_up(b, c),
                              Round::mul_up(b, d)});
  return Interval(lo, hi);
}

// Throws DivisionByZeroInterval when 0 lies in the divisor.
inline Interval operator/(const Interval& x, const Interval& y) {
  if (y.contains_zero()) throw DivisionByZeroInterval();
  const double a = x.lo(), b = x.hi(), c = y.lo(), d = y.hi();
  const double lo = std::min({Round::div_down(a, c), Round::div_down(a, d), Round::div_down(b, c),
                              Round::div_down(b, d)});
  const double hi = std::max({Round::div_up(a, c), Round::div_up(a, d), Round::div_up(b, c),
                              Round::div_up(b, d)});
  return Interval(lo, hi);
}

inline Interval& operator+=(Interval& x, const Interval& y) { return x = x + y; }
inline Interval& operator-=(Interval& x, const Interval& y) { return x = x - y; }
inline Interval& operator*=(Interval& x, const Interval& y) { return x = x * y; }
inline Interval& operator/=(Interval& x, const Interval& y) { return x = x / y; }

// Machine number inside x close to its midpoint.
double mid(const Interval& x) noexcept;

// Upper bound on (hi - lo) / 2.
double rad(const Interval& x) noexcept;

// Upper bound on hi - lo.
double width(const Interval& x) noexcept;

// max(|lo|, |hi|), exact.
inline double mag(const Interval& x) noexcept { return std::max(std::fabs(x.lo()), std::fabs(x.hi())); }

inline Interval hull(const Interval& x, const Interval& y) {
  return Interval(std::min(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

inline bool subset(const Interval& inner, const Interval& outer) noexcept {
  return outer.lo() <= inner.lo() && inner.hi() <= outer.hi();
}

// True iff inner lies in the interior of outer (strict on both sides).
inline bool subset_interior(const Interval& inner, const Interval& outer) noexcept {
  return outer.lo() < inner.lo() && inner.hi() < outer.hi();
}

inline bool overlaps(const Interval& x, const Interval& y) noexcept {
  return x.lo() <= y.hi() && y.lo() <= x.hi();
}

// x*x with the lower endpoint clamped at zero when 0 lies in x.
Interval sqr(const Interval& x);

// x^e by repeated squaring; even powers of zero-straddling intervals start at 0.
Interval pow_nonneg_int(const Interval& x, unsigned e);

std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace certikraw
