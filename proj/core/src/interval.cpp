#include "certikraw/interval.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <string_view>

namespace certikraw {

double mid(const Interval& x) noexcept {
  const double lo = x.lo(), hi = x.hi();
  // Opposite signs cannot overflow in the sum; same signs cannot in the difference.
  const double m = (lo < 0.0) != (hi < 0.0) ? (lo + hi) / 2.0 : lo + (hi - lo) / 2.0;
  return std::clamp(m, lo, hi);
}

double rad(const Interval& x) noexcept {
  return Round::div_up(Round::sub_up(x.hi(), x.lo()), 2.0);
}

double width(const Interval& x) noexcept { return Round::sub_up(x.hi(), x.lo()); }

Interval sqr(const Interval& x) { return pow_nonneg_int(x, 2); }

namespace {

// Bounds on a^e for a >= 0; products of nonnegative factors are monotone, so
// rounding every partial product in one direction bounds the exact power.
double pow_down(double a, unsigned e) {
  double r = 1.0;
  double base = a;
  while (e != 0) {
    if (e & 1U) r = Round::mul_down(r, base);
    e >>= 1U;
    if (e != 0) base = Round::mul_down(base, base);
  }
  return r;
}

double pow_up(double a, unsigned e) {
  double r = 1.0;
  double base = a;
  while (e != 0) {
    if (e & 1U) r = Round::mul_up(r, base);
    e >>= 1U;
    if (e != 0) base = Round::mul_up(base, base);
  }
  return r;
}

}  // namespace

Interval pow_nonneg_int(const Interval& x, unsigned e) {
  if (e == 0) return Interval(1.0);
  const bool odd = (e & 1U) != 0;
  if (x.lo() >= 0.0) return Interval(pow_down(x.lo(), e), pow_up(x.hi(), e));
  if (x.hi() <= 0.0) {
    const double lo_mag = pow_down(-x.hi(), e);
    const double hi_mag = pow_up(-x.lo(), e);
    return odd ? Interval(-hi_mag, -lo_mag) : Interval(lo_mag, hi_mag);
  }
  const double neg = pow_up(-x.lo(), e);
  const double pos = pow_up(x.hi(), e);
  return odd ? Interval(-neg, pos) : Interval(0.0, std::max(neg, pos));
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  std::array<char, 64> lo{};
  std::array<char, 64> hi{};
  auto rl = std::to_chars(lo.data(), lo.data() + lo.size(), x.lo(), std::chars_format::general, 17);
  auto rh = std::to_chars(hi.data(), hi.data() + hi.size(), x.hi(), std::chars_format::general, 17);
  return os << '[' << std::string_view(lo.data(), rl.ptr - lo.data()) << ", "
            << std::string_view(hi.data(), rh.ptr - hi.data()) << ']';
}

}  // namespace certikraw
