#pragma once

// Directed rounding of the four basic operations on doubles.
//
// Two interchangeable policies are provided:
//
//  * ErrorFreeRounding (default) evaluates in round-to-nearest and recovers the
//    exact rounding error with TwoSum / FMA. The result is stepped one ulp
//    outward only when the operation was inexact in that direction, so it
//    agrees bit for bit with IEEE 754 fldown/flup. It touches no floating-point
//    environment and is safe to call from any thread.
//
//  * HardwareRounding switches the FPU rounding mode around each operation and
//    restores it afterwards. The rounding mode is per-thread state; each call
//    saves and restores it, so the policy is reentrant but not free.
//
// Near the underflow threshold the error terms stop being representable; the
// error-free policy then widens by one ulp unconditionally.

#include <cmath>
#include <limits>

namespace certikraw::rounding {

namespace detail {

inline constexpr double kTiny = 0x1p-900;

inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

// Sign of the exact error e = exact - rounded; -1, 0 or +1.
inline int sign_of(double e) { return (e > 0.0) - (e < 0.0); }

}  // namespace detail

struct ErrorFreeRounding {
  static int add_error_sign(double a, double b, double s) {
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return detail::sign_of(err);
  }

  static double add_down(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return s;
    return add_error_sign(a, b, s) < 0 ? detail::down(s) : s;
  }
  static double add_up(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return s;
    return add_error_sign(a, b, s) > 0 ? detail::up(s) : s;
  }
  static double sub_down(double a, double b) { return add_down(a, -b); }
  static double sub_up(double a, double b) { return add_up(a, -b); }

  static double mul_down(double a, double b) {
    const double p = a * b;
    if (a == 0.0 || b == 0.0 || !std::isfinite(p)) return p;
    if (std::fabs(p) < detail::kTiny) return detail::down(p);
    return detail::sign_of(std::fma(a, b, -p)) < 0 ? detail::down(p) : p;
  }
  static double mul_up(double a, double b) {
    const double p = a * b;
    if (a == 0.0 || b == 0.0 || !std::isfinite(p)) return p;
    if (std::fabs(p) < detail::kTiny) return detail::up(p);
    return detail::sign_of(std::fma(a, b, -p)) > 0 ? detail::up(p) : p;
  }

  // Sign of a/b - q, from the exact remainder a - q*b.
  static int div_error_sign(double a, double b, double q) {
    const double r = std::fma(-q, b, a);
    return detail::sign_of(r) * (b > 0.0 ? 1 : -1);
  }
  static bool div_unsafe(double a, double b, double q) {
    return std::fabs(a) < detail::kTiny || std::fabs(b) < detail::kTiny || std::fabs(q) < detail::kTiny;
  }

  static double div_down(double a, double b) {
    const double q = a / b;
    if (a == 0.0 || !std::isfinite(q)) return q;
    if (div_unsafe(a, b, q)) return detail::down(q);
    return div_error_sign(a, b, q) < 0 ? detail::down(q) : q;
  }
  static double div_up(double a, double b) {
    const double q = a / b;
    if (a == 0.0 || !std::isfinite(q)) return q;
    if (div_unsafe(a, b, q)) return detail::up(q);
    return div_error_sign(a, b, q) > 0 ? detail::up(q) : q;
  }
};

// Defined in hardware_rounding.cpp, which is compiled with -frounding-math.
struct HardwareRounding {
  static double add_down(double a, double b);
  static double add_up(double a, double b);
  static double sub_down(double a, double b);
  static double sub_up(double a, double b);
  static double mul_down(double a, double b);
  static double mul_up(double a, double b);
  static double div_down(double a, double b);
  static double div_up(double a, double b);
};

#if defined(CERTIKRAW_HARDWARE_ROUNDING) && CERTIKRAW_HARDWARE_ROUNDING
using Active = HardwareRounding;
inline constexpr const char* kActiveName = "hardware";
#else
using Active = ErrorFreeRounding;
inline constexpr const char* kActiveName = "error-free";
#endif

}  // namespace certikraw::rounding
