// Compiled with -frounding-math so the optimizer keeps each operation inside
// the window where the rounding mode is switched.

#include <cfenv>

#include "certikraw/rounding.hpp"

namespace certikraw::rounding {

namespace {

class ScopedRoundingMode {
 public:
  explicit ScopedRoundingMode(int mode) : saved_(std::fegetround()) { std::fesetround(mode); }
  ~ScopedRoundingMode() { std::fesetround(saved_); }
  ScopedRoundingMode(const ScopedRoundingMode&) = delete;
  ScopedRoundingMode& operator=(const ScopedRoundingMode&) = delete;

 private:
  int saved_;
};

template <class Op>
double with_mode(int mode, double a, double b, Op op) {
  ScopedRoundingMode guard(mode);
  volatile double va = a;
  volatile double vb = b;
  volatile double r = op(va, vb);
  return r;
}

}  // namespace

double HardwareRounding::add_down(double a, double b) {
  return with_mode(FE_DOWNWARD, a, b, [](double x, double y) { return x + y; });
}
double HardwareRounding::add_up(double a, double b) {
  return with_mode(FE_UPWARD, a, b, [](double x, double y) { return x + y; });
}
double HardwareRounding::sub_down(double a, double b) {
  return with_mode(FE_DOWNWARD, a, b, [](double x, double y) { return x - y; });
}
double HardwareRounding::sub_up(double a, double b) {
  return with_mode(FE_UPWARD, a, b, [](double x, double y) { return x - y; });
}
double HardwareRounding::mul_down(double a, double b) {
  return with_mode(FE_DOWNWARD, a, b, [](double x, double y) { return x * y; });
}
double HardwareRounding::mul_up(double a, double b) {
  return with_mode(FE_UPWARD, a, b, [](double x, double y) { return x * y; });
}
double HardwareRounding::div_down(double a, double b) {
  return with_mode(FE_DOWNWARD, a, b, [](double x, double y) { return x / y; });
}
double HardwareRounding::div_up(double a, double b) {
  return with_mode(FE_UPWARD, a, b, [](double x, double y) { return x / y; });
}

}  // namespace certikraw::rounding
