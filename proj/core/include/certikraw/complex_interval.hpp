#pragma once

// Rectangular complex numbers over any real-like type: double, Interval, or an
// AD tuple. The arithmetic is the schoolbook formula applied componentwise, so
// with AD components the real and imaginary parts carry rigorous derivatives.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "certikraw/autodiff.hpp"
#include "certikraw/errors.hpp"
#include "certikraw/interval.hpp"

namespace certikraw {

template <class T>
struct Complex {
  T re{};
  T im{};

  friend bool operator==(const Complex&, const Complex&) = default;
};

template <class T>
Complex<T> operator+(const Complex<T>& z, const Complex<T>& w) {
  return {z.re + w.re, z.im + w.im};
}

template <class T>
Complex<T> operator-(const Complex<T>& z, const Complex<T>& w) {
  return {z.re - w.re, z.im - w.im};
}

template <class T>
Complex<T> operator-(const Complex<T>& z) {
  return {-z.re, -z.im};
}

template <class T>
Complex<T> operator*(const Complex<T>& z, const Complex<T>& w) {
  return {z.re * w.re - z.im * w.im, z.re * w.im + z.im * w.re};
}

// Literal quotient formula over the denominator w_re^2 + w_im^2 (no scaling).
// With interval parts this throws DivisionByZeroInterval when the denominator
// enclosure contains zero.
template <class T>
Complex<T> operator/(const Complex<T>& z, const Complex<T>& w) {
  const T den = w.re * w.re + w.im * w.im;
  return {(z.re * w.re + z.im * w.im) / den, (z.im * w.re - z.re * w.im) / den};
}

// z^e by binary powering; `one` supplies the multiplicative identity (which
// for AD tuples must carry the run's dimension).
template <class T>
Complex<T> pow(const Complex<T>& z, unsigned e, const Complex<T>& one) {
  Complex<T> result = one;
  bool have = false;
  Complex<T> base = z;
  while (e != 0) {
    if (e & 1U) {
      result = have ? result * base : base;
      have = true;
    }
    e >>= 1U;
    if (e != 0) base = base * base;
  }
  return result;
}

using ComplexInterval = Complex<Interval>;
using ComplexAd = Complex<AdTuple>;

// Pairs consecutive real slots (x_{2j}, x_{2j+1}) into z_j = x_{2j} + i x_{2j+1}.
template <class T>
std::vector<Complex<T>> id_R_to_C(std::span<const T> x) {
  if (x.size() % 2 != 0) throw DimensionMismatch("id_R_to_C: odd number of real components");
  std::vector<Complex<T>> z;
  z.reserve(x.size() / 2);
  for (std::size_t j = 0; j < x.size(); j += 2) z.push_back({x[j], x[j + 1]});
  return z;
}

template <class T>
std::vector<T> id_C_to_R(std::span<const Complex<T>> z) {
  std::vector<T> x;
  x.reserve(2 * z.size());
  for (const auto& zj : z) {
    x.push_back(zj.re);
    x.push_back(zj.im);
  }
  return x;
}

template <class T>
std::vector<Complex<T>> id_R_to_C(const std::vector<T>& x) {
  return id_R_to_C(std::span<const T>(x));
}

template <class T>
std::vector<T> id_C_to_R(const std::vector<Complex<T>>& z) {
  return id_C_to_R(std::span<const Complex<T>>(z));
}

}  // namespace certikraw
