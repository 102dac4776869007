#pragma once

// Bottom-up (forward-mode) automatic differentiation.
//
// An AD tuple (d0, d1, ..., dm) carries a value d0 together with the m partial
// derivatives d1..dm of that value with respect to the m independent
// variables. With Interval scalars every entry is an enclosure, so evaluating
// a function on the seed tuples of a box X yields both F(X) and F'(X).
//
// Variable indices are 0-based: variable i lives in slot d[i + 1].

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "certikraw/errors.hpp"
#include "certikraw/interval.hpp"

namespace certikraw {

template <class S>
class BasicAdTuple {
 public:
  using scalar_type = S;

  BasicAdTuple() = default;
  explicit BasicAdTuple(std::vector<S> d) : d_(std::move(d)) {
    if (d_.empty()) throw DimensionMismatch("AD tuple needs at least a value slot");
  }

  [[nodiscard]] std::size_t dim() const noexcept { return d_.empty() ? 0 : d_.size() - 1; }
  [[nodiscard]] const S& value() const { return d_.front(); }
  [[nodiscard]] const S& partial(std::size_t var) const { return d_.at(var + 1); }
  [[nodiscard]] std::span<const S> partials() const { return std::span<const S>(d_).subspan(1); }
  [[nodiscard]] const std::vector<S>& slots() const noexcept { return d_; }
  [[nodiscard]] std::size_t size() const noexcept { return d_.size(); }
  const S& operator[](std::size_t slot) const { return d_[slot]; }
  S& operator[](std::size_t slot) { return d_[slot]; }

  friend bool operator==(const BasicAdTuple&, const BasicAdTuple&) = default;

 private:
  std::vector<S> d_;
};

// Run-scoped factory fixing the number of independent variables.
template <class S>
class BasicAdContext {
 public:
  explicit BasicAdContext(std::size_t dim) : dim_(dim) {}

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

  // Seed row: value x, derivative 1 in slot var + 1, 0 elsewhere.
  [[nodiscard]] BasicAdTuple<S> variable(std::size_t var, const S& x) const {
    if (var >= dim_) throw DimensionMismatch("variable index " + std::to_string(var) + " out of range");
    std::vector<S> d(dim_ + 1, S(0.0));
    d[0] = x;
    d[var + 1] = S(1.0);
    return BasicAdTuple<S>(std::move(d));
  }

  [[nodiscard]] BasicAdTuple<S> constant(const S& c) const {
    std::vector<S> d(dim_ + 1, S(0.0));
    d[0] = c;
    return BasicAdTuple<S>(std::move(d));
  }

  // Seed tuples for every coordinate of a point or box.
  [[nodiscard]] std::vector<BasicAdTuple<S>> seed(std::span<const S> x) const {
    if (x.size() != dim_) throw DimensionMismatch("seed: box dimension differs from context");
    std::vector<BasicAdTuple<S>> out;
    out.reserve(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out.push_back(variable(i, x[i]));
    return out;
  }

 private:
  std::size_t dim_;
};

namespace detail {

template <class S>
void require_same_dim(const BasicAdTuple<S>& p, const BasicAdTuple<S>& q) {
  if (p.size() != q.size() || p.size() == 0) {
    throw DimensionMismatch("AD tuples of dimension " + std::to_string(p.dim()) + " and " +
                            std::to_string(q.dim()) + " combined");
  }
}

// r_i = dx * p_i + dy * q_i for i >= 1, with r_0 given.
template <class S>
BasicAdTuple<S> chain(S r0, const S& dx, const BasicAdTuple<S>& p, const S& dy, const BasicAdTuple<S>& q) {
  std::vector<S> d(p.size());
  d[0] = std::move(r0);
  for (std::size_t i = 1; i < p.size(); ++i) d[i] = dx * p[i] + dy * q[i];
  return BasicAdTuple<S>(std::move(d));
}

}  // namespace detail

template <class S>
BasicAdTuple<S> operator+(const BasicAdTuple<S>& p, const BasicAdTuple<S>& q) {
  detail::require_same_dim(p, q);
  std::vector<S> d(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i] + q[i];
  return BasicAdTuple<S>(std::move(d));
}

template <class S>
BasicAdTuple<S> operator-(const BasicAdTuple<S>& p, const BasicAdTuple<S>& q) {
  detail::require_same_dim(p, q);
  std::vector<S> d(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i] - q[i];
  return BasicAdTuple<S>(std::move(d));
}

template <class S>
BasicAdTuple<S> operator-(const BasicAdTuple<S>& p) {
  std::vector<S> d(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) d[i] = -p[i];
  return BasicAdTuple<S>(std::move(d));
}

template <class S>
BasicAdTuple<S> operator*(const BasicAdTuple<S>& p, const BasicAdTuple<S>& q) {
  detail::require_same_dim(p, q);
  std::vector<S> d(p.size());
  d[0] = p[0] * q[0];
  for (std::size_t i = 1; i < p.size(); ++i) d[i] = q[0] * p[i] + p[0] * q[i];
  return BasicAdTuple<S>(std::move(d));
}

// For Interval scalars, throws DivisionByZeroInterval when 0 lies in q's value.
template <class S>
BasicAdTuple<S> operator/(const BasicAdTuple<S>& p, const BasicAdTuple<S>& q) {
  detail::require_same_dim(p, q);
  const S dx = S(1.0) / q[0];
  const S dy = -(p[0] / (q[0] * q[0]));
  return detail::chain(p[0] / q[0], dx, p, dy, q);
}

// Scaling by a constant of the scalar type.
template <class S>
BasicAdTuple<S> operator*(const S& c, const BasicAdTuple<S>& p) {
  std::vector<S> d(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) d[i] = c * p[i];
  return BasicAdTuple<S>(std::move(d));
}

// Chain rule for a unary operation u: r0 = U(p0), ri = U'(p0) pi.
template <class S, class U, class DU>
BasicAdTuple<S> ad_unary(const BasicAdTuple<S>& p, U&& u, DU&& du) {
  const S deriv = std::invoke(du, p[0]);
  std::vector<S> d(p.size());
  d[0] = std::invoke(u, p[0]);
  for (std::size_t i = 1; i < p.size(); ++i) d[i] = deriv * p[i];
  return BasicAdTuple<S>(std::move(d));
}

using AdTuple = BasicAdTuple<Interval>;
using AdContext = BasicAdContext<Interval>;
using PointAdTuple = BasicAdTuple<double>;
using PointAdContext = BasicAdContext<double>;

}  // namespace certikraw
