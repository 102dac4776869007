#pragma once

// Krawczyk's existence and uniqueness test for f(x) = 0 on R^m.
//
// With c an approximate root, R an approximate inverse of f'(c) and a box X
// around c, the interval map
//
//   K(X) = c - R F(c) + (I - R F'(X)) (X - c)
//
// satisfies: K(X) inside the interior of X implies f has exactly one root in
// X, and R and every matrix in F'(X) are nonsingular.

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "certikraw/autodiff.hpp"
#include "certikraw/interval_linalg.hpp"

namespace certikraw {

class ResidualSystem;

// An interval extension of f together with an enclosure of its Jacobian.
struct IntervalFunction {
  std::size_t dim = 0;
  std::function<IntervalVector(std::span<const Interval>)> value;
  std::function<IntervalMatrix(std::span<const Interval>)> jacobian;
};

IntervalFunction as_interval_function(const ResidualSystem& sys);

// Builds an IntervalFunction from a generic callable mapping AD tuples to AD
// tuples (both value and Jacobian come from one AD evaluation).
template <class F>
IntervalFunction ad_function(std::size_t dim, F f) {
  auto eval = [dim, f](std::span<const Interval> x) {
    const AdContext ctx(dim);
    const std::vector<AdTuple> out = f(ctx, ctx.seed(x));
    if (out.size() != dim) throw DimensionMismatch("ad_function: output dimension differs");
    return out;
  };
  IntervalFunction fn;
  fn.dim = dim;
  fn.value = [eval](std::span<const Interval> x) {
    IntervalVector v;
    for (const auto& t : eval(x)) v.push_back(t.value());
    return v;
  };
  fn.jacobian = [eval, dim](std::span<const Interval> x) {
    const auto out = eval(x);
    IntervalMatrix jac(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) jac(i, j) = out[i].partial(j);
    }
    return jac;
  };
  return fn;
}

// X_i = [c_i - r, c_i + r] with r = 2 ||R F(c)||_inf rounded up, where F(c)
// is an enclosure of f at c. r is floored at 16 ulps of max |c_i| (and at the
// smallest normal double), which also covers r = 0.
IntervalVector candidate_box(std::span<const double> c, const PointMatrix& r, std::span<const Interval> f_at_c);
IntervalVector candidate_box(std::span<const double> c, const PointMatrix& r, std::span<const double> f_at_c);

// The radius candidate_box would use.
double candidate_radius(std::span<const double> c, const PointMatrix& r, std::span<const Interval> f_at_c);

IntervalVector krawczyk_map(std::span<const Interval> x, std::span<const double> c, const PointMatrix& r,
                            const IntervalFunction& f);

struct KrawczykReport {
  bool passed = false;
  IntervalVector X;
  IntervalVector KX;
  PointMatrix R;
  PointVector c;
  double residual_norm = 0.0;  // upper bound on ||f(c)||_inf
  IntervalVector f_at_c;
  IntervalMatrix jacobian;  // F'(X)
  std::string diagnostic;
};

// f(c) and f'(c) on the point box [c, c], R from the midpoint Jacobian, the
// candidate box, then K(X). Never throws for mathematical failures: a singular
// Jacobian, a division by an interval containing zero or an overflow all give
// passed = false with a diagnostic.
KrawczykReport krawczyk_test(const IntervalFunction& f, std::span<const double> c);
KrawczykReport krawczyk_test(const ResidualSystem& sys, std::span<const double> c);

// Entrywise strict containment of kx in x.
bool contained_in_interior(std::span<const Interval> kx, std::span<const Interval> x) noexcept;

}  // namespace certikraw
