#include "certikraw/krawczyk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "certikraw/gluing_system.hpp"

namespace certikraw {

IntervalFunction as_interval_function(const ResidualSystem& sys) {
  IntervalFunction fn;
  fn.dim = sys.dim();
  fn.value = [&sys](std::span<const Interval> x) { return sys.f(x); };
  fn.jacobian = [&sys](std::span<const Interval> x) { return sys.f_with_jacobian(x).jacobian; };
  return fn;
}

double candidate_radius(std::span<const double> c, const PointMatrix& r, std::span<const Interval> f_at_c) {
  if (r.rows() != c.size() || f_at_c.size() != r.cols()) throw DimensionMismatch("candidate_box: dimension mismatch");
  // Doubling is exact, so the upper bound on ||R F(c)|| stays an upper bound.
  const double radius = 2.0 * inf_norm_mag(interval_mat_vec(r, f_at_c));
  // A box only a few ulps wide cannot contain its own rounded image, so the
  // radius never drops below 16 ulps of the centre (or DBL_MIN at 0).
  const double scale = inf_norm_point(c);
  const double ulp = std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale;
  return std::max({radius, 16.0 * ulp, std::numeric_limits<double>::min()});
}

IntervalVector candidate_box(std::span<const double> c, const PointMatrix& r, std::span<const Interval> f_at_c) {
  const double radius = candidate_radius(c, r, f_at_c);
  IntervalVector x;
  x.reserve(c.size());
  for (double ci : c) x.emplace_back(Round::sub_down(ci, radius), Round::add_up(ci, radius));
  return x;
}

IntervalVector candidate_box(std::span<const double> c, const PointMatrix& r, std::span<const double> f_at_c) {
  const auto f = to_intervals(f_at_c);
  return candidate_box(c, r, std::span<const Interval>(f));
}

namespace {

IntervalVector krawczyk_image(std::span<const Interval> x, std::span<const double> c, const PointMatrix& r,
                              std::span<const Interval> f_at_c, const IntervalMatrix& jac) {
  const std::size_t m = c.size();
  const IntervalVector rf = interval_mat_vec(r, f_at_c);
  const IntervalMatrix contraction = identity_minus_product(r, jac);
  IntervalVector offset(m);
  for (std::size_t i = 0; i < m; ++i) offset[i] = x[i] - Interval(c[i]);
  const IntervalVector spread = interval_mat_vec(contraction, offset);
  IntervalVector k(m);
  for (std::size_t i = 0; i < m; ++i) k[i] = (Interval(c[i]) - rf[i]) + spread[i];
  return k;
}

void check_dims(std::span<const Interval> x, std::span<const double> c, const PointMatrix& r, std::size_t dim) {
  if (x.size() != dim || c.size() != dim || r.rows() != dim || r.cols() != dim) {
    throw DimensionMismatch("krawczyk: dimensions differ");
  }
}

}  // namespace

IntervalVector krawczyk_map(std::span<const Interval> x, std::span<const double> c, const PointMatrix& r,
                            const IntervalFunction& f) {
  check_dims(x, c, r, f.dim);
  const auto point = to_intervals(c);
  const auto fc = f.value(point);
  return krawczyk_image(x, c, r, fc, f.jacobian(x));
}

bool contained_in_interior(std::span<const Interval> kx, std::span<const Interval> x) noexcept {
  if (kx.size() != x.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!subset_interior(kx[i], x[i])) return false;
  }
  return true;
}

KrawczykReport krawczyk_test(const IntervalFunction& f, std::span<const double> c) {
  KrawczykReport rep;
  rep.c.assign(c.begin(), c.end());
  try {
    if (c.size() != f.dim) throw DimensionMismatch("krawczyk_test: point has wrong dimension");
    const auto point = to_intervals(c);
    rep.f_at_c = f.value(point);
    rep.residual_norm = inf_norm_mag(rep.f_at_c);
    rep.R = approx_inverse(mid(f.jacobian(point)));
    rep.X = candidate_box(c, rep.R, std::span<const Interval>(rep.f_at_c));
    rep.jacobian = f.jacobian(rep.X);
    rep.KX = krawczyk_image(rep.X, c, rep.R, rep.f_at_c, rep.jacobian);
    rep.passed = contained_in_interior(rep.KX, rep.X);
    if (!rep.passed) rep.diagnostic = "K(X) is not contained in the interior of X";
  } catch (const Error& e) {
    rep.passed = false;
    rep.diagnostic = e.what();
  } catch (const std::invalid_argument& e) {
    rep.passed = false;
    rep.diagnostic = e.what();
  }
  return rep;
}

KrawczykReport krawczyk_test(const ResidualSystem& sys, std::span<const double> c) {
  return krawczyk_test(as_interval_function(sys), c);
}

}  // namespace certikraw
