#pragma once

// Gluing-equation data for a triangulated 3-manifold and the reduced
// polynomial system built from it.
//
// Each equation row m carries integer coefficients a, b, c (one per
// tetrahedron) for the three shape parameters z, 1/(1-z), (z-1)/z. After the
// usual rewrite the row reads
//
//   prod_j z_j^alpha_j (1 - z_j)^beta_j = gamma,   alpha = a - c, beta = c - b,
//   gamma = prod_j (-1)^c_j,
//
// together with the argument condition
//
//   sum_j alpha_j arg z_j + beta_j arg(1 - z_j) = eps - pi sum_j c_j
//
// where eps is 2 pi for edge and filled-cusp rows and 0 for unfilled cusps.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "certikraw/autodiff.hpp"
#include "certikraw/complex_interval.hpp"
#include "certikraw/interval_linalg.hpp"

namespace certikraw {

// `filled` rows never appear in input files; they are the p mu + q lambda
// combinations produced for filled cusps.
enum class RowKind { edge, meridian, longitude, filled };

std::string_view to_string(RowKind kind) noexcept;

struct EquationRow {
  RowKind kind = RowKind::edge;
  std::optional<int> cusp;
  std::vector<int> a, b, c;

  friend bool operator==(const EquationRow&, const EquationRow&) = default;
};

struct CuspFilling {
  int cusp = 0;
  int p = 0;
  int q = 0;

  friend bool operator==(const CuspFilling&, const CuspFilling&) = default;
};

using Shape = Complex<double>;
using ShapeVector = std::vector<Shape>;

struct GluingSystem {
  std::string name;
  int n = 0;
  int k = 0;
  int h = 0;
  std::vector<EquationRow> input_rows;  // as read
  std::vector<CuspFilling> fillings;
  std::optional<ShapeVector> approx_solution;

  // Working rows: the n edge rows, then meridian and longitude of each
  // unfilled cusp (ascending cusp index), then one combined row per filled
  // cusp (ascending cusp index).
  std::vector<EquationRow> rows;

  // Derived per working row.
  std::vector<std::vector<int>> alpha;
  std::vector<std::vector<int>> beta;
  std::vector<int> gamma;
  // The argument target divided by pi (an integer).
  std::vector<std::int64_t> arg_target_pi;

  // (n + 2k + h) x 2n matrix with row m = [alpha_m | beta_m].
  [[nodiscard]] PointMatrix lambda() const;

  // Filled-cusp rows and the meridian of every unfilled cusp.
  [[nodiscard]] std::vector<std::size_t> mandatory_rows() const;

  // Rows the rank heuristic may add: the edge rows.
  [[nodiscard]] std::vector<std::size_t> candidate_rows() const;
};

// Throws ParseError on malformed input, ValidationError on a broken invariant.
GluingSystem parse_gluing(std::string_view text);
GluingSystem load_gluing(const std::filesystem::path& path);

// Recomputes rows, alpha, beta, gamma and arg_target_pi from input_rows and
// fillings after validating them.
void derive(GluingSystem& sys);

// Reduced square system on the selected rows. Row m becomes
//   g_m(z) = prod z^alpha+ (1 - z)^beta+ - gamma prod z^alpha- (1 - z)^beta-
// and f : R^2n -> R^2n is g with z_j = x_{2j} + i x_{2j+1}. Immutable once built.
class ResidualSystem {
 public:
  struct Row {
    std::vector<unsigned> alpha_plus, alpha_minus, beta_plus, beta_minus;
    int gamma = 1;
  };

  ResidualSystem(const GluingSystem& sys, std::vector<std::size_t> selection);
  explicit ResidualSystem(std::vector<Row> rows);

  [[nodiscard]] std::size_t shapes() const noexcept { return n_; }
  [[nodiscard]] std::size_t dim() const noexcept { return 2 * n_; }
  [[nodiscard]] const std::vector<Row>& rows() const noexcept { return rows_; }
  [[nodiscard]] const std::vector<std::size_t>& selection() const noexcept { return selection_; }

  // g over any complex-like component type; `one` is the unit of that type.
  template <class T>
  std::vector<Complex<T>> g(std::span<const Complex<T>> z, const Complex<T>& one) const;

  [[nodiscard]] ShapeVector g(const ShapeVector& z) const;
  [[nodiscard]] PointVector f(std::span<const double> x) const;
  [[nodiscard]] IntervalVector f(std::span<const Interval> x) const;
  [[nodiscard]] PointMatrix jacobian(std::span<const double> x) const;

  // f(X) and an enclosure of f'(X), by interval AD.
  struct Enclosure {
    IntervalVector value;
    IntervalMatrix jacobian;
  };
  [[nodiscard]] Enclosure f_with_jacobian(std::span<const Interval> x) const;

 private:
  std::size_t n_ = 0;
  std::vector<Row> rows_;
  std::vector<std::size_t> selection_;
};

template <class T>
std::vector<Complex<T>> ResidualSystem::g(std::span<const Complex<T>> z, const Complex<T>& one) const {
  if (z.size() != n_) throw DimensionMismatch("residual: expected " + std::to_string(n_) + " shapes");
  std::vector<Complex<T>> w;  // 1 - z_j
  w.reserve(n_);
  for (const auto& zj : z) w.push_back(one - zj);

  // Product of the nonzero powers; `one` when every exponent is zero.
  auto monomial = [&](const std::vector<unsigned>& za, const std::vector<unsigned>& wb) {
    std::optional<Complex<T>> acc;
    auto times = [&](const Complex<T>& factor) { acc = acc ? *acc * factor : factor; };
    for (std::size_t j = 0; j < n_; ++j) {
      if (za[j] != 0) times(pow(z[j], za[j], one));
      if (wb[j] != 0) times(pow(w[j], wb[j], one));
    }
    return acc ? *acc : one;
  };

  std::vector<Complex<T>> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    const Complex<T> lhs = monomial(row.alpha_plus, row.beta_plus);
    const Complex<T> rhs = monomial(row.alpha_minus, row.beta_minus);
    out.push_back(row.gamma == 1 ? lhs - rhs : lhs + rhs);
  }
  return out;
}

struct NewtonResult {
  PointVector x;
  std::vector<double> residuals;  // ||f||_inf before each step and after the last
};

// Plain Newton iteration on f, returning the iterate with the smallest
// residual seen. Throws NewtonSingular when a step cannot be solved and
// NewtonDiverged after the residual grows three times in a row while above
// the rounding noise of f (the width of f on the point box).
NewtonResult newton_refine(const ResidualSystem& sys, PointVector x0, int iters = 5);

// Newton with step halving (up to `halvings` per step), used when no seed is
// supplied. Stops early once the residual stops improving.
NewtonResult damped_newton(const ResidualSystem& sys, PointVector x0, int iters = 50, int halvings = 10);

// z_j = 1/2 + (sqrt 3 / 2) i for every j.
ShapeVector regular_seed(std::size_t n);

PointVector flatten(const ShapeVector& z);
ShapeVector unflatten(std::span<const double> x);

// Every imaginary part has a strictly positive lower endpoint.
bool check_orientation(std::span<const ComplexInterval> z);

// Per-row argument check over the selected non-edge rows.
struct ArgumentRow {
  std::size_t row = 0;
  Interval sum;            // enclosure of the argument sum
  std::int64_t target_pi;  // target / pi
  bool passed = false;
};

struct ArgumentCheck {
  bool passed = false;
  std::vector<ArgumentRow> rows;
};

// For each selected row that is not an edge row, encloses the argument sum
// over the boxes and requires the target to be the only member of
// target + 2 pi Z inside it. Any failure, including atan2 at the origin,
// yields passed = false.
ArgumentCheck check_argument(const GluingSystem& sys, std::span<const std::size_t> selection,
                             std::span<const ComplexInterval> z);

}  // namespace certikraw
