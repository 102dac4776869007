#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "certikraw/interval.hpp"

namespace certikraw {

// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n, T{0.0});
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1.0};
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  [[nodiscard]] std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using PointVector = std::vector<double>;
using IntervalVector = std::vector<Interval>;
using PointMatrix = Matrix<double>;
using IntervalMatrix = Matrix<Interval>;

// Floating-point inverse by Gauss-Jordan elimination with partial pivoting.
// Not rigorous; the Krawczyk test proves R nonsingular after the fact.
// Throws SingularApprox when a pivot falls below 1e-300 in magnitude.
PointMatrix approx_inverse(const PointMatrix& a);

// Solves a x = b in floating point (partial pivoting). Same failure rule as
// approx_inverse.
PointVector solve_point(PointMatrix a, PointVector b);

PointMatrix multiply(const PointMatrix& a, const PointMatrix& b);

// Enclosure of A v.
IntervalVector interval_mat_vec(const IntervalMatrix& a, std::span<const Interval> v);

// Enclosure of R v for a point matrix R.
IntervalVector interval_mat_vec(const PointMatrix& r, std::span<const Interval> v);

// Enclosure of I - R A.
IntervalMatrix identity_minus_product(const PointMatrix& r, const IntervalMatrix& a);

// max |v_i|; exact, so no rounding is needed.
double inf_norm_point(std::span<const double> v) noexcept;

// max over i of mag(v_i).
double inf_norm_mag(std::span<const Interval> v) noexcept;

PointMatrix mid(const IntervalMatrix& a);
PointVector mid(std::span<const Interval> v);

IntervalVector to_intervals(std::span<const double> v);

// Singular values of a (any shape), largest first, by one-sided Jacobi
// rotations in plain floating point.
std::vector<double> singular_values(const PointMatrix& a);

// Smallest singular value of the rows of `a` listed in `rows`.
double min_singular_value(const PointMatrix& a, std::span<const std::size_t> rows);

// Greedy row selection: starting from the mandatory rows, repeatedly add the
// candidate whose inclusion maximises the smallest singular value of the
// selected submatrix, accepting it only when that value exceeds delta. Ties go
// to the lowest row index. When `candidates` is empty every non-mandatory row
// is a candidate. Returns the mandatory rows (in the given order) followed by
// the added rows in the order they were chosen, or throws RankSelectionFailed.
std::vector<std::size_t> select_rows(const PointMatrix& lambda, std::span<const std::size_t> mandatory,
                                     std::size_t target_rank, double delta,
                                     std::span<const std::size_t> candidates = {});

inline constexpr double kDefaultRankDelta = 1e-8;

}  // namespace certikraw
