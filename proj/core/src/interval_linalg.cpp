#include "certikraw/interval_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace certikraw {

namespace {

constexpr double kPivotFloor = 1e-300;

}  // namespace

PointMatrix approx_inverse(const PointMatrix& a) {
  if (!a.square()) throw DimensionMismatch("approx_inverse: matrix is not square");
  const std::size_t n = a.rows();
  PointMatrix work = a;
  PointMatrix inv = PointMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t i = col + 1; i < n; ++i) {
      if (std::fabs(work(i, col)) > std::fabs(work(pivot, col))) pivot = i;
    }
    const double p = work(pivot, col);
    if (!(std::fabs(p) >= kPivotFloor)) throw SingularApprox();
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = work(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work(i, j) -= f * work(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(inv(i, j))) throw SingularApprox();
    }
  }
  return inv;
}

PointVector solve_point(PointMatrix a, PointVector b) {
  if (!a.square() || a.rows() != b.size()) throw DimensionMismatch("solve_point: dimension mismatch");
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t i = col + 1; i < n; ++i) {
      if (std::fabs(a(i, col)) > std::fabs(a(pivot, col))) pivot = i;
    }
    if (!(std::fabs(a(pivot, col)) >= kPivotFloor)) throw SingularApprox();
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a(i, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      b[i] -= f * b[col];
    }
  }
  PointVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
    if (!std::isfinite(x[i])) throw SingularApprox();
  }
  return x;
}

PointMatrix multiply(const PointMatrix& a, const PointMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("multiply: inner dimensions differ");
  PointMatrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

IntervalVector interval_mat_vec(const IntervalMatrix& a, std::span<const Interval> v) {
  if (a.cols() != v.size()) throw DimensionMismatch("interval_mat_vec: dimension mismatch");
  IntervalVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Interval s;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

IntervalVector interval_mat_vec(const PointMatrix& r, std::span<const Interval> v) {
  if (r.cols() != v.size()) throw DimensionMismatch("interval_mat_vec: dimension mismatch");
  IntervalVector out(r.rows());
  for (std::size_t i = 0; i < r.rows(); ++i) {
    Interval s;
    for (std::size_t j = 0; j < r.cols(); ++j) s += Interval(r(i, j)) * v[j];
    out[i] = s;
  }
  return out;
}

IntervalMatrix identity_minus_product(const PointMatrix& r, const IntervalMatrix& a) {
  if (r.cols() != a.rows() || r.rows() != a.cols()) {
    throw DimensionMismatch("identity_minus_product: dimension mismatch");
  }
  const std::size_t n = r.rows();
  IntervalMatrix out(n, a.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Interval s;
      for (std::size_t k = 0; k < r.cols(); ++k) s += Interval(r(i, k)) * a(k, j);
      out(i, j) = Interval(i == j ? 1.0 : 0.0) - s;
    }
  }
  return out;
}

double inf_norm_point(std::span<const double> v) noexcept {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double inf_norm_mag(std::span<const Interval> v) noexcept {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, mag(x));
  return m;
}

PointMatrix mid(const IntervalMatrix& a) {
  PointMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = mid(a(i, j));
  }
  return m;
}

PointVector mid(std::span<const Interval> v) {
  PointVector m(v.size());
  std::transform(v.begin(), v.end(), m.begin(), [](const Interval& x) { return mid(x); });
  return m;
}

IntervalVector to_intervals(std::span<const double> v) {
  IntervalVector out;
  out.reserve(v.size());
  for (double x : v) out.emplace_back(x);
  return out;
}

std::vector<double> singular_values(const PointMatrix& a) {
  // Work on whichever of A, A^T has fewer columns; the nonzero singular values agree.
  const bool transpose = a.rows() < a.cols();
  const std::size_t len = transpose ? a.cols() : a.rows();
  const std::size_t ncols = transpose ? a.rows() : a.cols();
  std::vector<std::vector<double>> cols(ncols, std::vector<double>(len));
  for (std::size_t c = 0; c < ncols; ++c) {
    for (std::size_t i = 0; i < len; ++i) cols[c][i] = transpose ? a(c, i) : a(i, c);
  }

  constexpr double kEps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < ncols; ++p) {
      for (std::size_t q = p + 1; q < ncols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
          alpha += cols[p][i] * cols[p][i];
          beta += cols[q][i] * cols[q][i];
          gamma += cols[p][i] * cols[q][i];
        }
        if (gamma == 0.0 || std::fabs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < len; ++i) {
          const double xp = cols[p][i];
          const double xq = cols[q][i];
          cols[p][i] = c * xp - s * xq;
          cols[q][i] = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(ncols);
  for (std::size_t c = 0; c < ncols; ++c) {
    double s = 0.0;
    for (double x : cols[c]) s += x * x;
    sv[c] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double min_singular_value(const PointMatrix& a, std::span<const std::size_t> rows) {
  if (rows.empty()) return 0.0;
  PointMatrix sub(rows.size(), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) sub(i, j) = a(rows[i], j);
  }
  // A k x N submatrix with k > N cannot have full row rank.
  if (rows.size() > a.cols()) return 0.0;
  return singular_values(sub).back();
}

std::vector<std::size_t> select_rows(const PointMatrix& lambda, std::span<const std::size_t> mandatory,
                                     std::size_t target_rank, double delta,
                                     std::span<const std::size_t> candidates) {
  std::vector<std::size_t> selected(mandatory.begin(), mandatory.end());
  std::vector<std::size_t> sorted = selected;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw RankSelectionFailed("mandatory rows contain duplicates");
  }
  for (std::size_t r : selected) {
    if (r >= lambda.rows()) throw RankSelectionFailed("mandatory row index out of range");
  }
  if (selected.size() > target_rank) throw RankSelectionFailed("more mandatory rows than the target rank");
  if (!selected.empty() && !(min_singular_value(lambda, selected) > delta)) {
    throw RankSelectionFailed("mandatory rows are numerically rank deficient");
  }

  std::vector<std::size_t> pool;
  if (candidates.empty()) {
    for (std::size_t r = 0; r < lambda.rows(); ++r) pool.push_back(r);
  } else {
    pool.assign(candidates.begin(), candidates.end());
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::erase_if(pool, [&](std::size_t r) {
    return r >= lambda.rows() || std::binary_search(sorted.begin(), sorted.end(), r);
  });

  while (selected.size() < target_rank) {
    double best_score = delta;
    std::size_t best = lambda.rows();
    for (std::size_t r : pool) {
      std::vector<std::size_t> trial = selected;
      trial.push_back(r);
      const double score = min_singular_value(lambda, trial);
      if (score > best_score) {  // strict: an equal score keeps the lower index
        best_score = score;
        best = r;
      }
    }
    if (best == lambda.rows()) {
      throw RankSelectionFailed("no candidate row keeps the selection above the rank threshold (selected " +
                                std::to_string(selected.size()) + " of " + std::to_string(target_rank) + ")");
    }
    selected.push_back(best);
    std::erase(pool, best);
  }
  return selected;
}

}  // namespace certikraw
