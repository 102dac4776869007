#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "certikraw/gluing_system.hpp"
#include "certikraw/krawczyk.hpp"
#include "mp_newton.hpp"
#include "oracle.hpp"

using namespace certikraw;
using oracle::exact;
using oracle::Rational;

namespace {

GluingSystem bundled(const std::string& name) { return load_gluing(oracle::data_dir() / name); }

const char* const kBundled[] = {"4_1_5_1.gluing.json", "4_1.gluing.json", "4_1_5_1_conjugate.gluing.json",
                                "counterfeit.gluing.json", "m003_-3_1.gluing.json",
                                "m007_3_1_counterfeit.gluing.json", "4_1_5_1_session.gluing.json"};

std::vector<std::size_t> default_selection(const GluingSystem& sys) {
  return select_rows(sys.lambda(), sys.mandatory_rows(), static_cast<std::size_t>(sys.n), kDefaultRankDelta,
                     sys.candidate_rows());
}

struct QComplex {
  Rational re, im;
};
QComplex operator*(const QComplex& a, const QComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
QComplex qpow(QComplex z, int e) {
  QComplex r{1, 0};
  for (int i = 0; i < e; ++i) r = r * z;
  return r;
}

// Row m of the rewritten system, evaluated exactly from alpha, beta, gamma.
QComplex exact_g(const GluingSystem& sys, std::size_t m, const std::vector<QComplex>& z) {
  QComplex lhs{1, 0}, rhs{1, 0};
  for (std::size_t j = 0; j < z.size(); ++j) {
    const QComplex w{1 - z[j].re, -z[j].im};
    const int a = sys.alpha[m][j], b = sys.beta[m][j];
    (a > 0 ? lhs : rhs) = (a > 0 ? lhs : rhs) * qpow(z[j], std::abs(a));
    (b > 0 ? lhs : rhs) = (b > 0 ? lhs : rhs) * qpow(w, std::abs(b));
  }
  const int g = sys.gamma[m];
  return {lhs.re - g * rhs.re, lhs.im - g * rhs.im};
}

std::string minimal(const std::string& rows, const std::string& extra = "") {
  return R"({"name": "t", "n": 1, "k": 0, "h": 1, "rows": [)" + rows + R"(], "fillings": [{"cusp": 0, "p": 1, "q": 1}])" +
         extra + "}";
}

const std::string kRows =
    R"({"kind": "edge", "cusp": null, "a": [2], "b": [2], "c": [2]},)"
    R"({"kind": "meridian", "cusp": 0, "a": [1], "b": [0], "c": [1]},)"
    R"({"kind": "longitude", "cusp": 0, "a": [0], "b": [-1], "c": [-1]})";

}  // namespace

TEST(Parse, FigureEightFilled) {
  const GluingSystem sys = bundled("4_1_5_1.gluing.json");
  EXPECT_EQ(sys.n, 2);
  EXPECT_EQ(sys.k, 0);
  EXPECT_EQ(sys.h, 1);
  ASSERT_EQ(sys.rows.size(), 3U);
  EXPECT_EQ(sys.rows[2].kind, RowKind::filled);
  // The filled row and the selected edge row carry the published data.
  EXPECT_EQ(sys.alpha[2], (std::vector<int>{5, 9}));
  EXPECT_EQ(sys.alpha[0], (std::vector<int>{2, 2}));
  EXPECT_EQ(sys.beta[2], (std::vector<int>{0, -7}));
  EXPECT_EQ(sys.beta[0], (std::vector<int>{-1, -1}));
  EXPECT_EQ(sys.gamma[2], -1);
  EXPECT_EQ(sys.gamma[0], 1);
  // c of the filled row is 5 (0,-1) + (1,-3) = (1,-8): target 2 pi + 7 pi.
  EXPECT_EQ(sys.rows[2].c, (std::vector<int>{1, -8}));
  EXPECT_EQ(sys.arg_target_pi[2], 9);
  ASSERT_TRUE(sys.approx_solution);
  EXPECT_EQ((*sys.approx_solution)[0].re, 0x1.09478e0b57659p-3);
  EXPECT_EQ((*sys.approx_solution)[1].im, 0x1.afeb2e24accfdp+0);
}

TEST(Parse, FigureEightUnfilled) {
  const GluingSystem sys = bundled("4_1.gluing.json");
  EXPECT_EQ(sys.n, 2);
  EXPECT_EQ(sys.k, 1);
  EXPECT_EQ(sys.h, 0);
  EXPECT_FALSE(sys.approx_solution);
  ASSERT_EQ(sys.rows.size(), 4U);
  int edges = 0;
  for (const auto& r : sys.rows) edges += r.kind == RowKind::edge;
  EXPECT_EQ(edges, 2);
  EXPECT_EQ(sys.rows[2].kind, RowKind::meridian);
  EXPECT_EQ(sys.rows[3].kind, RowKind::longitude);
  for (int j = 0; j < 2; ++j) {
    int sa = 0, sb = 0, sc = 0;
    for (const auto& r : sys.rows) {
      if (r.kind != RowKind::edge) continue;
      sa += r.a[j];
      sb += r.b[j];
      sc += r.c[j];
    }
    EXPECT_EQ(sa, 2);
    EXPECT_EQ(sb, 2);
    EXPECT_EQ(sc, 2);
  }
  EXPECT_EQ(sys.mandatory_rows(), (std::vector<std::size_t>{2}));
  EXPECT_EQ(sys.candidate_rows(), (std::vector<std::size_t>{0, 1}));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_gluing(""), ParseError);
  EXPECT_THROW(parse_gluing("[1, 2]"), ParseError);
  EXPECT_THROW(parse_gluing("{\"n\": 1"), ParseError);
  EXPECT_NO_THROW(parse_gluing(minimal(kRows)));

  std::string bad = kRows;
  bad.replace(bad.find("\"a\": [2]"), 8, "\"a\": [3]");
  EXPECT_THROW(parse_gluing(minimal(bad)), ValidationError);

  std::string big = kRows;
  big.replace(big.find("\"b\": [-1]"), 9, "\"b\": [-5]");
  EXPECT_THROW(parse_gluing(minimal(big)), ValidationError);

  std::string gcd = minimal(kRows);
  gcd.replace(gcd.find("\"q\": 1"), 6, "\"q\": 2");
  gcd.replace(gcd.find("\"p\": 1"), 6, "\"p\": 4");
  EXPECT_THROW(parse_gluing(gcd), ValidationError);

  std::string zero = minimal(kRows);
  zero.replace(zero.find("\"p\": 1"), 6, "\"p\": 0");
  zero.replace(zero.find("\"q\": 1"), 6, "\"q\": 0");
  EXPECT_THROW(parse_gluing(zero), ValidationError);

  EXPECT_THROW(parse_gluing(minimal(kRows, R"(, "approx_solution": [["1", "0"]])")), ValidationError);
  EXPECT_THROW(parse_gluing(minimal(kRows, R"(, "approx_solution": [["x", "0"]])")), ParseError);
  EXPECT_THROW(parse_gluing(minimal(kRows, R"(, "approx_solution": [["0.5", "0.8"], ["0.5", "0.8"]])")),
               ValidationError);

  std::string missing = kRows.substr(0, kRows.rfind(",{"));
  EXPECT_THROW(parse_gluing(minimal(missing)), ValidationError);
  EXPECT_THROW(load_gluing(oracle::data_dir() / "does-not-exist.gluing.json"), ParseError);
}

TEST(Parse, AcceptsDecimalAndHexShapes) {
  const auto sys = parse_gluing(minimal(kRows, R"(, "approx_solution": [["0x1p-1", 0.875]])"));
  EXPECT_EQ((*sys.approx_solution)[0].re, 0.5);
  EXPECT_EQ((*sys.approx_solution)[0].im, 0.875);
}

TEST(Derive, IndependentRecomputationOnBundledInputs) {
  for (const char* name : kBundled) {
    const GluingSystem sys = bundled(name);
    std::map<int, CuspFilling> fill;
    for (const auto& f : sys.fillings) fill[f.cusp] = f;
    // Rebuild the working rows by hand: edges, unfilled cusp pairs, filled rows.
    std::vector<std::pair<EquationRow, bool>> expect;  // row, is_unfilled_cusp
    for (const auto& r : sys.input_rows)
      if (r.kind == RowKind::edge) expect.push_back({r, false});
    const int cusps = sys.k + sys.h;
    auto find = [&](int cusp, RowKind kind) {
      for (const auto& r : sys.input_rows)
        if (r.kind == kind && r.cusp == cusp) return r;
      throw std::logic_error("row missing");
    };
    for (int t = 0; t < cusps; ++t) {
      if (fill.count(t)) continue;
      expect.push_back({find(t, RowKind::meridian), true});
      expect.push_back({find(t, RowKind::longitude), true});
    }
    for (int t = 0; t < cusps; ++t) {
      if (!fill.count(t)) continue;
      const auto mu = find(t, RowKind::meridian), la = find(t, RowKind::longitude);
      EquationRow r{RowKind::filled, t, {}, {}, {}};
      for (int j = 0; j < sys.n; ++j) {
        r.a.push_back(fill[t].p * mu.a[j] + fill[t].q * la.a[j]);
        r.b.push_back(fill[t].p * mu.b[j] + fill[t].q * la.b[j]);
        r.c.push_back(fill[t].p * mu.c[j] + fill[t].q * la.c[j]);
      }
      expect.push_back({r, false});
    }
    ASSERT_EQ(expect.size(), sys.rows.size()) << name;
    for (std::size_t m = 0; m < expect.size(); ++m) {
      const auto& [row, unfilled] = expect[m];
      EXPECT_EQ(row.a, sys.rows[m].a) << name;
      EXPECT_EQ(row.c, sys.rows[m].c) << name;
      int sum_c = 0, parity = 0;
      for (int j = 0; j < sys.n; ++j) {
        EXPECT_EQ(sys.alpha[m][j], row.a[j] - row.c[j]);
        EXPECT_EQ(sys.beta[m][j], row.c[j] - row.b[j]);
        sum_c += row.c[j];
        parity += std::abs(row.c[j]) % 2;
      }
      EXPECT_EQ(sys.gamma[m], parity % 2 ? -1 : 1);
      EXPECT_EQ(sys.arg_target_pi[m], (unfilled ? 0 : 2) - sum_c);
    }
  }
}

TEST(Residual, FigureEightClosedForm) {
  const GluingSystem sys = bundled("4_1_5_1.gluing.json");
  const auto sel = default_selection(sys);
  ASSERT_EQ(sel, (std::vector<std::size_t>{2, 0}));
  const ResidualSystem res(sys, sel);
  auto gen = oracle::rng(40);
  std::uniform_int_distribution<int> num(-40, 40);
  for (int t = 0; t < 200; ++t) {
    const double z1r = num(gen) / 16.0, z1i = num(gen) / 16.0, z2r = num(gen) / 16.0, z2i = num(gen) / 16.0;
    const QComplex z1{exact(z1r), exact(z1i)}, z2{exact(z2r), exact(z2i)};
    const QComplex w1{1 - z1.re, -z1.im}, w2{1 - z2.re, -z2.im};
    // g1 = z1^5 z2^9 + (1 - z2)^7, g2 = z1^2 z2^2 - (1 - z1)(1 - z2).
    const QComplex a = qpow(z1, 5) * qpow(z2, 9), b = qpow(w2, 7);
    const QComplex c = qpow(z1, 2) * qpow(z2, 2), d = w1 * w2;
    const Rational want[4] = {a.re + b.re, a.im + b.im, c.re - d.re, c.im - d.im};
    const std::vector<double> x = {z1r, z1i, z2r, z2i};
    const auto fi = res.f(std::span<const Interval>(to_intervals(x)));
    for (int i = 0; i < 4; ++i) ASSERT_TRUE(oracle::contains(fi[i], want[i]));
  }
}

TEST(Residual, PointEvaluationMatchesRationalOracle) {
  auto gen = oracle::rng(41);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  for (const char* name : kBundled) {
    const GluingSystem sys = bundled(name);
    const auto sel = default_selection(sys);
    const ResidualSystem res(sys, sel);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> x(res.dim());
      for (auto& v : x) v = d(gen);
      std::vector<QComplex> z;
      for (std::size_t j = 0; j < res.shapes(); ++j) z.push_back({exact(x[2 * j]), exact(x[2 * j + 1])});
      const auto fp = res.f(x);
      const auto fi = res.f(std::span<const Interval>(to_intervals(x)));
      for (std::size_t k = 0; k < sel.size(); ++k) {
        const QComplex g = exact_g(sys, sel[k], z);
        ASSERT_TRUE(oracle::contains(fi[2 * k], g.re)) << name;
        ASSERT_TRUE(oracle::contains(fi[2 * k + 1], g.im)) << name;
        ASSERT_TRUE(fi[2 * k].contains(fp[2 * k]) && fi[2 * k + 1].contains(fp[2 * k + 1])) << name;
      }
    }
  }
}

TEST(Residual, DegenerateRowIsZero) {
  ResidualSystem::Row row;
  row.alpha_plus = row.alpha_minus = row.beta_plus = row.beta_minus = {0};
  row.gamma = 1;
  const ResidualSystem res(std::vector<ResidualSystem::Row>{row});
  const auto f = res.f(std::vector<double>{0.3, 0.7});
  EXPECT_EQ(f[0], 0.0);
  EXPECT_EQ(f[1], 0.0);
}

TEST(Residual, SmallAtPublishedApproximation) {
  const GluingSystem sys = bundled("4_1_5_1.gluing.json");
  const ResidualSystem res(sys, default_selection(sys));
  const auto f = res.f(flatten(*sys.approx_solution));
  EXPECT_LT(inf_norm_point(f), 1e-10);
}

TEST(Residual, IntervalEnclosureContainsSamples) {
  auto gen = oracle::rng(42);
  std::uniform_real_distribution<double> s(0, 1);
  for (const char* name : kBundled) {
    const GluingSystem sys = bundled(name);
    const ResidualSystem res(sys, default_selection(sys));
    std::vector<double> c(res.dim());
    if (sys.approx_solution) c = flatten(*sys.approx_solution);
    else c = flatten(regular_seed(res.shapes()));
    IntervalVector box;
    for (double v : c) box.emplace_back(v - 1e-3, v + 1e-3);
    const auto enc = res.f_with_jacobian(box);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> x(res.dim());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = box[i].lo() + s(gen) * (box[i].hi() - box[i].lo());
      const auto fx = res.f(x);
      const auto jx = res.jacobian(x);
      for (std::size_t i = 0; i < x.size(); ++i) {
        ASSERT_TRUE(enc.value[i].contains(fx[i])) << name;
        for (std::size_t k = 0; k < x.size(); ++k) ASSERT_TRUE(enc.jacobian(i, k).contains(jx(i, k))) << name;
      }
    }
  }
}

TEST(Newton, FromPublishedApproximation) {
  const GluingSystem sys = bundled("4_1_5_1.gluing.json");
  const ResidualSystem res(sys, default_selection(sys));
  const auto r = newton_refine(res, flatten(*sys.approx_solution));
  // z^9 is ~1e6 here, so the floor is the width of f's own enclosure at x.
  const auto at_x = res.f_with_jacobian(to_intervals(r.x)).value;
  double floor = 0.0;
  for (const auto& v : at_x) floor = std::max(floor, width(v));
  EXPECT_LE(inf_norm_point(res.f(r.x)), floor);
  EXPECT_LT(floor, 1e-9);
  const auto polished = oracle::mp_polish(res, r.x);
  ASSERT_TRUE(polished.ok);
  for (std::size_t i = 0; i < r.x.size(); ++i)
    EXPECT_LT(std::fabs(static_cast<double>(polished.x[i]) - r.x[i]), 1e-14);
  EXPECT_EQ(r.residuals.size(), 6U);
}

TEST(Newton, LinearSystemFixedAfterOneStep) {
  // g(z) = z - 1 has the representable root 1.
  ResidualSystem::Row row;
  row.alpha_plus = {1};
  row.alpha_minus = {0};
  row.beta_plus = {0};
  row.beta_minus = {0};
  const ResidualSystem res(std::vector<ResidualSystem::Row>{row});
  const auto r = newton_refine(res, {2.0, 0.5}, 1);
  EXPECT_EQ(r.x, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(newton_refine(res, r.x, 3).x, r.x);
}

TEST(Newton, UnfilledFigureEightFromRegularSeed) {
  const GluingSystem sys = bundled("4_1.gluing.json");
  const ResidualSystem res(sys, default_selection(sys));
  const auto r = newton_refine(res, flatten(ShapeVector(2, Shape{0.5, 0.866})));
  for (int j = 0; j < 2; ++j) {
    EXPECT_NEAR(r.x[2 * j], 0.5, 1e-14);
    EXPECT_NEAR(r.x[2 * j + 1], std::sqrt(3.0) / 2, 1e-14);
  }
  const auto d = damped_newton(res, flatten(regular_seed(2)));
  EXPECT_NEAR(d.x[1], std::sqrt(3.0) / 2, 1e-14);
}

TEST(Newton, ResidualNonIncreasingUpToRoundoff) {
  for (const char* name : kBundled) {
    const GluingSystem sys = bundled(name);
    const ResidualSystem res(sys, default_selection(sys));
    PointVector x = sys.approx_solution ? flatten(*sys.approx_solution) : damped_newton(res, flatten(regular_seed(res.shapes()))).x;
    const auto r = newton_refine(res, x);
    // Once at the rounding floor the residual may wobble within f's own
    // evaluation error; above it, each step must not increase it.
    const auto floor_box = res.f(std::span<const Interval>(to_intervals(r.x)));
    double noise = 0;
    for (const auto& v : floor_box) noise = std::max(noise, width(v));
    for (std::size_t i = 1; i < r.residuals.size(); ++i) {
      EXPECT_LE(r.residuals[i], std::max(r.residuals[i - 1], 4 * noise)) << name << " step " << i;
    }
  }
}

TEST(Newton, SingularJacobian) {
  // g(z) = z^2 at z = 0: the Jacobian vanishes.
  ResidualSystem::Row row;
  row.alpha_plus = {2};
  row.alpha_minus = {0};
  row.beta_plus = {0};
  row.beta_minus = {0};
  row.gamma = -1;  // z^2 + 1
  const ResidualSystem res(std::vector<ResidualSystem::Row>{row});
  EXPECT_THROW(newton_refine(res, {0.0, 0.0}), NewtonSingular);
}

TEST(Orientation, Examples) {
  const std::vector<ComplexInterval> good = {{Interval(0.12, 0.13), Interval(0.37, 0.38)},
                                             {Interval(4.6, 4.7), Interval(1.68, 1.69)}};
  EXPECT_TRUE(check_orientation(good));
  EXPECT_FALSE(check_orientation(std::vector<ComplexInterval>{{Interval(0.5), Interval(-0.001, 0.5)}}));
  EXPECT_FALSE(check_orientation(std::vector<ComplexInterval>{{Interval(0.5), Interval(0.0, 0.5)}}));
}

namespace {

std::vector<ComplexInterval> certified_shapes(const GluingSystem& sys, const std::vector<std::size_t>& sel) {
  const ResidualSystem res(sys, sel);
  const auto x = newton_refine(res, flatten(*sys.approx_solution)).x;
  const auto rep = krawczyk_test(res, x);
  EXPECT_TRUE(rep.passed);
  return id_R_to_C(rep.KX);
}

}  // namespace

TEST(Argument, FilledFigureEightPasses) {
  const GluingSystem sys = bundled("4_1_5_1.gluing.json");
  const auto sel = default_selection(sys);
  const auto z = certified_shapes(sys, sel);
  const auto chk = check_argument(sys, sel, z);
  EXPECT_TRUE(chk.passed);
  ASSERT_EQ(chk.rows.size(), 1U);  // the edge row is skipped
  EXPECT_EQ(chk.rows[0].row, 2U);
  EXPECT_EQ(chk.rows[0].target_pi, 9);
  EXPECT_TRUE(oracle::contains(chk.rows[0].sum, oracle::pi() * 9));
}

TEST(Argument, CounterfeitFails) {
  for (const char* name : {"counterfeit.gluing.json", "m007_3_1_counterfeit.gluing.json"}) {
    const GluingSystem sys = bundled(name);
    const auto sel = default_selection(sys);
    const auto chk = check_argument(sys, sel, certified_shapes(sys, sel));
    EXPECT_FALSE(chk.passed) << name;
  }
}

TEST(Argument, FatBoxFails) {
  const GluingSystem sys = bundled("4_1_5_1.gluing.json");
  const auto sel = default_selection(sys);
  const std::vector<ComplexInterval> fat = {{Interval(-0.5, 0.6), Interval(0.1, 1.0)},
                                            {Interval(4.0, 5.0), Interval(1.0, 2.0)}};
  EXPECT_FALSE(check_argument(sys, sel, fat).passed);
  // A box straddling the origin cannot be handled at all.
  const std::vector<ComplexInterval> origin = {{Interval(-0.1, 0.1), Interval(-0.1, 0.1)},
                                               {Interval(4.6), Interval(1.7)}};
  EXPECT_FALSE(check_argument(sys, sel, origin).passed);
}

TEST(Argument, MonotoneUnderBisection) {
  for (const char* name : {"4_1_5_1.gluing.json", "m003_-3_1.gluing.json"}) {
    const GluingSystem sys = bundled(name);
    const auto sel = default_selection(sys);
    const ResidualSystem res(sys, sel);
    const auto x = newton_refine(res, flatten(*sys.approx_solution)).x;
    const auto rep = krawczyk_test(res, x);
    ASSERT_TRUE(rep.passed);
    IntervalVector box = rep.X;
    ASSERT_TRUE(check_argument(sys, sel, id_R_to_C(box)).passed);
    // Halve one coordinate at a time, keeping the half that holds the root.
    for (int round = 0; round < 12; ++round) {
      const std::size_t i = static_cast<std::size_t>(round) % box.size();
      const double m = mid(box[i]);
      box[i] = x[i] <= m ? Interval(box[i].lo(), m) : Interval(m, box[i].hi());
      EXPECT_TRUE(check_argument(sys, sel, id_R_to_C(box)).passed) << name << " round " << round;
    }
  }
}

TEST(Seeds, RegularSeedAndFlatten) {
  const auto z = regular_seed(3);
  ASSERT_EQ(z.size(), 3U);
  EXPECT_EQ(z[2].re, 0.5);
  EXPECT_EQ(z[2].im, std::sqrt(3.0) / 2);
  EXPECT_EQ(unflatten(flatten(z)), z);
}
