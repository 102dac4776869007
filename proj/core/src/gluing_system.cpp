#include "certikraw/gluing_system.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "certikraw/rigorous_arg.hpp"
#include "json.hpp"

namespace certikraw {

using json = nlohmann::json;

std::string_view to_string(RowKind kind) noexcept {
  switch (kind) {
    case RowKind::edge: return "edge";
    case RowKind::meridian: return "meridian";
    case RowKind::longitude: return "longitude";
    case RowKind::filled: return "filled";
  }
  return "edge";
}

namespace {

constexpr int kMaxCuspCoefficient = 4;

RowKind parse_kind(const std::string& s) {
  if (s == "edge") return RowKind::edge;
  if (s == "meridian") return RowKind::meridian;
  if (s == "longitude") return RowKind::longitude;
  throw ValidationError("unknown row kind \"" + s + "\"");
}

int get_int(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  if (!it->is_number_integer()) throw ParseError(std::string("field \"") + key + "\" must be an integer");
  const auto v = it->get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ValidationError(std::string("field \"") + key + "\" out of range");
  }
  return static_cast<int>(v);
}

std::vector<int> get_int_list(const json& obj, const char* key, int n) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) throw ParseError(std::string("row field \"") + key + "\" must be a list");
  if (static_cast<int>(it->size()) != n) {
    throw ValidationError(std::string("row field \"") + key + "\" must have " + std::to_string(n) + " entries");
  }
  std::vector<int> out;
  for (const auto& e : *it) {
    if (!e.is_number_integer()) throw ParseError(std::string("row field \"") + key + "\" must hold integers");
    const auto v = e.get<std::int64_t>();
    if (std::llabs(v) > 1000000) throw ValidationError("coefficient out of range");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// Numbers, or strings accepted by strtod (decimal or hex-float).
double get_real(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
      throw ParseError("cannot read \"" + s + "\" as a real number");
    }
    return x;
  }
  throw ParseError("approximate solution entries must be numbers or strings");
}

void validate(const GluingSystem& sys) {
  const int n = sys.n;
  if (n <= 0) throw ValidationError("n must be positive");
  if (sys.k < 0 || sys.h < 0) throw ValidationError("k and h must be nonnegative");
  const int cusps = sys.k + sys.h;

  std::vector<int> sum_a(n, 0), sum_b(n, 0), sum_c(n, 0);
  int edges = 0;
  std::map<int, std::pair<int, int>> peripheral;  // cusp -> (#meridian, #longitude)
  for (std::size_t m = 0; m < sys.input_rows.size(); ++m) {
    const auto& row = sys.input_rows[m];
    const std::string where = "row " + std::to_string(m);
    if (row.kind == RowKind::edge) {
      ++edges;
      for (int j = 0; j < n; ++j) {
        for (int v : {row.a[j], row.b[j], row.c[j]}) {
          if (v < 0 || v > 2) throw ValidationError(where + ": edge coefficient " + std::to_string(v) + " not in {0,1,2}");
        }
        sum_a[j] += row.a[j];
        sum_b[j] += row.b[j];
        sum_c[j] += row.c[j];
      }
      continue;
    }
    if (row.kind == RowKind::filled) throw ValidationError(where + ": unexpected row kind");
    if (!row.cusp) throw ValidationError(where + ": cusp rows need a cusp index");
    if (*row.cusp < 0 || *row.cusp >= cusps) throw ValidationError(where + ": cusp index out of range");
    for (int j = 0; j < n; ++j) {
      for (int v : {row.a[j], row.b[j], row.c[j]}) {
        if (std::abs(v) > kMaxCuspCoefficient) {
          throw ValidationError(where + ": cusp coefficient " + std::to_string(v) + " exceeds 4 in magnitude");
        }
      }
    }
    auto& count = peripheral[*row.cusp];
    (row.kind == RowKind::meridian ? count.first : count.second) += 1;
  }
  if (edges != n) throw ValidationError("expected " + std::to_string(n) + " edge rows, found " + std::to_string(edges));
  for (int j = 0; j < n; ++j) {
    if (sum_a[j] != 2 || sum_b[j] != 2 || sum_c[j] != 2) {
      throw ValidationError("edge coefficients of tetrahedron " + std::to_string(j) + " do not each sum to 2");
    }
  }
  for (int t = 0; t < cusps; ++t) {
    const auto it = peripheral.find(t);
    if (it == peripheral.end() || it->second != std::pair{1, 1}) {
      throw ValidationError("cusp " + std::to_string(t) + " needs exactly one meridian and one longitude row");
    }
  }

  if (static_cast<int>(sys.fillings.size()) != sys.h) {
    throw ValidationError("expected " + std::to_string(sys.h) + " fillings");
  }
  std::vector<bool> filled(cusps, false);
  for (const auto& fl : sys.fillings) {
    if (fl.cusp < 0 || fl.cusp >= cusps) throw ValidationError("filling cusp index out of range");
    if (filled[fl.cusp]) throw ValidationError("cusp " + std::to_string(fl.cusp) + " filled twice");
    filled[fl.cusp] = true;
    if (fl.p == 0 && fl.q == 0) throw ValidationError("filling (0,0) is not a slope");
    if (std::gcd(fl.p, fl.q) != 1) throw ValidationError("filling coefficients must be coprime");
  }

  if (sys.approx_solution) {
    if (static_cast<int>(sys.approx_solution->size()) != n) {
      throw ValidationError("approximate solution must have n shapes");
    }
    for (const auto& z : *sys.approx_solution) {
      if (!std::isfinite(z.re) || !std::isfinite(z.im)) throw ValidationError("non-finite shape");
      if (z.im == 0.0 && (z.re == 0.0 || z.re == 1.0)) throw ValidationError("degenerate shape (0 or 1)");
    }
  }
}

const EquationRow& find_row(const GluingSystem& sys, RowKind kind, int cusp) {
  for (const auto& row : sys.input_rows) {
    if (row.kind == kind && row.cusp == cusp) return row;
  }
  throw ValidationError("missing peripheral row");
}

int checked_int(long long v) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ValidationError("filled-cusp coefficient overflows");
  }
  return static_cast<int>(v);
}

}  // namespace

void derive(GluingSystem& sys) {
  validate(sys);
  const int n = sys.n;
  const int cusps = sys.k + sys.h;
  std::vector<const CuspFilling*> filling_of(cusps, nullptr);
  for (const auto& fl : sys.fillings) filling_of[fl.cusp] = &fl;

  sys.rows.clear();
  for (const auto& row : sys.input_rows) {
    if (row.kind == RowKind::edge) sys.rows.push_back(row);
  }
  for (int t = 0; t < cusps; ++t) {
    if (filling_of[t]) continue;
    sys.rows.push_back(find_row(sys, RowKind::meridian, t));
    sys.rows.push_back(find_row(sys, RowKind::longitude, t));
  }
  for (int t = 0; t < cusps; ++t) {
    if (!filling_of[t]) continue;
    const auto& mu = find_row(sys, RowKind::meridian, t);
    const auto& la = find_row(sys, RowKind::longitude, t);
    const long long p = filling_of[t]->p, q = filling_of[t]->q;
    EquationRow row{RowKind::filled, t, {}, {}, {}};
    for (int j = 0; j < n; ++j) {
      row.a.push_back(checked_int(p * mu.a[j] + q * la.a[j]));
      row.b.push_back(checked_int(p * mu.b[j] + q * la.b[j]));
      row.c.push_back(checked_int(p * mu.c[j] + q * la.c[j]));
    }
    sys.rows.push_back(std::move(row));
  }

  sys.alpha.assign(sys.rows.size(), std::vector<int>(n));
  sys.beta.assign(sys.rows.size(), std::vector<int>(n));
  sys.gamma.assign(sys.rows.size(), 1);
  sys.arg_target_pi.assign(sys.rows.size(), 0);
  for (std::size_t m = 0; m < sys.rows.size(); ++m) {
    const auto& row = sys.rows[m];
    std::int64_t csum = 0;
    for (int j = 0; j < n; ++j) {
      sys.alpha[m][j] = checked_int(static_cast<long long>(row.a[j]) - row.c[j]);
      sys.beta[m][j] = checked_int(static_cast<long long>(row.c[j]) - row.b[j]);
      csum += row.c[j];
    }
    sys.gamma[m] = (csum % 2 == 0) ? 1 : -1;
    const bool unfilled_cusp = row.kind == RowKind::meridian || row.kind == RowKind::longitude;
    sys.arg_target_pi[m] = (unfilled_cusp ? 0 : 2) - csum;
  }
}

PointMatrix GluingSystem::lambda() const {
  PointMatrix out(rows.size(), 2 * static_cast<std::size_t>(n), 0.0);
  for (std::size_t m = 0; m < rows.size(); ++m) {
    for (int j = 0; j < n; ++j) {
      out(m, j) = alpha[m][j];
      out(m, n + j) = beta[m][j];
    }
  }
  return out;
}

std::vector<std::size_t> GluingSystem::mandatory_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < rows.size(); ++m) {
    if (rows[m].kind == RowKind::meridian || rows[m].kind == RowKind::filled) out.push_back(m);
  }
  return out;
}

std::vector<std::size_t> GluingSystem::candidate_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < rows.size(); ++m) {
    if (rows[m].kind == RowKind::edge) out.push_back(m);
  }
  return out;
}

GluingSystem parse_gluing(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed gluing file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("gluing file must hold an object");

  GluingSystem sys;
  try {
    if (auto it = doc.find("name"); it != doc.end()) {
      if (!it->is_string()) throw ParseError("field \"name\" must be a string");
      sys.name = it->get<std::string>();
    }
    sys.n = get_int(doc, "n");
    sys.k = get_int(doc, "k");
    sys.h = get_int(doc, "h");
    if (sys.n <= 0) throw ValidationError("n must be positive");

    const auto rows = doc.find("rows");
    if (rows == doc.end() || !rows->is_array()) throw ParseError("field \"rows\" must be a list");
    for (const auto& r : *rows) {
      if (!r.is_object()) throw ParseError("rows must be objects");
      EquationRow row;
      const auto kind = r.find("kind");
      if (kind == r.end() || !kind->is_string()) throw ParseError("row field \"kind\" must be a string");
      row.kind = parse_kind(kind->get<std::string>());
      if (auto c = r.find("cusp"); c != r.end() && !c->is_null()) {
        if (!c->is_number_integer()) throw ParseError("row field \"cusp\" must be an integer or null");
        row.cusp = c->get<int>();
      }
      row.a = get_int_list(r, "a", sys.n);
      row.b = get_int_list(r, "b", sys.n);
      row.c = get_int_list(r, "c", sys.n);
      sys.input_rows.push_back(std::move(row));
    }

    if (auto fl = doc.find("fillings"); fl != doc.end() && !fl->is_null()) {
      if (!fl->is_array()) throw ParseError("field \"fillings\" must be a list");
      for (const auto& f : *fl) {
        if (!f.is_object()) throw ParseError("fillings must be objects");
        sys.fillings.push_back({get_int(f, "cusp"), get_int(f, "p"), get_int(f, "q")});
      }
    }

    if (auto zs = doc.find("approx_solution"); zs != doc.end() && !zs->is_null()) {
      if (!zs->is_array()) throw ParseError("field \"approx_solution\" must be a list");
      ShapeVector z;
      for (const auto& pair : *zs) {
        if (!pair.is_array() || pair.size() != 2) throw ParseError("shapes must be [re, im] pairs");
        z.push_back({get_real(pair[0]), get_real(pair[1])});
      }
      sys.approx_solution = std::move(z);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed gluing file: ") + e.what());
  }

  derive(sys);
  return sys;
}

GluingSystem load_gluing(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_gluing(buf.str());
}

// ---------------------------------------------------------------------------

ResidualSystem::ResidualSystem(const GluingSystem& sys, std::vector<std::size_t> selection)
    : n_(static_cast<std::size_t>(sys.n)), selection_(std::move(selection)) {
  if (selection_.size() != n_) throw DimensionMismatch("selection must have n rows");
  for (std::size_t m : selection_) {
    if (m >= sys.rows.size()) throw DimensionMismatch("selected row out of range");
    Row row;
    row.gamma = sys.gamma[m];
    for (std::size_t j = 0; j < n_; ++j) {
      const int a = sys.alpha[m][j], b = sys.beta[m][j];
      row.alpha_plus.push_back(static_cast<unsigned>(std::max(a, 0)));
      row.alpha_minus.push_back(static_cast<unsigned>(-std::min(a, 0)));
      row.beta_plus.push_back(static_cast<unsigned>(std::max(b, 0)));
      row.beta_minus.push_back(static_cast<unsigned>(-std::min(b, 0)));
    }
    rows_.push_back(std::move(row));
  }
}

ResidualSystem::ResidualSystem(std::vector<Row> rows) : n_(rows.size()), rows_(std::move(rows)) {
  for (const auto& row : rows_) {
    if (row.alpha_plus.size() != n_ || row.alpha_minus.size() != n_ || row.beta_plus.size() != n_ ||
        row.beta_minus.size() != n_) {
      throw DimensionMismatch("residual rows must have one exponent per shape");
    }
  }
  selection_.resize(n_);
  std::iota(selection_.begin(), selection_.end(), std::size_t{0});
}

ShapeVector ResidualSystem::g(const ShapeVector& z) const {
  return g(std::span<const Shape>(z), Shape{1.0, 0.0});
}

PointVector ResidualSystem::f(std::span<const double> x) const {
  if (x.size() != dim()) throw DimensionMismatch("f: expected " + std::to_string(dim()) + " reals");
  const auto z = id_R_to_C(x);
  return id_C_to_R(g(std::span<const Shape>(z), Shape{1.0, 0.0}));
}

IntervalVector ResidualSystem::f(std::span<const Interval> x) const {
  if (x.size() != dim()) throw DimensionMismatch("f: expected " + std::to_string(dim()) + " intervals");
  const auto z = id_R_to_C(x);
  return id_C_to_R(g(std::span<const ComplexInterval>(z), ComplexInterval{Interval(1.0), Interval(0.0)}));
}

PointMatrix ResidualSystem::jacobian(std::span<const double> x) const {
  if (x.size() != dim()) throw DimensionMismatch("jacobian: expected " + std::to_string(dim()) + " reals");
  const PointAdContext ctx(dim());
  const auto seeds = ctx.seed(x);
  const auto z = id_R_to_C(seeds);
  const Complex<PointAdTuple> one{ctx.constant(1.0), ctx.constant(0.0)};
  const auto out = id_C_to_R(g(std::span<const Complex<PointAdTuple>>(z), one));
  PointMatrix jac(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) jac(i, j) = out[i].partial(j);
  }
  return jac;
}

ResidualSystem::Enclosure ResidualSystem::f_with_jacobian(std::span<const Interval> x) const {
  if (x.size() != dim()) throw DimensionMismatch("f: expected " + std::to_string(dim()) + " intervals");
  const AdContext ctx(dim());
  const auto seeds = ctx.seed(x);
  const auto z = id_R_to_C(seeds);
  const ComplexAd one{ctx.constant(Interval(1.0)), ctx.constant(Interval(0.0))};
  const auto out = id_C_to_R(g(std::span<const ComplexAd>(z), one));
  Enclosure enc{IntervalVector(dim()), IntervalMatrix(dim(), dim())};
  for (std::size_t i = 0; i < dim(); ++i) {
    enc.value[i] = out[i].value();
    for (std::size_t j = 0; j < dim(); ++j) enc.jacobian(i, j) = out[i].partial(j);
  }
  return enc;
}

// ---------------------------------------------------------------------------

namespace {

double residual_norm(const ResidualSystem& sys, std::span<const double> x) {
  const auto fx = sys.f(x);
  for (double v : fx) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
  }
  return inf_norm_point(fx);
}

// Step from the midpoints of the interval evaluation of f and f' on [x, x],
// so the iteration sees the same arithmetic as the Krawczyk test.
PointVector newton_step(const ResidualSystem& sys, std::span<const double> x) {
  try {
    const auto enc = sys.f_with_jacobian(to_intervals(x));
    return solve_point(mid(enc.jacobian), mid(enc.value));
  } catch (const SingularApprox&) {
    throw NewtonSingular();
  } catch (const Error&) {
    throw NewtonDiverged();
  }
}

// Rounding-noise level of f at x: the widest component of f([x, x]).
double noise_floor(const ResidualSystem& sys, std::span<const double> x) {
  try {
    const auto fx = sys.f(std::span<const Interval>(to_intervals(x)));
    double w = 0.0;
    for (const auto& v : fx) w = std::max(w, width(v));
    return w;
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

NewtonResult newton_refine(const ResidualSystem& sys, PointVector x, int iters) {
  NewtonResult res;
  double current = residual_norm(sys, x);
  res.residuals.push_back(current);
  PointVector best = x;
  double best_norm = current;
  int increases = 0;
  for (int it = 0; it < iters; ++it) {
    const auto dx = newton_step(sys, x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dx[i];
    if (!all_finite(x)) throw NewtonDiverged();
    const double next = residual_norm(sys, x);
    res.residuals.push_back(next);
    // Growth below the rounding noise is not divergence.
    increases = next > current && next > noise_floor(sys, x) ? increases + 1 : 0;
    if (increases >= 3) throw NewtonDiverged();
    current = next;
    if (next <= best_norm) {
      best = x;
      best_norm = next;
    }
  }
  res.x = std::move(best);
  return res;
}

NewtonResult damped_newton(const ResidualSystem& sys, PointVector x, int iters, int halvings) {
  NewtonResult res;
  double current = residual_norm(sys, x);
  res.residuals.push_back(current);
  for (int it = 0; it < iters && current > 0.0; ++it) {
    const auto dx = newton_step(sys, x);
    double t = 1.0;
    bool accepted = false;
    for (int hv = 0; hv <= halvings && !accepted; ++hv, t /= 2) {
      PointVector trial = x;
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] -= t * dx[i];
      const double r = residual_norm(sys, trial);
      if (r < current) {
        x = std::move(trial);
        current = r;
        accepted = true;
      }
    }
    if (!accepted) break;
    res.residuals.push_back(current);
  }
  res.x = std::move(x);
  return res;
}

ShapeVector regular_seed(std::size_t n) { return ShapeVector(n, Shape{0.5, std::sqrt(3.0) / 2.0}); }

PointVector flatten(const ShapeVector& z) { return id_C_to_R(z); }

ShapeVector unflatten(std::span<const double> x) { return id_R_to_C(x); }

bool check_orientation(std::span<const ComplexInterval> z) {
  return std::all_of(z.begin(), z.end(), [](const ComplexInterval& w) { return w.im.lo() > 0.0; });
}

ArgumentCheck check_argument(const GluingSystem& sys, std::span<const std::size_t> selection,
                             std::span<const ComplexInterval> z) {
  ArgumentCheck out;
  out.passed = z.size() == static_cast<std::size_t>(sys.n);
  if (!out.passed) return out;
  const auto& pi = pi_enclosure();
  for (std::size_t m : selection) {
    if (m >= sys.rows.size()) {
      out.passed = false;
      continue;
    }
    if (sys.rows[m].kind == RowKind::edge) continue;
    ArgumentRow row{m, Interval(0.0), sys.arg_target_pi[m], false};
    try {
      Interval sum(0.0);
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (const int a = sys.alpha[m][j]; a != 0) {
          sum += Interval(a) * atan2_interval(z[j].im, z[j].re);
        }
        if (const int b = sys.beta[m][j]; b != 0) {
          sum += Interval(b) * atan2_interval(-z[j].im, Interval(1.0) - z[j].re);
        }
      }
      const Interval target = Interval(static_cast<double>(row.target_pi)) * pi.pi;
      row.sum = sum;
      row.passed = subset(target, sum) && sum.lo() > (target - pi.two_pi).hi() &&
                   sum.hi() < (target + pi.two_pi).lo();
    } catch (const Error&) {
      row.passed = false;
    }
    out.passed = out.passed && row.passed;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace certikraw
