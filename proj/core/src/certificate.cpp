#include "certikraw/certificate.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "certikraw/krawczyk.hpp"
#include "json.hpp"

namespace certikraw {

using json = nlohmann::ordered_json;

std::string_view to_string(CheckState s) noexcept {
  switch (s) {
    case CheckState::pass: return "pass";
    case CheckState::fail: return "fail";
    case CheckState::skipped: return "skipped";
  }
  return "skipped";
}

std::string_view tool_version() noexcept {
#ifdef CERTIKRAW_VERSION
  return CERTIKRAW_VERSION;
#else
  return "unknown";
#endif
}

std::string format_double(double x) {
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

double parse_endpoint(std::string_view text, bool round_down) {
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(x)) {
    throw ParseError("bad interval endpoint \"" + std::string(text) + "\"");
  }
  if (format_double(x) == text) return x;
  const double inf = std::numeric_limits<double>::infinity();
  return std::nextafter(x, round_down ? -inf : inf);
}

namespace {

CheckState parse_state(const std::string& s) {
  if (s == "pass") return CheckState::pass;
  if (s == "fail") return CheckState::fail;
  if (s == "skipped") return CheckState::skipped;
  throw ParseError("unknown check state \"" + s + "\"");
}

json interval_json(const Interval& x) {
  return json{{"lo", format_double(x.lo())}, {"hi", format_double(x.hi())}, {"lo_rounding", "down"},
              {"hi_rounding", "up"}};
}

Interval interval_from(const json& j) {
  const bool lo_down = j.value("lo_rounding", std::string("down")) == "down";
  const bool hi_up = j.value("hi_rounding", std::string("up")) == "up";
  if (!lo_down || !hi_up) throw ParseError("interval endpoints must round outward");
  return Interval(parse_endpoint(j.at("lo").get<std::string>(), true),
                  parse_endpoint(j.at("hi").get<std::string>(), false));
}

json interval_list(const IntervalVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(interval_json(x));
  return out;
}

IntervalVector intervals_from(const json& j) {
  IntervalVector v;
  for (const auto& e : j) v.push_back(interval_from(e));
  return v;
}

double point_from(const json& j) {
  const auto& s = j.get_ref<const std::string&>();
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError("bad number \"" + s + "\"");
  return x;
}

}  // namespace

std::string serialize(const Certificate& cert, bool include_timings) {
  json j;
  j["input_name"] = cert.input_name;
  j["verified"] = cert.verified;
  json shapes = json::array();
  for (const auto& z : cert.shapes) shapes.push_back({{"re", interval_json(z.re)}, {"im", interval_json(z.im)}});
  j["shapes"] = std::move(shapes);
  j["checks"] = {{"krawczyk", to_string(cert.checks.krawczyk)},
                 {"orientation", to_string(cert.checks.orientation)},
                 {"argument", to_string(cert.checks.argument)}};
  j["selection"] = cert.selection;
  j["box"] = interval_list(cert.box);
  j["image"] = interval_list(cert.image);
  json args = json::array();
  for (const auto& a : cert.arguments) {
    args.push_back({{"row", a.row}, {"sum", interval_json(a.sum)}, {"target_over_pi", a.target_pi},
                    {"passed", a.passed}});
  }
  j["arguments"] = std::move(args);
  if (!cert.failure_stage.empty()) j["failure"] = {{"stage", cert.failure_stage}, {"message", cert.failure_message}};
  if (include_timings) {
    json t = json::object();
    for (const auto& [stage, ms] : cert.timings_ms) t[stage] = ms;
    j["timings_ms"] = std::move(t);
  }
  j["tool_version"] = cert.tool_version;
  j["rounding"] = cert.rounding;
  if (cert.data) {
    const auto& d = *cert.data;
    json c = json::array();
    for (double v : d.c) c.push_back(format_double(v));
    json r = json::array();
    for (std::size_t i = 0; i < d.R.rows(); ++i) {
      json row = json::array();
      for (double v : d.R.row(i)) row.push_back(format_double(v));
      r.push_back(std::move(row));
    }
    json jac = json::array();
    for (std::size_t i = 0; i < d.jacobian.rows(); ++i) {
      json row = json::array();
      for (const auto& v : d.jacobian.row(i)) row.push_back(interval_json(v));
      jac.push_back(std::move(row));
    }
    j["data"] = {{"c", std::move(c)}, {"R", std::move(r)}, {"f_at_c", interval_list(d.f_at_c)},
                 {"jacobian", std::move(jac)}};
  }
  return j.dump(2) + "\n";
}

Certificate deserialize(std::string_view text) {
  Certificate cert;
  try {
    const json j = json::parse(text.begin(), text.end());
    cert.input_name = j.at("input_name").get<std::string>();
    cert.verified = j.at("verified").get<bool>();
    for (const auto& z : j.at("shapes")) cert.shapes.push_back({interval_from(z.at("re")), interval_from(z.at("im"))});
    const auto& checks = j.at("checks");
    cert.checks = {parse_state(checks.at("krawczyk").get<std::string>()),
                   parse_state(checks.at("orientation").get<std::string>()),
                   parse_state(checks.at("argument").get<std::string>())};
    cert.selection = j.at("selection").get<std::vector<std::size_t>>();
    cert.box = intervals_from(j.at("box"));
    cert.image = intervals_from(j.at("image"));
    for (const auto& a : j.at("arguments")) {
      cert.arguments.push_back({a.at("row").get<std::size_t>(), interval_from(a.at("sum")),
                                a.at("target_over_pi").get<std::int64_t>(), a.at("passed").get<bool>()});
    }
    if (auto f = j.find("failure"); f != j.end()) {
      cert.failure_stage = f->at("stage").get<std::string>();
      cert.failure_message = f->at("message").get<std::string>();
    }
    if (auto t = j.find("timings_ms"); t != j.end()) {
      for (const auto& [stage, ms] : t->items()) cert.timings_ms.emplace_back(stage, ms.get<double>());
    }
    cert.tool_version = j.at("tool_version").get<std::string>();
    cert.rounding = j.at("rounding").get<std::string>();
    if (auto d = j.find("data"); d != j.end()) {
      KrawczykData data;
      for (const auto& v : d->at("c")) data.c.push_back(point_from(v));
      const auto& r = d->at("R");
      data.R = PointMatrix(r.size(), r.empty() ? 0 : r.front().size());
      for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t k = 0; k < r[i].size(); ++k) data.R(i, k) = point_from(r[i][k]);
      }
      data.f_at_c = intervals_from(d->at("f_at_c"));
      const auto& jac = d->at("jacobian");
      data.jacobian = IntervalMatrix(jac.size(), jac.empty() ? 0 : jac.front().size());
      for (std::size_t i = 0; i < jac.size(); ++i) {
        for (std::size_t k = 0; k < jac[i].size(); ++k) data.jacobian(i, k) = interval_from(jac[i][k]);
      }
      cert.data = std::move(data);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
  return cert;
}

Recheck recheck(const Certificate& cert, const GluingSystem& sys) {
  Recheck out;
  const std::size_t m = 2 * static_cast<std::size_t>(sys.n);
  if (cert.box.size() != m || cert.image.size() != m) return out;
  out.containment = contained_in_interior(cert.image, cert.box);
  const auto z = id_R_to_C(cert.image);
  out.orientation = check_orientation(z);
  out.argument = check_argument(sys, cert.selection, z).passed;
  // Shapes are reported exactly when verified, and are then K(X).
  out.shapes_consistent = cert.verified ? cert.shapes == z : cert.shapes.empty();
  return out;
}

}  // namespace certikraw
