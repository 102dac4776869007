#include "certikraw/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include "certikraw/krawczyk.hpp"
#include "certikraw/rounding.hpp"

namespace certikraw {

namespace fs = std::filesystem;

namespace {

class StageClock {
 public:
  explicit StageClock(Certificate& cert) : cert_(cert) {}

  void mark(const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    cert_.timings_ms.emplace_back(stage, std::chrono::duration<double, std::milli>(now - last_).count());
    last_ = now;
  }
  void total() {
    cert_.timings_ms.emplace_back(
        "total", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count());
  }

 private:
  Certificate& cert_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  std::chrono::steady_clock::time_point last_ = start_;
};

void fail(Certificate& cert, const char* stage, const std::string& message) {
  cert.verified = false;
  cert.shapes.clear();
  cert.failure_stage = stage;
  cert.failure_message = message;
}

}  // namespace

Certificate verify_system(const GluingSystem& sys, const VerifyOptions& opts) {
  Certificate cert;
  cert.input_name = sys.name;
  cert.tool_version = tool_version();
  cert.rounding = rounding::kActiveName;
  StageClock clock(cert);

  const std::size_t n = static_cast<std::size_t>(sys.n);
  try {
    const auto mandatory = sys.mandatory_rows();
    const auto candidates = sys.candidate_rows();
    cert.selection = select_rows(sys.lambda(), mandatory, n, opts.rank_delta, candidates);
  } catch (const RankSelectionFailed& e) {
    fail(cert, "selection", std::string("no candidate system: ") + e.what());
    clock.mark("selection");
    clock.total();
    return cert;
  }
  clock.mark("selection");

  const ResidualSystem residual(sys, cert.selection);
  PointVector c;
  try {
    if (sys.approx_solution) {
      c = flatten(*sys.approx_solution);
    } else {
      c = damped_newton(residual, flatten(regular_seed(n))).x;
    }
    c = newton_refine(residual, std::move(c), opts.newton_iters).x;
  } catch (const Error& e) {
    fail(cert, "newton", e.what());
    clock.mark("newton");
    clock.total();
    return cert;
  }
  clock.mark("newton");

  const KrawczykReport rep = krawczyk_test(residual, c);
  clock.mark("krawczyk");
  cert.box = rep.X;
  cert.image = rep.KX;
  if (opts.print_data) cert.data = KrawczykData{rep.c, rep.R, rep.f_at_c, rep.jacobian};
  cert.checks.krawczyk = rep.passed ? CheckState::pass : CheckState::fail;
  if (!rep.passed) {
    fail(cert, "krawczyk", rep.diagnostic);
    clock.total();
    return cert;
  }

  const auto shapes = id_R_to_C(rep.KX);
  const bool oriented = check_orientation(shapes);
  clock.mark("orientation");
  cert.checks.orientation = oriented ? CheckState::pass : CheckState::fail;
  if (!oriented) {
    fail(cert, "orientation", "a shape enclosure is not in the upper half plane");
    clock.total();
    return cert;
  }

  const ArgumentCheck args = check_argument(sys, cert.selection, shapes);
  clock.mark("argument");
  for (const auto& r : args.rows) cert.arguments.push_back({r.row, r.sum, r.target_pi, r.passed});
  cert.checks.argument = args.passed ? CheckState::pass : CheckState::fail;
  if (!args.passed) {
    fail(cert, "argument", "argument sum of a cusp equation is not the required multiple of pi");
    clock.total();
    return cert;
  }

  cert.verified = true;
  cert.shapes = shapes;
  clock.total();
  return cert;
}

Certificate verify_file(const fs::path& path, const VerifyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  GluingSystem sys = load_gluing(path);
  const double parse_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (sys.name.empty()) sys.name = path.filename().string();
  Certificate cert = verify_system(sys, opts);
  cert.timings_ms.insert(cert.timings_ms.begin(), {"parse", parse_ms});
  cert.timings_ms.back().second += parse_ms;
  return cert;
}

fs::path certificate_path(const fs::path& input) {
  std::string name = input.filename().string();
  constexpr std::string_view kGluing = ".gluing.json";
  if (name.size() > kGluing.size() && name.ends_with(kGluing)) {
    name.resize(name.size() - kGluing.size());
  } else if (input.has_extension()) {
    name = input.stem().string();
  }
  return input.parent_path() / (name + ".cert.json");
}

std::vector<fs::path> collect_inputs(std::span<const fs::path> args) {
  std::vector<fs::path> out;
  for (const auto& arg : args) {
    std::error_code ec;
    if (fs::is_directory(arg, ec)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(arg, ec)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.ends_with(".gluing.json")) found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(arg);
    }
  }
  return out;
}

BatchSummary batch(std::span<const fs::path> inputs, unsigned jobs, const VerifyOptions& opts) {
  BatchSummary summary;
  summary.items.resize(inputs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      BatchItem& item = summary.items[i];
      item.input = inputs[i];
      try {
        const Certificate cert = verify_file(inputs[i], opts);
        const fs::path out = certificate_path(inputs[i]);
        std::ofstream os(out, std::ios::binary | std::ios::trunc);
        os << serialize(cert);
        if (!os) throw Error("cannot write " + out.string());
        item.outcome = cert.verified ? Outcome::verified : Outcome::failed;
        item.message = cert.verified ? "verified" : cert.failure_stage + ": " + cert.failure_message;
      } catch (const std::exception& e) {
        item.outcome = Outcome::errored;
        item.message = e.what();
      }
    }
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(inputs.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (const auto& item : summary.items) {
    switch (item.outcome) {
      case Outcome::verified: ++summary.verified; break;
      case Outcome::failed: ++summary.failed; break;
      case Outcome::errored: ++summary.errored; break;
    }
  }
  return summary;
}

std::string summary_line(const BatchSummary& s) {
  return "Out of " + std::to_string(s.items.size()) + " inputs, " + std::to_string(s.verified) + " verified, " +
         std::to_string(s.failed) + " failed, " + std::to_string(s.errored) + " errored";
}

}  // namespace certikraw
