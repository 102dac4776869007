// certikraw: certify hyperbolic structures from gluing-equation data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "certikraw/certificate.hpp"
#include "certikraw/verify.hpp"

namespace fs = std::filesystem;
using namespace certikraw;

namespace {

int run_verify(const fs::path& input, const VerifyOptions& opts, const std::string& output) {
  Certificate cert;
  try {
    cert = verify_file(input, opts);
  } catch (const Error& e) {
    std::cerr << "certikraw: " << input.string() << ": " << e.what() << "\n";
    return kExitInputError;
  }
  const std::string text = serialize(cert);
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    std::ofstream os(output, std::ios::binary | std::ios::trunc);
    os << text;
    if (!os) {
      std::cerr << "certikraw: cannot write " << output << "\n";
      return kExitInputError;
    }
  }
  std::cerr << (cert.verified ? "verified" : "not verified");
  if (!cert.verified) std::cerr << " (" << cert.failure_stage << ": " << cert.failure_message << ")";
  std::cerr << "\n";
  return exit_code(cert);
}

int run_batch(const std::vector<std::string>& args, unsigned jobs, const VerifyOptions& opts) {
  const std::vector<fs::path> paths(args.begin(), args.end());
  const auto inputs = collect_inputs(paths);
  const BatchSummary summary = batch(inputs, jobs, opts);
  for (const auto& item : summary.items) {
    if (item.outcome != Outcome::verified) std::cerr << item.input.string() << ": " << item.message << "\n";
  }
  std::cout << summary_line(summary) << "\n";
  if (summary.errored > 0) return kExitInputError;
  return summary.failed > 0 ? kExitNotVerified : kExitVerified;
}

int run_recheck(const fs::path& cert_path, const fs::path& gluing_path) {
  try {
    std::ifstream in(cert_path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + cert_path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const Certificate cert = deserialize(text);
    const Recheck r = recheck(cert, load_gluing(gluing_path));
    auto word = [](bool ok) { return ok ? "pass" : "fail"; };
    std::cout << "containment " << word(r.containment) << "\norientation " << word(r.orientation) << "\nargument "
              << word(r.argument) << "\nshapes " << word(r.shapes_consistent) << "\n";
    const bool agrees = r.verified() == cert.verified;
    std::cout << (agrees ? "certificate confirmed" : "certificate does NOT match its data") << "\n";
    return agrees ? (cert.verified ? kExitVerified : kExitNotVerified) : kExitInputError;
  } catch (const Error& e) {
    std::cerr << "certikraw: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify hyperbolicity of 3-manifolds by Krawczyk's test on the gluing equations"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  VerifyOptions opts;
  auto add_common = [&opts](CLI::App* cmd) {
    cmd->add_flag("--print-data", opts.print_data, "Include R, c, F(c) and F'(X) in the certificate");
    cmd->add_option("--newton-iters", opts.newton_iters, "Newton refinement steps before the test")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--rank-delta", opts.rank_delta, "Singular-value threshold for row selection")
        ->check(CLI::PositiveNumber);
  };

  std::string input, output;
  auto* verify = app.add_subcommand("verify", "Verify one gluing file and print its certificate");
  verify->add_option("file", input, "Gluing file")->required();
  verify->add_option("-o,--output", output, "Write the certificate here instead of stdout");
  add_common(verify);

  std::vector<std::string> batch_args;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
  auto* batch_cmd = app.add_subcommand("batch", "Verify many files; certificates are written next to the inputs");
  batch_cmd->add_option("inputs", batch_args, "Gluing files or directories of *.gluing.json");
  batch_cmd->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_common(batch_cmd);

  std::string cert_file, gluing_file;
  auto* recheck_cmd = app.add_subcommand("recheck", "Recheck a certificate from its serialized boxes");
  recheck_cmd->add_option("certificate", cert_file, "Certificate file")->required();
  recheck_cmd->add_option("gluing", gluing_file, "The gluing file it was produced from")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  }

  if (*verify) return run_verify(input, opts, output);
  if (*batch_cmd) return run_batch(batch_args, jobs, opts);
  return run_recheck(cert_file, gluing_file);
}
