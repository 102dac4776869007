#pragma once

// The verification pipeline and batch driver behind the certikraw tool.
//
//   parse -> select rows -> (seed) -> Newton -> Krawczyk -> orientation -> argument
//
// Any mathematical failure ends the run with an unverified certificate naming
// the stage; only unreadable or invalid input raises.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "certikraw/certificate.hpp"
#include "certikraw/gluing_system.hpp"
#include "certikraw/interval_linalg.hpp"

namespace certikraw {

struct VerifyOptions {
  bool print_data = false;
  int newton_iters = 5;
  double rank_delta = kDefaultRankDelta;
};

Certificate verify_system(const GluingSystem& sys, const VerifyOptions& opts = {});

// Throws ParseError / ValidationError for bad input.
Certificate verify_file(const std::filesystem::path& path, const VerifyOptions& opts = {});

enum ExitCode : int { kExitVerified = 0, kExitNotVerified = 1, kExitInputError = 2 };

inline int exit_code(const Certificate& cert) noexcept {
  return cert.verified ? kExitVerified : kExitNotVerified;
}

// foo.gluing.json -> foo.cert.json; bar.json -> bar.cert.json.
std::filesystem::path certificate_path(const std::filesystem::path& input);

// Directories expand to their *.gluing.json files in name order; other
// paths are kept as given.
std::vector<std::filesystem::path> collect_inputs(std::span<const std::filesystem::path> args);

enum class Outcome { verified, failed, errored };

struct BatchItem {
  std::filesystem::path input;
  Outcome outcome = Outcome::errored;
  std::string message;
};

struct BatchSummary {
  std::vector<BatchItem> items;  // in input order
  std::size_t verified = 0;
  std::size_t failed = 0;
  std::size_t errored = 0;
};

// Verifies every input on up to `jobs` worker threads and writes each
// certificate next to its input. One bad file never stops the others.
BatchSummary batch(std::span<const std::filesystem::path> inputs, unsigned jobs, const VerifyOptions& opts = {});

// "Out of N inputs, V verified, F failed, E errored"
std::string summary_line(const BatchSummary& summary);

}  // namespace certikraw
