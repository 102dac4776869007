#pragma once

// Verification certificates: what was proved, the boxes that prove it, and
// enough data to recheck the claim from the serialized text alone.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "certikraw/complex_interval.hpp"
#include "certikraw/gluing_system.hpp"
#include "certikraw/interval_linalg.hpp"

namespace certikraw {

enum class CheckState { pass, fail, skipped };

std::string_view to_string(CheckState s) noexcept;

struct Checks {
  CheckState krawczyk = CheckState::skipped;
  CheckState orientation = CheckState::skipped;
  CheckState argument = CheckState::skipped;

  friend bool operator==(const Checks&, const Checks&) = default;
};

// The internal data of the Krawczyk run, emitted with --print-data.
struct KrawczykData {
  PointVector c;
  PointMatrix R;
  IntervalVector f_at_c;
  IntervalMatrix jacobian;  // F'(X)

  friend bool operator==(const KrawczykData&, const KrawczykData&) = default;
};

struct ArgumentSum {
  std::size_t row = 0;
  Interval sum;
  std::int64_t target_pi = 0;
  bool passed = false;

  friend bool operator==(const ArgumentSum&, const ArgumentSum&) = default;
};

struct Certificate {
  std::string input_name;
  bool verified = false;
  std::vector<ComplexInterval> shapes;  // empty unless verified
  Checks checks;
  std::vector<std::size_t> selection;
  IntervalVector box;    // X, when the Krawczyk test ran
  IntervalVector image;  // K(X)
  std::vector<ArgumentSum> arguments;
  std::vector<std::pair<std::string, double>> timings_ms;
  std::string tool_version;
  std::string rounding;
  std::string failure_stage;  // empty when verified
  std::string failure_message;
  std::optional<KrawczykData> data;
};

std::string_view tool_version() noexcept;

// Shortest 17-significant-digit decimal for x ("%.17g" style).
std::string format_double(double x);

// Reads an endpoint written by format_double. A string that is exactly the
// canonical form of some double decodes to that double; anything else decodes
// to the nearest double stepped one ulp in the given direction, so the decoded
// interval always contains the written one.
double parse_endpoint(std::string_view text, bool round_down);

// Timings vary from run to run; leave them out to compare certificates.
std::string serialize(const Certificate& cert, bool include_timings = true);
Certificate deserialize(std::string_view text);

struct Recheck {
  bool containment = false;
  bool orientation = false;
  bool argument = false;
  bool shapes_consistent = false;
  [[nodiscard]] bool verified() const noexcept { return containment && orientation && argument && shapes_consistent; }
};

// Recomputes every check from the serialized boxes: K(X) strictly inside X,
// positive imaginary parts of K(X), and the argument condition on K(X) for the
// recorded selection.
Recheck recheck(const Certificate& cert, const GluingSystem& sys);

}  // namespace certikraw
