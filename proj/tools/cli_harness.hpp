#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "g2/serialize.hpp"

namespace g2::cli {

enum class Command { Verify, Sample, Flow, Dirac, Sw };
enum class Format { Json, Csv };

struct RunConfig {
  Command command = Command::Verify;
  std::uint64_t seed = 1;
  std::optional<int> K;          // per-command default when unset
  double tol = 1e-10;            // tolerance of the identity checks
  // dirac: 0 when unset; sw: (pi, pi, pi) when unset
  std::optional<Eigen::Vector3d> holonomy;
  int steps = 2000;
  double rate = 0.01;
  int count = 0;                 // rows for `sample`
  std::string out;               // empty: stdout
  std::optional<Format> format;  // per-command default when unset

  // Throws g2::Error on out-of-range values.
  void validate() const;
  int cutoff() const;
  Format output_format() const;
};

struct CheckResult {
  std::string name;
  std::string anchor;  // the identity or construction the check exercises
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

// Data rows; cells are JSON numbers (integers stay integers).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;
};

struct Report {
  std::string command;
  RunConfig config;
  std::vector<CheckResult> checks;
  Table table;
  double seconds = 0.0;

  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
};

// A named check of the `verify` suite; runs in registry order.
struct CheckSpec {
  std::string name;
  std::string anchor;
  std::function<CheckResult(const RunConfig&)> run;
};
const std::vector<CheckSpec>& check_registry();

Report run(const RunConfig& config);

std::string render_json(const Report& r);
std::string render_csv(const Report& r);
std::string command_name(Command c);

// Full command line handling: parse, run, write. Returns the exit status
// (0 pass, 1 failed check, 2 usage or I/O error).
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace g2::cli
