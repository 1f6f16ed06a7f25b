#pragma once

#include "invsynth/expr.hpp"

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace invsynth {

/// Environment variable naming the default solver executable.
inline constexpr const char* kSolverEnvVar = "INVSYNTH_SOLVER";

struct SolverConfig {
  std::string executable = "z3";
  std::chrono::milliseconds timeout{5000};
  std::vector<std::string> extra_args;

  /// `$INVSYNTH_SOLVER` if set, else `z3` from PATH.
  static SolverConfig from_environment();
  void validate() const;
};

/// A satisfying assignment reported by the solver. Program, primed and
/// auxiliary symbols are all included when the solver reports them.
struct Model {
  std::map<std::string, BigInt> ints;
  std::map<std::string, bool> bools;
  std::set<std::string> defaulted;  // expected but absent, set to 0/false

  Env env() const;
  /// One `name = value` line per symbol, in name order.
  std::string render() const;

  friend bool operator==(const Model&, const Model&) = default;
};

struct Valid {
  friend bool operator==(const Valid&, const Valid&) = default;
};
struct Counterexample {
  Model model;
  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};
struct ParseError {
  std::string message;
  friend bool operator==(const ParseError&, const ParseError&) = default;
};
struct Timeout {
  friend bool operator==(const Timeout&, const Timeout&) = default;
};
struct SolverFailure {
  std::string message;
  int exit_status = -1;
  friend bool operator==(const SolverFailure&, const SolverFailure&) = default;
};

using CheckVerdict = std::variant<Valid, Counterexample, ParseError, Timeout, SolverFailure>;

/// "Valid", "Counterexample", "ParseError", "Timeout" or "SolverFailure".
const char* verdict_name(const CheckVerdict& v) noexcept;
bool is_valid(const CheckVerdict& v) noexcept;

struct CheckResult {
  CheckVerdict verdict;
  double elapsed_ms = 0;
  double peak_memory_mb = 0;  // peak RSS of the solver process
  std::string output;         // stdout followed by stderr
};

/// Writes `script` to a temp `.smt2` file, runs `<solver> [args] <file>`,
/// and classifies the reply. Blocking and reentrant.
CheckResult check_script(std::string_view script, const SolverConfig& config);

/// Classification only; exposed for tests. `timed_out` means the host
/// killed the process.
CheckVerdict classify_output(std::string_view stdout_text, std::string_view stderr_text, int exit_status,
                             bool timed_out, const SortMap& expected);

/// Reads a `(model ...)` block or a bare list of `define-fun`s. Negative
/// literals written `(- k)` are understood. Throws SolverError on malformed
/// model text.
Model parse_model(std::string_view solver_output, const SortMap& expected_vars);

/// Zero-argument `declare-const`/`declare-fun` symbols of a script.
SortMap declared_constants(std::string_view script);

/// Ground evaluation of the conjunction of the script's assertions under
/// `model`. Throws Error when the script uses unsupported syntax.
bool script_assertion_holds(std::string_view script, const Model& model);

}  // namespace invsynth
