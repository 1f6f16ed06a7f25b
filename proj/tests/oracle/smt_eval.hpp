#pragma once

// Ground evaluator for SMT-LIB integer/boolean terms, independent of the
// library's reader. 64-bit arithmetic; overflow throws.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

struct SmtEvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GroundEnv {
  std::map<std::string, std::int64_t> ints;
  std::map<std::string, bool> bools;
};

bool eval_smt_bool(std::string_view term, const GroundEnv& env);
std::int64_t eval_smt_int(std::string_view term, const GroundEnv& env);

/// Conjunction of every `(assert t)` in the script. Declared constants
/// missing from `env` default to 0 / false.
bool script_holds(std::string_view script, GroundEnv env);

/// Names and sorts ("Int"/"Bool") of `declare-const` statements.
std::map<std::string, std::string> script_declarations(std::string_view script);

}  // namespace oracle
