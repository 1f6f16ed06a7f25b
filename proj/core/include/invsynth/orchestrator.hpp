#pragma once

#include "invsynth/llm.hpp"
#include "invsynth/proposer.hpp"
#include "invsynth/solver.hpp"
#include "invsynth/vcgen.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace invsynth {

/// A synthesis input: a C program (with its derived template and CFG) or
/// an external `.smt2t` template.
struct Problem {
  std::string name;
  std::string source_text;
  std::shared_ptr<const Program> program;  // null for template inputs
  std::shared_ptr<const SmtTemplate> tmpl;
  std::string cfg_json;

  static Problem from_source(std::string_view source, std::string name);
  static Problem from_template(std::string_view text, std::string name);
  /// `.smt2t` files are read as templates, everything else as C.
  static Problem load(const std::filesystem::path& path);

  /// Integer literals of the program, or the numerals of the template.
  std::vector<BigInt> literals() const;
};

struct SynthesisConfig {
  int max_iterations = 5;
  SolverConfig solver;
  std::string proposer_id = "houdini";
  std::uint64_t seed = 0;

  void validate() const;
};

/// Everything needed to build the proposers named by id:
/// `llm`, `houdini`, or `scripted:<file>`.
struct ProposerOptions {
  LlmConfig llm;
  std::shared_ptr<Transport> transport;  // defaults to the httplib client
  SolverConfig solver;
  std::uint64_t seed = 0;
};

std::unique_ptr<Proposer> make_proposer(std::string_view id, const ProposerOptions& options);

enum class SynthesisStatus { Solved, Exhausted, ProposerError, SolverError };
const char* to_string(SynthesisStatus s) noexcept;
SynthesisStatus synthesis_status_from_string(std::string_view s);

struct CheckRecord {
  Obligation obligation = Obligation::Init;
  std::string script;
  CheckVerdict verdict;
  double elapsed_ms = 0;
  double memory_mb = 0;
  std::string solver_output;
};

struct IterationRecord {
  int attempt = 1;
  std::string prompt;
  std::string raw_response;
  std::string candidate;  // empty when extraction failed
  bool balanced = true;
  std::string proposer_id;
  double proposal_ms = 0;
  std::vector<CheckRecord> checks;  // in order, stopping at the first failure
  std::optional<Feedback> feedback;  // sent to the next attempt
};

struct SynthesisTrace {
  std::string program_name;
  std::string proposer_id;
  int max_iterations = 0;
  std::int64_t timeout_ms = 0;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> iterations;
  SynthesisStatus status = SynthesisStatus::Exhausted;
  std::optional<std::string> invariant;
  std::string error;
  double wall_ms = 0;
  double solver_ms = 0;
  double peak_memory_mb = 0;

  int proposals() const { return static_cast<int>(iterations.size()); }
};

/// The generate-and-check loop. Checks run init, inductive, post and stop
/// at the first non-Valid verdict, whose feedback goes to the next attempt.
SynthesisTrace synthesize(const Problem& problem, const SynthesisConfig& config, Proposer& proposer);
SynthesisTrace synthesize(const Problem& problem, const SynthesisConfig& config,
                          const ProposerOptions& options = {});

/// All three checks, no short-circuit.
std::array<CheckResult, 3> verify_only(const Problem& problem, const Invariant& candidate, const SolverConfig& config);

/// Stable JSON rendering of a trace; schema in docs/trace-format.md.
std::string trace_to_json(const SynthesisTrace& trace, int indent = 2);
SynthesisTrace trace_from_json(std::string_view json);

std::string verdict_to_json(const CheckVerdict& v);
CheckVerdict verdict_from_json(std::string_view json);

}  // namespace invsynth
