#pragma once

#include "invsynth/program.hpp"
#include "invsynth/solver.hpp"
#include "invsynth/vcgen.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace invsynth {

/// What went wrong with the previous candidate, as shown to the proposer.
struct Feedback {
  enum class Kind { Counterexample, ParseError, Timeout, NoCandidate };
  Kind kind = Kind::Counterexample;
  std::optional<Obligation> obligation;
  std::string text;  // rendered exactly as it appears in the next prompt
  std::optional<Model> model;

  friend bool operator==(const Feedback&, const Feedback&) = default;
};

const char* to_string(Feedback::Kind kind) noexcept;
Feedback::Kind feedback_kind_from_string(std::string_view s);

Feedback counterexample_feedback(Obligation o, const Model& model);
Feedback parse_error_feedback(Obligation o, std::string_view solver_message);
Feedback timeout_feedback(Obligation o);
Feedback no_candidate_feedback(std::string_view reason);

struct HistoryEntry {
  std::string candidate;
  std::string outcome;  // short verdict summary, e.g. "post: Counterexample"

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct ProposalContext {
  std::string problem_name;
  std::string source_text;  // C source, or the template file for template inputs
  std::string cfg_json;     // empty for template inputs
  std::array<std::string, 3> template_texts;
  std::vector<HistoryEntry> history;
  std::optional<Feedback> feedback;
  int attempt_index = 1;

  // Structured inputs for proposers that do not read prose.
  std::shared_ptr<const SmtTemplate> tmpl;
  std::shared_ptr<const Program> program;  // null for template inputs
  std::vector<BigInt> literals;

  /// Throws std::logic_error unless feedback is absent exactly at attempt 1
  /// and history holds attempt_index - 1 entries.
  void validate() const;
};

struct Proposal {
  Invariant candidate;
  std::string raw_response;
  std::string proposer_id;
  double latency_ms = 0;
  bool balanced = true;  // false when the extracted text has unmatched parentheses
};

/// Candidate text pulled out of a free-form reply.
struct Extraction {
  std::string text;
  bool balanced = true;
};

/// Strips markdown fences (the last fenced block wins) and returns the last
/// balanced top-level parenthesized group. A bare single-token answer such
/// as `true` is returned as is; text with unmatched parentheses is passed
/// through unchanged and flagged. Throws ExtractionError when nothing that
/// could be a term is present.
Extraction extract_invariant(std::string_view raw_response);

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// Initialization prompt at attempt 1, repair prompt afterwards. Layout is
/// documented in docs/prompts.md.
std::vector<ChatMessage> render_prompt(const ProposalContext& ctx);
std::string render_prompt_text(const std::vector<ChatMessage>& messages);

inline constexpr std::string_view kRepairInstruction = "Refine the invariant to rule out this counterexample/error.";

class Proposer {
 public:
  virtual ~Proposer() = default;
  virtual std::string id() const = 0;
  /// Throws ProposerError when no reply can be obtained and ExtractionError
  /// when the reply holds no candidate.
  virtual Proposal propose(const ProposalContext& ctx) = 0;
};

/// Replays a fixed list of candidate texts. Attempt k yields entry k; past
/// the end the last entry repeats.
class ScriptedProposer : public Proposer {
 public:
  explicit ScriptedProposer(std::vector<std::string> candidates);
  /// Per-problem lists keyed by problem name; "*" is the fallback.
  explicit ScriptedProposer(std::map<std::string, std::vector<std::string>> by_problem);

  /// A JSON array of strings, or an object mapping problem names to arrays.
  static ScriptedProposer from_json(std::string_view json);
  static ScriptedProposer from_file(const std::string& path);

  std::string id() const override { return "scripted"; }
  Proposal propose(const ProposalContext& ctx) override;

 private:
  std::map<std::string, std::vector<std::string>> by_problem_;
};

}  // namespace invsynth
