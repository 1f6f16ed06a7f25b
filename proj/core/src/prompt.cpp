#include "invsynth/errors.hpp"
#include "invsynth/proposer.hpp"

#include <sstream>
#include <stdexcept>

namespace invsynth {

const char* to_string(Feedback::Kind kind) noexcept {
  switch (kind) {
    case Feedback::Kind::Counterexample: return "counterexample";
    case Feedback::Kind::ParseError: return "parse-error";
    case Feedback::Kind::Timeout: return "timeout";
    case Feedback::Kind::NoCandidate: return "no-candidate";
  }
  return "?";
}

Feedback::Kind feedback_kind_from_string(std::string_view s) {
  for (auto k : {Feedback::Kind::Counterexample, Feedback::Kind::ParseError, Feedback::Kind::Timeout,
                 Feedback::Kind::NoCandidate}) {
    if (s == to_string(k)) return k;
  }
  throw Error("unknown feedback kind: " + std::string(s));
}

namespace {

const char* obligation_phrase(Obligation o) {
  switch (o) {
    case Obligation::Init: return "initiation (P => I)";
    case Obligation::Inductive: return "consecution (I && B && T => I')";
    case Obligation::Post: return "safety (I && !B => Q)";
  }
  return "?";
}

}  // namespace

Feedback counterexample_feedback(Obligation o, const Model& model) {
  Feedback f;
  f.kind = Feedback::Kind::Counterexample;
  f.obligation = o;
  f.model = model;
  f.text = std::string("The ") + to_string(o) + " check failed: " + obligation_phrase(o) +
           " does not hold. Counterexample model:\n" + model.render();
  return f;
}

Feedback parse_error_feedback(Obligation o, std::string_view solver_message) {
  Feedback f;
  f.kind = Feedback::Kind::ParseError;
  f.obligation = o;
  f.text = std::string("The solver rejected the ") + to_string(o) + " script containing the candidate:\n" +
           std::string(solver_message) + "\n";
  return f;
}

Feedback timeout_feedback(Obligation o) {
  Feedback f;
  f.kind = Feedback::Kind::Timeout;
  f.obligation = o;
  f.text = std::string("solver timeout on ") + to_string(o);
  return f;
}

Feedback no_candidate_feedback(std::string_view reason) {
  Feedback f;
  f.kind = Feedback::Kind::NoCandidate;
  f.text = "No SMT-LIB term could be extracted from the previous reply (" + std::string(reason) + ").";
  return f;
}

void ProposalContext::validate() const {
  if (attempt_index < 1) throw std::logic_error("attempt_index must be >= 1");
  if ((attempt_index == 1) == feedback.has_value()) {
    throw std::logic_error("feedback must be present exactly on repair attempts");
  }
  if (history.size() != static_cast<std::size_t>(attempt_index - 1)) {
    throw std::logic_error("history length must equal attempt_index - 1");
  }
}

namespace {

constexpr const char* kSystemPrompt =
    "You are a program verification assistant. You write loop invariants as SMT-LIB 2 boolean terms over "
    "the program variables. Answer with a single term in a ```smt2 fenced block.";

void append_common(std::ostringstream& os, const ProposalContext& ctx) {
  os << "## Program\n```c\n" << ctx.source_text;
  if (!ctx.source_text.empty() && ctx.source_text.back() != '\n') os << '\n';
  os << "```\n\n";
  os << "## Control-flow graph\n```json\n" << (ctx.cfg_json.empty() ? "{}" : ctx.cfg_json) << "\n```\n\n";
  os << "## SMT-LIB template\n"
     << "`@INV@` stands for the invariant; `@INV_PRIMED@` is the invariant over the post-state symbols.\n";
  static constexpr const char* names[] = {"init", "inductive", "post"};
  for (std::size_t i = 0; i < ctx.template_texts.size(); ++i) {
    os << "### " << names[i] << "\n```smt2\n" << ctx.template_texts[i];
    if (!ctx.template_texts[i].empty() && ctx.template_texts[i].back() != '\n') os << '\n';
    os << "```\n";
  }
  os << '\n';
}

std::string variable_list(const ProposalContext& ctx) {
  std::string out;
  if (!ctx.tmpl) return out;
  for (const auto& v : ctx.tmpl->variables) out += (out.empty() ? "" : ", ") + v;
  return out;
}

}  // namespace

std::vector<ChatMessage> render_prompt(const ProposalContext& ctx) {
  std::ostringstream os;
  append_common(os, ctx);
  std::string vars = variable_list(ctx);
  if (ctx.attempt_index <= 1) {
    os << "## Task\nPropose a loop invariant I for the loop that makes all three checks unsat.";
    if (!vars.empty()) os << " Use only the variables " << vars << ".";
    os << " Reply with the SMT-LIB term only.\n";
  } else {
    os << "## Previous candidates\n";
    for (std::size_t i = 0; i < ctx.history.size(); ++i) {
      os << (i + 1) << ". " << ctx.history[i].candidate << "\n   result: " << ctx.history[i].outcome << '\n';
    }
    os << "\n## Feedback\n" << (ctx.feedback ? ctx.feedback->text : std::string());
    if (ctx.feedback && !ctx.feedback->text.empty() && ctx.feedback->text.back() != '\n') os << '\n';
    os << "\n## Task\n" << kRepairInstruction;
    if (!vars.empty()) os << " Use only the variables " << vars << ".";
    os << " Reply with the SMT-LIB term only.\n";
  }
  return {{"system", kSystemPrompt}, {"user", os.str()}};
}

std::string render_prompt_text(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) {
    if (!out.empty()) out += '\n';
    out += "[" + m.role + "]\n" + m.content;
  }
  return out;
}

}  // namespace invsynth
