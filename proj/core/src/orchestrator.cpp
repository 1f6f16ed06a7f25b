#include "invsynth/orchestrator.hpp"

#include "invsynth/cfg.hpp"
#include "invsynth/errors.hpp"
#include "invsynth/houdini.hpp"
#include "invsynth/smt_text.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace invsynth {

Problem Problem::from_source(std::string_view source, std::string name) {
  Problem p;
  p.name = std::move(name);
  p.source_text = std::string(source);
  auto program = std::make_shared<Program>(parse_program(source, p.name));
  p.tmpl = std::make_shared<SmtTemplate>(make_template(*program));
  p.cfg_json = cfg_to_json(build_cfg(*program));
  p.program = std::move(program);
  return p;
}

Problem Problem::from_template(std::string_view text, std::string name) {
  Problem p;
  p.name = std::move(name);
  p.source_text = std::string(text);
  p.tmpl = std::make_shared<SmtTemplate>(parse_template_file(text, p.name));
  return p;
}

Problem Problem::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string name = path.stem().string();
  if (path.extension() == ".smt2t") return from_template(ss.str(), name);
  return from_source(ss.str(), name);
}

std::vector<BigInt> Problem::literals() const {
  if (program) return program_literals(*program);
  std::set<BigInt> out;
  for (Obligation o : kObligations) {
    for (auto& n : numerals_in(tmpl->script(o))) out.insert(n);
  }
  return {out.begin(), out.end()};
}

void SynthesisConfig::validate() const {
  if (max_iterations < 1) throw Error("max_iterations must be >= 1");
  solver.validate();
}

std::unique_ptr<Proposer> make_proposer(std::string_view id, const ProposerOptions& options) {
  if (id == "llm") {
    auto transport = options.transport ? options.transport : make_http_transport();
    return std::make_unique<LlmProposer>(options.llm, std::move(transport));
  }
  if (id == "houdini") return std::make_unique<HoudiniProposer>(options.solver, options.seed);
  constexpr std::string_view scripted = "scripted:";
  if (id.substr(0, scripted.size()) == scripted) {
    auto path = std::string(id.substr(scripted.size()));
    if (path.empty()) throw Error("scripted proposer needs a file: scripted:<file>");
    return std::make_unique<ScriptedProposer>(ScriptedProposer::from_file(path));
  }
  throw Error("unknown proposer '" + std::string(id) + "' (expected llm, houdini or scripted:<file>)");
}

const char* to_string(SynthesisStatus s) noexcept {
  switch (s) {
    case SynthesisStatus::Solved: return "Solved";
    case SynthesisStatus::Exhausted: return "Exhausted";
    case SynthesisStatus::ProposerError: return "ProposerError";
    case SynthesisStatus::SolverError: return "SolverError";
  }
  return "?";
}

SynthesisStatus synthesis_status_from_string(std::string_view s) {
  for (auto v : {SynthesisStatus::Solved, SynthesisStatus::Exhausted, SynthesisStatus::ProposerError,
                 SynthesisStatus::SolverError}) {
    if (s == to_string(v)) return v;
  }
  throw Error("unknown synthesis status: " + std::string(s));
}

namespace {

ProposalContext make_context(const Problem& problem, int attempt, const std::vector<HistoryEntry>& history,
                             const std::optional<Feedback>& feedback, const std::vector<BigInt>& literals) {
  ProposalContext ctx;
  ctx.problem_name = problem.name;
  ctx.source_text = problem.source_text;
  ctx.cfg_json = problem.cfg_json;
  ctx.template_texts = {problem.tmpl->init_script, problem.tmpl->inductive_script, problem.tmpl->post_script};
  ctx.history = history;
  ctx.feedback = feedback;
  ctx.attempt_index = attempt;
  ctx.tmpl = problem.tmpl;
  ctx.program = problem.program;
  ctx.literals = literals;
  ctx.validate();
  return ctx;
}

}  // namespace

SynthesisTrace synthesize(const Problem& problem, const SynthesisConfig& config, Proposer& proposer) {
  config.validate();
  using clock = std::chrono::steady_clock;
  auto start = clock::now();

  SynthesisTrace trace;
  trace.program_name = problem.name;
  trace.proposer_id = proposer.id();
  trace.max_iterations = config.max_iterations;
  trace.timeout_ms = config.solver.timeout.count();
  trace.seed = config.seed;

  auto finish = [&](SynthesisStatus status) {
    trace.status = status;
    trace.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    return trace;
  };

  const auto literals = problem.literals();
  std::vector<HistoryEntry> history;
  std::optional<Feedback> feedback;

  for (int attempt = 1; attempt <= config.max_iterations; ++attempt) {
    ProposalContext ctx = make_context(problem, attempt, history, feedback, literals);
    IterationRecord rec;
    rec.attempt = attempt;
    rec.prompt = render_prompt_text(render_prompt(ctx));

    Proposal proposal;
    auto proposal_start = clock::now();
    try {
      proposal = proposer.propose(ctx);
    } catch (const ExtractionError& e) {
      rec.raw_response = e.raw_response();
      rec.proposer_id = proposer.id();
      rec.proposal_ms = std::chrono::duration<double, std::milli>(clock::now() - proposal_start).count();
      feedback = no_candidate_feedback(e.what());
      rec.feedback = feedback;
      history.push_back({"(none)", "no candidate in reply"});
      trace.iterations.push_back(std::move(rec));
      continue;
    } catch (const ProposerError& e) {
      trace.error = e.what();
      return finish(SynthesisStatus::ProposerError);
    }
    rec.raw_response = proposal.raw_response;
    rec.candidate = proposal.candidate.smt_text;
    rec.balanced = proposal.balanced;
    rec.proposer_id = proposal.proposer_id;
    rec.proposal_ms = std::chrono::duration<double, std::milli>(clock::now() - proposal_start).count();

    VcBundle bundle = splice(*problem.tmpl, proposal.candidate);
    std::optional<Feedback> next;
    bool all_valid = true;
    for (Obligation o : kObligations) {
      CheckRecord check;
      check.obligation = o;
      check.script = bundle.script(o);
      auto result = check_script(check.script, config.solver);
      check.verdict = result.verdict;
      check.elapsed_ms = result.elapsed_ms;
      check.memory_mb = result.peak_memory_mb;
      check.solver_output = result.output;
      trace.solver_ms += result.elapsed_ms;
      trace.peak_memory_mb = std::max(trace.peak_memory_mb, result.peak_memory_mb);
      rec.checks.push_back(check);

      if (is_valid(result.verdict)) continue;
      all_valid = false;
      if (auto* ce = std::get_if<Counterexample>(&result.verdict)) {
        next = counterexample_feedback(o, ce->model);
      } else if (auto* pe = std::get_if<ParseError>(&result.verdict)) {
        next = parse_error_feedback(o, pe->message);
      } else if (std::holds_alternative<Timeout>(result.verdict)) {
        next = timeout_feedback(o);
      } else {
        const auto& sf = std::get<SolverFailure>(result.verdict);
        trace.error = std::string(to_string(o)) + " check: " + sf.message;
        trace.iterations.push_back(std::move(rec));
        return finish(SynthesisStatus::SolverError);
      }
      history.push_back({proposal.candidate.smt_text, std::string(to_string(o)) + ": " + verdict_name(result.verdict)});
      break;
    }

    if (all_valid) {
      trace.invariant = proposal.candidate.smt_text;
      trace.iterations.push_back(std::move(rec));
      return finish(SynthesisStatus::Solved);
    }
    rec.feedback = next;
    feedback = std::move(next);
    trace.iterations.push_back(std::move(rec));
  }
  return finish(SynthesisStatus::Exhausted);
}

SynthesisTrace synthesize(const Problem& problem, const SynthesisConfig& config, const ProposerOptions& options) {
  ProposerOptions opts = options;
  opts.solver = config.solver;
  opts.seed = config.seed;
  auto proposer = make_proposer(config.proposer_id, opts);
  return synthesize(problem, config, *proposer);
}

std::array<CheckResult, 3> verify_only(const Problem& problem, const Invariant& candidate, const SolverConfig& config) {
  config.validate();
  VcBundle bundle = splice(*problem.tmpl, candidate);
  return {check_script(bundle.init_script, config), check_script(bundle.inductive_script, config),
          check_script(bundle.post_script, config)};
}

}  // namespace invsynth
