#include "cli.hpp"

#include <invsynth/bench.hpp>
#include <invsynth/cfg.hpp>
#include <invsynth/errors.hpp>
#include <invsynth/orchestrator.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace invsynth::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string input;
  std::string inv;
  std::string solver;
  int timeout_ms = 5000;
  int max_iters = 5;
  std::string proposer = "houdini";
  std::string endpoint;
  std::string model;
  int parallel = 1;
  bool json = false;
  std::string out;
  std::uint64_t seed = 0;
};

// Raised for conditions mapped to kEnvironment.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

bool is_executable(const fs::path& p) { return ::access(p.c_str(), X_OK) == 0 && !fs::is_directory(p); }

std::string resolve_executable(const std::string& name) {
  if (name.find('/') != std::string::npos) return is_executable(name) ? name : std::string();
  const char* path = std::getenv("PATH");
  std::stringstream dirs(path ? path : "");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    fs::path candidate = fs::path(dir.empty() ? "." : dir) / name;
    if (is_executable(candidate)) return candidate.string();
  }
  return {};
}

SolverConfig solver_config(const Options& o) {
  SolverConfig c = SolverConfig::from_environment();
  if (!o.solver.empty()) c.executable = o.solver;
  if (o.timeout_ms <= 0) throw UsageError("--timeout-ms must be positive");
  c.timeout = std::chrono::milliseconds(o.timeout_ms);
  if (resolve_executable(c.executable).empty()) {
    throw EnvironmentError("solver '" + c.executable + "' not found (use --solver or $" + kSolverEnvVar + ")");
  }
  return c;
}

Problem load_problem(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError("cannot read input file " + path);
  try {
    return Problem::load(path);
  } catch (const FrontendError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EnvironmentError("cannot write " + path.string());
  out << text;
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw EnvironmentError("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

json verdict_json(const CheckVerdict& v) { return json::parse(verdict_to_json(v)); }

std::string indent(const std::string& text, const std::string& pad) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out += pad + line + "\n";
  return out;
}

void print_verdict(std::ostream& os, const char* label, const CheckVerdict& v) {
  os << label << ": " << verdict_name(v) << '\n';
  if (auto* ce = std::get_if<Counterexample>(&v)) os << indent(ce->model.render(), "  ");
  if (auto* pe = std::get_if<ParseError>(&v)) os << indent(pe->message, "  ");
  if (auto* sf = std::get_if<SolverFailure>(&v)) os << indent(sf->message, "  ");
}

int cmd_parse(const Options& o, const Io& io) {
  Problem problem = load_problem(o.input);
  if (!problem.program) throw UsageError("parse expects a C source file");
  const Program& p = *problem.program;
  if (o.json) {
    json j;
    j["name"] = p.name;
    j["variables"] = p.variables;
    j["precondition"] = p.explicit_precondition ? json(to_c(*p.explicit_precondition)) : json(nullptr);
    j["prefix"] = to_c(p.prefix);
    j["guard"] = to_c(p.guard);
    j["body"] = to_c(p.body);
    j["postcondition"] = to_c(p.postcondition);
    j["cfg"] = json::parse(problem.cfg_json);
    io.out << j.dump(2) << '\n';
  } else {
    io.out << print_program(p) << '\n' << problem.cfg_json << '\n';
  }
  return kSuccess;
}

int cmd_template(const Options& o, const Io& io) {
  Problem problem = load_problem(o.input);
  const SmtTemplate& t = *problem.tmpl;
  if (!o.out.empty()) {
    fs::path dir = ensure_dir(o.out);
    std::vector<fs::path> written;
    for (Obligation ob : kObligations) {
      fs::path path = dir / (problem.name + "." + to_string(ob) + ".smt2");
      write_text(path, t.script(ob));
      written.push_back(path);
    }
    fs::path bundle = dir / (problem.name + ".smt2t");
    write_text(bundle, write_template_file(t));
    written.push_back(bundle);
    if (o.json) {
      json j = json::array();
      for (const auto& p : written) j.push_back(p.string());
      io.out << j.dump(2) << '\n';
    } else {
      for (const auto& p : written) io.out << p.string() << '\n';
    }
    return kSuccess;
  }
  if (o.json) {
    json j;
    for (Obligation ob : kObligations) j[to_string(ob)] = t.script(ob);
    io.out << j.dump(2) << '\n';
  } else {
    io.out << write_template_file(t);
  }
  return kSuccess;
}

int cmd_check(const Options& o, const Io& io) {
  Problem problem = load_problem(o.input);
  SolverConfig solver = solver_config(o);
  Invariant candidate = Invariant::from_text(o.inv, problem.tmpl->sorts());
  auto results = verify_only(problem, candidate, solver);
  bool all_valid = true, failure = false;
  for (const auto& r : results) {
    all_valid = all_valid && is_valid(r.verdict);
    failure = failure || std::holds_alternative<SolverFailure>(r.verdict);
  }
  if (o.json) {
    json j;
    j["program"] = problem.name;
    j["candidate"] = candidate.smt_text;
    j["valid"] = all_valid;
    json checks = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      checks.push_back({{"obligation", to_string(kObligations[i])},
                        {"verdict", verdict_json(results[i].verdict)},
                        {"elapsed_ms", results[i].elapsed_ms},
                        {"memory_mb", results[i].peak_memory_mb}});
    }
    j["checks"] = std::move(checks);
    io.out << j.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < results.size(); ++i) print_verdict(io.out, to_string(kObligations[i]), results[i].verdict);
  }
  if (failure) {
    io.err << "error: the solver failed on at least one check\n";
    return kEnvironment;
  }
  return all_valid ? kSuccess : kFailure;
}

ProposerOptions proposer_options(const Options& o, const Io& io, const SolverConfig& solver) {
  ProposerOptions p;
  p.solver = solver;
  p.seed = o.seed;
  p.transport = io.transport;
  if (!o.endpoint.empty()) p.llm.base_url = o.endpoint;
  if (!o.model.empty()) p.llm.model = o.model;
  p.llm.api_key = LlmConfig::api_key_from_environment();
  if (o.proposer == "llm" && p.llm.api_key.empty() && p.llm.base_url == kDefaultEndpoint) {
    throw EnvironmentError(std::string("no API key: set $") + kApiKeyEnvVar + " or $" + kFallbackApiKeyEnvVar +
                           ", or point --endpoint at another server");
  }
  return p;
}

SynthesisConfig synthesis_config(const Options& o, const SolverConfig& solver) {
  if (o.max_iters < 1) throw UsageError("--max-iters must be >= 1");
  SynthesisConfig c;
  c.max_iterations = o.max_iters;
  c.solver = solver;
  c.proposer_id = o.proposer;
  c.seed = o.seed;
  return c;
}

int cmd_synth(const Options& o, const Io& io) {
  Problem problem = load_problem(o.input);
  SolverConfig solver = solver_config(o);
  SynthesisConfig config = synthesis_config(o, solver);
  ProposerOptions popts = proposer_options(o, io, solver);
  std::unique_ptr<Proposer> proposer;
  try {
    proposer = make_proposer(config.proposer_id, popts);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  SynthesisTrace trace = synthesize(problem, config, *proposer);

  if (!o.out.empty()) {
    fs::path dir = ensure_dir(o.out) / "traces";
    std::error_code ec;
    fs::create_directories(dir, ec);
    write_text(dir / (problem.name + ".json"), trace_to_json(trace));
  }
  if (o.json) {
    io.out << trace_to_json(trace) << '\n';
  } else {
    for (const auto& it : trace.iterations) {
      io.out << "attempt " << it.attempt << ": " << (it.candidate.empty() ? "(no candidate)" : it.candidate) << '\n';
      for (const auto& c : it.checks) io.out << "  " << to_string(c.obligation) << ": " << verdict_name(c.verdict) << '\n';
    }
    io.out << "status: " << to_string(trace.status) << '\n';
    if (trace.invariant) io.out << "invariant: " << *trace.invariant << '\n';
    io.out << "proposals: " << trace.proposals() << ", time: " << trace.wall_ms / 1000.0
           << " s, peak solver memory: " << trace.peak_memory_mb << " MB\n";
  }
  if (!trace.error.empty()) io.err << "error: " << trace.error << '\n';
  switch (trace.status) {
    case SynthesisStatus::Solved: return kSuccess;
    case SynthesisStatus::Exhausted: return kFailure;
    default: return kEnvironment;
  }
}

int cmd_bench(const Options& o, const Io& io) {
  if (!fs::is_directory(o.input)) throw UsageError("corpus directory not found: " + o.input);
  if (o.parallel < 1) throw UsageError("--parallel must be >= 1");
  SolverConfig solver = solver_config(o);
  SynthesisConfig config = synthesis_config(o, solver);
  BenchOptions bopts;
  bopts.proposer = proposer_options(o, io, solver);
  if (!o.out.empty()) bopts.out_dir = ensure_dir(o.out);
  if (o.proposer != "llm" && o.proposer != "houdini" && o.proposer.rfind("scripted:", 0) != 0) {
    throw UsageError("unknown proposer '" + o.proposer + "'");
  }
  BenchReport report;
  try {
    report = run_corpus(o.input, config, o.parallel, bopts);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  io.out << emit_report(report, o.json ? ReportFormat::Json : ReportFormat::Text);
  int mismatches = 0;
  for (const auto& row : report.rows) {
    if (row.expected_status && *row.expected_status != row.status) {
      ++mismatches;
      io.err << "regression: " << row.id << " expected " << *row.expected_status << ", got " << row.status << '\n';
    }
  }
  return mismatches ? kFailure : kSuccess;
}

void add_solver_flags(CLI::App* sub, Options& o) {
  sub->add_option("--solver", o.solver, "SMT solver executable (default: $INVSYNTH_SOLVER or z3)");
  sub->add_option("--timeout-ms", o.timeout_ms, "Per-query solver timeout in milliseconds")->capture_default_str();
}

void add_synthesis_flags(CLI::App* sub, Options& o) {
  add_solver_flags(sub, o);
  sub->add_option("--max-iters", o.max_iters, "Maximum number of proposals")->capture_default_str();
  sub->add_option("--proposer", o.proposer, "llm, houdini, or scripted:<file>")->capture_default_str();
  sub->add_option("--endpoint", o.endpoint, "Chat-completions base URL for the llm proposer");
  sub->add_option("--model", o.model, "Model name for the llm proposer");
  sub->add_option("--seed", o.seed, "Seed for enumerative tie-breaking")->capture_default_str();
  sub->add_option("--out", o.out, "Output directory for traces");
}

}  // namespace

int run(const std::vector<std::string>& args, const Io& io) {
  Options o;
  CLI::App app{"Loop invariant synthesis with an SMT solver in the loop", "invsynth"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "invsynth 0.3.0");

  auto* parse = app.add_subcommand("parse", "Print the parsed program and its control-flow graph");
  parse->add_option("file", o.input, "C source file")->required();
  parse->add_flag("--json", o.json, "Machine-readable output");

  auto* tmpl = app.add_subcommand("template", "Emit the three verification-condition scripts with placeholders");
  tmpl->add_option("file", o.input, "C source or .smt2t template")->required();
  tmpl->add_option("--out", o.out, "Directory for <name>.{init,inductive,post}.smt2 and <name>.smt2t");
  tmpl->add_flag("--json", o.json, "Machine-readable output");

  auto* check = app.add_subcommand("check", "Check one candidate invariant against all three obligations");
  check->add_option("file", o.input, "C source or .smt2t template")->required();
  check->add_option("--inv", o.inv, "Candidate invariant as an SMT-LIB term")->required();
  add_solver_flags(check, o);
  check->add_flag("--json", o.json, "Machine-readable output");

  auto* synth = app.add_subcommand("synth", "Run the generate-and-check loop");
  synth->add_option("file", o.input, "C source or .smt2t template")->required();
  add_synthesis_flags(synth, o);
  synth->add_flag("--json", o.json, "Print the trace as JSON");

  auto* bench = app.add_subcommand("bench", "Run a corpus and report aggregate metrics");
  bench->add_option("dir", o.input, "Corpus directory")->required();
  add_synthesis_flags(bench, o);
  bench->add_option("--parallel", o.parallel, "Worker threads")->capture_default_str();
  bench->add_flag("--json", o.json, "Print the report as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, io.out, io.err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (parse->parsed()) return cmd_parse(o, io);
    if (tmpl->parsed()) return cmd_template(o, io);
    if (check->parsed()) return cmd_check(o, io);
    if (synth->parsed()) return cmd_synth(o, io);
    if (bench->parsed()) return cmd_bench(o, io);
  } catch (const UsageError& e) {
    io.err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const EnvironmentError& e) {
    io.err << "error: " << e.what() << '\n';
    return kEnvironment;
  } catch (const SolverError& e) {
    io.err << "error: " << e.what() << '\n';
    return kEnvironment;
  } catch (const ProposerError& e) {
    io.err << "error: " << e.what() << '\n';
    return kEnvironment;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, Io{std::cout, std::cerr, nullptr});
}

}  // namespace invsynth::cli
