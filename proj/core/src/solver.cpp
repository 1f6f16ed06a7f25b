#include "invsynth/solver.hpp"

#include "invsynth/errors.hpp"
#include "invsynth/smt_text.hpp"
#include "process.hpp"

#include <cstdlib>
#include <sstream>

namespace invsynth {

SolverConfig SolverConfig::from_environment() {
  SolverConfig c;
  if (const char* env = std::getenv(kSolverEnvVar); env && *env) c.executable = env;
  return c;
}

void SolverConfig::validate() const {
  if (executable.empty()) throw Error("solver executable path is empty");
  if (timeout.count() <= 0) throw Error("solver timeout must be positive");
}

Env Model::env() const {
  Env e;
  for (const auto& [k, v] : ints) e[k] = v;
  for (const auto& [k, v] : bools) e[k] = v;
  return e;
}

std::string Model::render() const {
  std::map<std::string, std::string> lines;
  for (const auto& [k, v] : ints) lines[k] = v.str();
  for (const auto& [k, v] : bools) lines[k] = v ? "true" : "false";
  std::ostringstream os;
  for (const auto& [k, v] : lines) {
    os << k << " = " << v;
    if (defaulted.count(k)) os << "  (unconstrained)";
    os << '\n';
  }
  return os.str();
}

const char* verdict_name(const CheckVerdict& v) noexcept {
  switch (v.index()) {
    case 0: return "Valid";
    case 1: return "Counterexample";
    case 2: return "ParseError";
    case 3: return "Timeout";
    default: return "SolverFailure";
  }
}

bool is_valid(const CheckVerdict& v) noexcept { return std::holds_alternative<Valid>(v); }

namespace {

bool is_define_fun(const SExpr& s) { return s.is_list() && !s.items.empty() && s.items[0].is_symbol("define-fun"); }

bool looks_like_model(const SExpr& s) {
  if (!s.is_list()) return false;
  if (!s.items.empty() && s.items[0].is_symbol("model")) return true;
  if (s.items.empty()) return true;
  for (const auto& item : s.items)
    if (!is_define_fun(item)) return false;
  return true;
}

Model model_from_sexpr(const SExpr& block, const SortMap& expected) {
  Model m;
  std::size_t first = (!block.items.empty() && block.items[0].is_symbol("model")) ? 1 : 0;
  for (std::size_t i = first; i < block.items.size(); ++i) {
    const SExpr& def = block.items[i];
    if (!is_define_fun(def) || def.items.size() != 5 || !def.items[1].is_atom() || !def.items[2].is_list()) {
      throw SolverError("malformed model entry: " + to_string(def));
    }
    if (!def.items[2].items.empty()) continue;  // function interpretation, not a constant
    const std::string& name = def.items[1].atom;
    Expr value;
    try {
      value = sexpr_to_expr(def.items[4], {});
    } catch (const Error& e) {
      throw SolverError("cannot read model value for " + name + ": " + e.what());
    }
    if (value.op() == Op::Neg && value.arg(0).op() == Op::IntConst) value = Expr::int_const(-value.arg(0).int_value());
    if (value.op() == Op::IntConst) m.ints[name] = value.int_value();
    else if (value.op() == Op::BoolConst) m.bools[name] = value.bool_value();
    else throw SolverError("unsupported model value for " + name + ": " + to_string(def.items[4]));
  }
  for (const auto& [name, sort] : expected) {
    if (m.ints.count(name) || m.bools.count(name)) continue;
    if (sort == Sort::Int) m.ints[name] = 0;
    else m.bools[name] = false;
    m.defaulted.insert(name);
  }
  return m;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Splits solver output into top-level items while keeping their raw text,
// so error messages can be forwarded verbatim.
struct OutputItem {
  SExpr sexpr;
  std::string raw;
};

std::vector<OutputItem> split_output(std::string_view text) {
  std::vector<OutputItem> items;
  auto parsed = read_sexprs(text);
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    std::size_t begin = parsed[i].offset;
    std::size_t end = i + 1 < parsed.size() ? parsed[i + 1].offset : text.size();
    items.push_back({std::move(parsed[i]), trim(text.substr(begin, end - begin))});
  }
  return items;
}

bool is_error_item(const SExpr& s) { return s.is_list() && !s.items.empty() && s.items[0].is_symbol("error"); }

}  // namespace

Model parse_model(std::string_view solver_output, const SortMap& expected_vars) {
  std::vector<SExpr> items;
  try {
    items = read_sexprs(solver_output);
  } catch (const SExprError& e) {
    throw SolverError(std::string("malformed model text: ") + e.what());
  }
  for (const auto& item : items) {
    if (looks_like_model(item)) return model_from_sexpr(item, expected_vars);
  }
  // No model block at all: treat as empty.
  SExpr empty;
  empty.kind = SExpr::Kind::List;
  bool only_answers = true;
  for (const auto& item : items)
    if (!(item.is_atom() && (item.atom == "sat" || item.atom == "unsat" || item.atom == "unknown"))) only_answers = false;
  if (!only_answers) throw SolverError("no model found in solver output");
  return model_from_sexpr(empty, expected_vars);
}

CheckVerdict classify_output(std::string_view stdout_text, std::string_view stderr_text, int exit_status,
                             bool timed_out, const SortMap& expected) {
  if (timed_out) return Timeout{};
  std::vector<OutputItem> items;
  try {
    items = split_output(stdout_text);
  } catch (const SExprError& e) {
    return SolverFailure{"unreadable solver output: " + std::string(e.what()) + "\n" + std::string(stdout_text),
                         exit_status};
  }
  std::vector<std::string> errors;
  std::size_t answer = items.size();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const SExpr& s = items[i].sexpr;
    if (s.is_atom() && (s.atom == "sat" || s.atom == "unsat" || s.atom == "unknown")) {
      answer = i;
      break;
    }
    if (is_error_item(s)) errors.push_back(items[i].raw);
  }
  std::string err_stream = trim(stderr_text);
  if (!errors.empty() || (answer == items.size() && !err_stream.empty() && exit_status != 0 && exit_status < 128)) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
    if (!err_stream.empty()) msg += (msg.empty() ? "" : "\n") + err_stream;
    return ParseError{msg};
  }
  if (answer == items.size()) {
    std::string msg = "no sat/unsat answer from solver";
    if (exit_status >= 128) msg += " (killed by signal " + std::to_string(exit_status - 128) + ")";
    if (!err_stream.empty()) msg += ": " + err_stream;
    return SolverFailure{msg, exit_status};
  }
  const std::string& word = items[answer].sexpr.atom;
  if (word == "unsat") return Valid{};
  if (word == "unknown") return SolverFailure{"solver answered unknown", exit_status};
  for (std::size_t i = answer + 1; i < items.size(); ++i) {
    if (is_error_item(items[i].sexpr)) return SolverFailure{"sat but no model: " + items[i].raw, exit_status};
    if (looks_like_model(items[i].sexpr)) {
      try {
        return Counterexample{model_from_sexpr(items[i].sexpr, expected)};
      } catch (const SolverError& e) {
        return SolverFailure{e.what(), exit_status};
      }
    }
  }
  SExpr empty;
  empty.kind = SExpr::Kind::List;
  return Counterexample{model_from_sexpr(empty, expected)};
}

SortMap declared_constants(std::string_view script) {
  SortMap out;
  auto visit = [&](const SExpr& s) {
    if (!s.is_list() || s.items.empty() || !s.items[0].is_atom()) return;
    const std::string& head = s.items[0].atom;
    const SExpr* sort = nullptr;
    if (head == "declare-const" && s.items.size() == 3) sort = &s.items[2];
    else if (head == "declare-fun" && s.items.size() == 4 && s.items[2].is_list() && s.items[2].items.empty()) sort = &s.items[3];
    if (!sort || !s.items[1].is_atom()) return;
    if (sort->is_symbol("Int")) out[s.items[1].atom] = Sort::Int;
    else if (sort->is_symbol("Bool")) out[s.items[1].atom] = Sort::Bool;
  };
  try {
    for (const auto& s : read_sexprs(script)) visit(s);
  } catch (const SExprError&) {
    // Malformed script: fall back to line-wise reading of declarations.
    std::istringstream in{std::string(script)};
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("(declare-", 0) != 0) continue;
      try {
        for (const auto& s : read_sexprs(line)) visit(s);
      } catch (const SExprError&) {
      }
    }
  }
  return out;
}

bool script_assertion_holds(std::string_view script, const Model& model) {
  auto sorts = declared_constants(script);
  std::vector<Expr> asserted;
  for (const auto& s : read_sexprs(script)) {
    if (s.is_list() && s.items.size() == 2 && s.items[0].is_symbol("assert")) {
      asserted.push_back(sexpr_to_expr(s.items[1], sorts));
    }
  }
  Env env = model.env();
  for (const auto& [name, sort] : sorts) {
    if (env.count(name)) continue;
    if (sort == Sort::Int) env[name] = BigInt(0);
    else env[name] = false;
  }
  return evaluate_bool(and_of(std::move(asserted)), env);
}

CheckResult check_script(std::string_view script, const SolverConfig& config) {
  config.validate();
  detail::TempFile file(".smt2", script);
  std::vector<std::string> argv{config.executable};
  argv.insert(argv.end(), config.extra_args.begin(), config.extra_args.end());
  argv.push_back(file.path().string());

  auto proc = detail::run_process(argv, config.timeout);
  CheckResult r;
  r.elapsed_ms = proc.elapsed_ms;
  r.peak_memory_mb = static_cast<double>(proc.peak_rss_kb) / 1024.0;
  if (proc.spawn_error) {
    r.verdict = SolverFailure{*proc.spawn_error, -1};
    return r;
  }
  r.output = proc.stdout_text;
  if (!proc.stderr_text.empty()) r.output += proc.stderr_text;
  r.verdict = classify_output(proc.stdout_text, proc.stderr_text, proc.exit_status, proc.timed_out,
                              declared_constants(script));
  return r;
}

}  // namespace invsynth
