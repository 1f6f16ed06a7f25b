#include "invsynth/errors.hpp"
#include "invsynth/orchestrator.hpp"

#include <json.hpp>

#include <limits>

namespace invsynth {

using json = nlohmann::ordered_json;

namespace {

json bigint_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(v);
  }
  return v.str();
}

BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw Error("expected an integer in trace JSON");
}

json model_to_json(const Model& m) {
  json ints = json::object();
  for (const auto& [k, v] : m.ints) ints[k] = bigint_to_json(v);
  json bools = json::object();
  for (const auto& [k, v] : m.bools) bools[k] = v;
  json defaulted = json::array();
  for (const auto& k : m.defaulted) defaulted.push_back(k);
  return {{"ints", ints}, {"bools", bools}, {"defaulted", defaulted}};
}

Model model_from_json(const json& j) {
  Model m;
  for (const auto& [k, v] : j.at("ints").items()) m.ints[k] = bigint_from_json(v);
  for (const auto& [k, v] : j.at("bools").items()) m.bools[k] = v.get<bool>();
  for (const auto& k : j.at("defaulted")) m.defaulted.insert(k.get<std::string>());
  return m;
}

json verdict_json(const CheckVerdict& v) {
  json j;
  j["kind"] = verdict_name(v);
  if (auto* ce = std::get_if<Counterexample>(&v)) j["model"] = model_to_json(ce->model);
  if (auto* pe = std::get_if<ParseError>(&v)) j["message"] = pe->message;
  if (auto* sf = std::get_if<SolverFailure>(&v)) {
    j["message"] = sf->message;
    j["exit_status"] = sf->exit_status;
  }
  return j;
}

CheckVerdict verdict_from(const json& j) {
  auto kind = j.at("kind").get<std::string>();
  if (kind == "Valid") return Valid{};
  if (kind == "Counterexample") return Counterexample{model_from_json(j.at("model"))};
  if (kind == "ParseError") return ParseError{j.at("message").get<std::string>()};
  if (kind == "Timeout") return Timeout{};
  if (kind == "SolverFailure") return SolverFailure{j.at("message").get<std::string>(), j.at("exit_status").get<int>()};
  throw Error("unknown verdict kind: " + kind);
}

json feedback_json(const Feedback& f) {
  json j;
  j["kind"] = to_string(f.kind);
  j["obligation"] = f.obligation ? json(to_string(*f.obligation)) : json(nullptr);
  j["text"] = f.text;
  j["model"] = f.model ? model_to_json(*f.model) : json(nullptr);
  return j;
}

Feedback feedback_from(const json& j) {
  Feedback f;
  f.kind = feedback_kind_from_string(j.at("kind").get<std::string>());
  if (!j.at("obligation").is_null()) f.obligation = obligation_from_string(j.at("obligation").get<std::string>());
  f.text = j.at("text").get<std::string>();
  if (!j.at("model").is_null()) f.model = model_from_json(j.at("model"));
  return f;
}

}  // namespace

std::string verdict_to_json(const CheckVerdict& v) { return verdict_json(v).dump(); }

CheckVerdict verdict_from_json(std::string_view text) {
  try {
    return verdict_from(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(std::string("invalid verdict JSON: ") + e.what());
  }
}

std::string trace_to_json(const SynthesisTrace& t, int indent) {
  json j;
  j["program"] = t.program_name;
  j["proposer"] = t.proposer_id;
  j["config"] = {{"max_iterations", t.max_iterations}, {"timeout_ms", t.timeout_ms}, {"seed", t.seed}};
  j["status"] = to_string(t.status);
  j["invariant"] = t.invariant ? json(*t.invariant) : json(nullptr);
  j["error"] = t.error;
  j["totals"] = {{"wall_ms", t.wall_ms},
                 {"solver_ms", t.solver_ms},
                 {"proposals", t.proposals()},
                 {"peak_memory_mb", t.peak_memory_mb}};
  json iters = json::array();
  for (const auto& r : t.iterations) {
    json ir;
    ir["attempt"] = r.attempt;
    ir["proposer"] = r.proposer_id;
    ir["prompt"] = r.prompt;
    ir["raw_response"] = r.raw_response;
    ir["candidate"] = r.candidate;
    ir["balanced"] = r.balanced;
    ir["proposal_ms"] = r.proposal_ms;
    json checks = json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"obligation", to_string(c.obligation)},
                        {"verdict", verdict_json(c.verdict)},
                        {"elapsed_ms", c.elapsed_ms},
                        {"memory_mb", c.memory_mb},
                        {"script", c.script},
                        {"solver_output", c.solver_output}});
    }
    ir["checks"] = std::move(checks);
    ir["feedback"] = r.feedback ? feedback_json(*r.feedback) : json(nullptr);
    iters.push_back(std::move(ir));
  }
  j["iterations"] = std::move(iters);
  return j.dump(indent);
}

SynthesisTrace trace_from_json(std::string_view text) {
  try {
    json j = json::parse(text);
    SynthesisTrace t;
    t.program_name = j.at("program").get<std::string>();
    t.proposer_id = j.at("proposer").get<std::string>();
    t.max_iterations = j.at("config").at("max_iterations").get<int>();
    t.timeout_ms = j.at("config").at("timeout_ms").get<std::int64_t>();
    t.seed = j.at("config").at("seed").get<std::uint64_t>();
    t.status = synthesis_status_from_string(j.at("status").get<std::string>());
    if (!j.at("invariant").is_null()) t.invariant = j.at("invariant").get<std::string>();
    t.error = j.at("error").get<std::string>();
    t.wall_ms = j.at("totals").at("wall_ms").get<double>();
    t.solver_ms = j.at("totals").at("solver_ms").get<double>();
    t.peak_memory_mb = j.at("totals").at("peak_memory_mb").get<double>();
    for (const auto& ir : j.at("iterations")) {
      IterationRecord r;
      r.attempt = ir.at("attempt").get<int>();
      r.proposer_id = ir.at("proposer").get<std::string>();
      r.prompt = ir.at("prompt").get<std::string>();
      r.raw_response = ir.at("raw_response").get<std::string>();
      r.candidate = ir.at("candidate").get<std::string>();
      r.balanced = ir.at("balanced").get<bool>();
      r.proposal_ms = ir.at("proposal_ms").get<double>();
      for (const auto& c : ir.at("checks")) {
        CheckRecord cr;
        cr.obligation = obligation_from_string(c.at("obligation").get<std::string>());
        cr.verdict = verdict_from(c.at("verdict"));
        cr.elapsed_ms = c.at("elapsed_ms").get<double>();
        cr.memory_mb = c.at("memory_mb").get<double>();
        cr.script = c.at("script").get<std::string>();
        cr.solver_output = c.at("solver_output").get<std::string>();
        r.checks.push_back(std::move(cr));
      }
      if (!ir.at("feedback").is_null()) r.feedback = feedback_from(ir.at("feedback"));
      t.iterations.push_back(std::move(r));
    }
    return t;
  } catch (const json::exception& e) {
    throw Error(std::string("invalid trace JSON: ") + e.what());
  }
}

}  // namespace invsynth
