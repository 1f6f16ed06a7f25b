#include "invsynth/errors.hpp"
#include "invsynth/proposer.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace invsynth {

ScriptedProposer::ScriptedProposer(std::vector<std::string> candidates) {
  if (candidates.empty()) throw Error("scripted proposer needs at least one candidate");
  by_problem_["*"] = std::move(candidates);
}

ScriptedProposer::ScriptedProposer(std::map<std::string, std::vector<std::string>> by_problem)
    : by_problem_(std::move(by_problem)) {
  for (const auto& [name, list] : by_problem_) {
    if (list.empty()) throw Error("scripted proposer: empty candidate list for '" + name + "'");
  }
}

ScriptedProposer ScriptedProposer::from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("scripted proposer: invalid JSON: ") + e.what());
  }
  auto read_list = [](const nlohmann::json& arr, const std::string& where) {
    if (!arr.is_array()) throw Error("scripted proposer: expected an array of strings for " + where);
    std::vector<std::string> out;
    for (const auto& item : arr) {
      if (!item.is_string()) throw Error("scripted proposer: non-string candidate in " + where);
      out.push_back(item.get<std::string>());
    }
    return out;
  };
  if (doc.is_array()) return ScriptedProposer(read_list(doc, "top level"));
  if (!doc.is_object()) throw Error("scripted proposer: expected an array or an object");
  std::map<std::string, std::vector<std::string>> by_problem;
  for (const auto& [key, value] : doc.items()) by_problem[key] = read_list(value, "'" + key + "'");
  return ScriptedProposer(std::move(by_problem));
}

ScriptedProposer ScriptedProposer::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read scripted candidates file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

Proposal ScriptedProposer::propose(const ProposalContext& ctx) {
  auto it = by_problem_.find(ctx.problem_name);
  if (it == by_problem_.end()) it = by_problem_.find("*");
  if (it == by_problem_.end()) throw ProposerError("no scripted candidates for '" + ctx.problem_name + "'");
  const auto& list = it->second;
  std::size_t k = std::min(static_cast<std::size_t>(std::max(ctx.attempt_index, 1) - 1), list.size() - 1);
  Proposal p;
  p.raw_response = list[k];
  p.proposer_id = id();
  auto ex = extract_invariant(p.raw_response);
  p.balanced = ex.balanced;
  SortMap sorts = ctx.tmpl ? ctx.tmpl->sorts() : SortMap{};
  p.candidate = Invariant::from_text(ex.text, sorts);
  return p;
}

}  // namespace invsynth
