#include "invsynth/cfg.hpp"

#include "invsynth/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace invsynth {

const char* to_string(CfgNodeKind kind) noexcept {
  switch (kind) {
    case CfgNodeKind::Entry: return "entry";
    case CfgNodeKind::BasicBlock: return "basic-block";
    case CfgNodeKind::Branch: return "branch";
    case CfgNodeKind::LoopHead: return "loop-head";
    case CfgNodeKind::Exit: return "exit";
  }
  return "?";
}

CfgNodeKind cfg_node_kind_from_string(std::string_view s) {
  for (auto k : {CfgNodeKind::Entry, CfgNodeKind::BasicBlock, CfgNodeKind::Branch, CfgNodeKind::LoopHead,
                 CfgNodeKind::Exit}) {
    if (s == to_string(k)) return k;
  }
  throw Error("unknown CFG node kind '" + std::string(s) + "'");
}

const CfgNode& Cfg::node(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes.size()) throw std::out_of_range("CFG node id");
  return nodes[static_cast<std::size_t>(id)];
}

std::vector<const CfgEdge*> Cfg::out_edges(int id) const {
  std::vector<const CfgEdge*> out;
  for (const auto& e : edges)
    if (e.src == id) out.push_back(&e);
  return out;
}

namespace {

struct Dangling {
  int node;
  std::optional<bool> label;
};

class CfgBuilder {
 public:
  Cfg build(const Program& p) {
    int entry = add(CfgNodeKind::Entry, "");
    std::vector<Dangling> open{{entry, std::nullopt}};
    Block prefix;
    if (p.explicit_precondition) prefix.push_back(Stmt{Assume{*p.explicit_precondition}});
    prefix.insert(prefix.end(), p.prefix.begin(), p.prefix.end());
    open = block(prefix, std::move(open));

    int head = add(CfgNodeKind::LoopHead, to_c(p.guard));
    connect(open, head);
    auto body_out = block(p.body, {{head, true}});
    connect(body_out, head);

    std::ostringstream post;
    post << "assert(" << to_c(p.postcondition) << ");";
    int exit = add(CfgNodeKind::Exit, post.str());
    connect({{head, false}}, exit);

    std::sort(cfg_.edges.begin(), cfg_.edges.end(), [](const CfgEdge& a, const CfgEdge& b) {
      return std::tie(a.src, a.dst, a.label) < std::tie(b.src, b.dst, b.label);
    });
    return std::move(cfg_);
  }

 private:
  int add(CfgNodeKind kind, std::string text) {
    int id = static_cast<int>(cfg_.nodes.size());
    cfg_.nodes.push_back({id, kind, std::move(text)});
    return id;
  }

  void connect(const std::vector<Dangling>& from, int to) {
    for (const auto& d : from) cfg_.edges.push_back({d.node, to, d.label});
  }

  std::vector<Dangling> flush(Block& pending, std::vector<Dangling> open) {
    if (pending.empty()) return open;
    int bb = add(CfgNodeKind::BasicBlock, to_c(pending));
    pending.clear();
    connect(open, bb);
    return {{bb, std::nullopt}};
  }

  std::vector<Dangling> block(const Block& b, std::vector<Dangling> open) {
    Block pending;
    for (const auto& s : b) {
      if (const auto* branch = std::get_if<IfElse>(&s.node)) {
        open = flush(pending, std::move(open));
        int br = add(CfgNodeKind::Branch, to_c(branch->cond));
        connect(open, br);
        auto then_out = block(branch->then_branch, {{br, true}});
        auto else_out = block(branch->else_branch, {{br, false}});
        open = std::move(then_out);
        open.insert(open.end(), else_out.begin(), else_out.end());
      } else {
        pending.push_back(s);
      }
    }
    return flush(pending, std::move(open));
  }

  Cfg cfg_;
};

[[noreturn]] void broken(const std::string& what) { throw std::logic_error("invalid CFG: " + what); }

}  // namespace

Cfg build_cfg(const Program& program) {
  CfgBuilder builder;
  Cfg cfg = builder.build(program);
  validate_cfg(cfg);
  return cfg;
}

void validate_cfg(const Cfg& cfg) {
  int entries = 0, exits = 0, heads = 0;
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
    const auto& n = cfg.nodes[i];
    if (n.id != static_cast<int>(i)) broken("node ids must be 0..n-1 in order");
    switch (n.kind) {
      case CfgNodeKind::Entry: ++entries; break;
      case CfgNodeKind::Exit: ++exits; break;
      case CfgNodeKind::LoopHead: ++heads; break;
      default: break;
    }
  }
  if (entries != 1) broken("expected exactly one entry node");
  if (exits != 1) broken("expected exactly one exit node");
  if (heads != 1) broken("expected exactly one loop-head node");
  for (const auto& e : cfg.edges) {
    if (e.src < 0 || e.dst < 0 || static_cast<std::size_t>(e.src) >= cfg.nodes.size() ||
        static_cast<std::size_t>(e.dst) >= cfg.nodes.size()) {
      broken("edge endpoint out of range");
    }
  }
  for (const auto& n : cfg.nodes) {
    auto out = cfg.out_edges(n.id);
    if (n.kind == CfgNodeKind::LoopHead || n.kind == CfgNodeKind::Branch) {
      bool t = false, f = false;
      for (const auto* e : out) {
        if (!e->label) broken("conditional node with an unlabeled edge");
        (*e->label ? t : f) = true;
      }
      if (out.size() != 2 || !t || !f) broken(std::string(to_string(n.kind)) + " node needs one true and one false edge");
    } else if (n.kind == CfgNodeKind::Exit) {
      if (!out.empty()) broken("exit node has successors");
    } else {
      if (out.size() != 1 || out.front()->label) broken("straight-line node needs exactly one unlabeled successor");
    }
  }
  std::vector<bool> seen(cfg.nodes.size(), false);
  std::deque<int> work;
  int entry = static_cast<int>(std::find_if(cfg.nodes.begin(), cfg.nodes.end(),
                                            [](const CfgNode& n) { return n.kind == CfgNodeKind::Entry; }) -
                               cfg.nodes.begin());
  work.push_back(entry);
  seen[static_cast<std::size_t>(entry)] = true;
  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    for (const auto* e : cfg.out_edges(id)) {
      if (!seen[static_cast<std::size_t>(e->dst)]) {
        seen[static_cast<std::size_t>(e->dst)] = true;
        work.push_back(e->dst);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) broken("node unreachable from entry");
}

std::string cfg_to_json(const Cfg& cfg) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  j["edges"] = nlohmann::ordered_json::array();
  std::vector<CfgNode> nodes = cfg.nodes;
  std::sort(nodes.begin(), nodes.end(), [](const CfgNode& a, const CfgNode& b) { return a.id < b.id; });
  for (const auto& n : nodes) {
    nlohmann::ordered_json jn;
    jn["id"] = n.id;
    jn["kind"] = to_string(n.kind);
    jn["text"] = n.text;
    j["nodes"].push_back(std::move(jn));
  }
  std::vector<CfgEdge> edges = cfg.edges;
  std::sort(edges.begin(), edges.end(), [](const CfgEdge& a, const CfgEdge& b) {
    return std::tie(a.src, a.dst, a.label) < std::tie(b.src, b.dst, b.label);
  });
  for (const auto& e : edges) {
    nlohmann::ordered_json je;
    je["src"] = e.src;
    je["dst"] = e.dst;
    if (e.label) je["label"] = *e.label ? "true" : "false";
    else je["label"] = nullptr;
    j["edges"].push_back(std::move(je));
  }
  return j.dump();
}

Cfg cfg_from_json(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed CFG JSON: ") + e.what());
  }
  Cfg cfg;
  try {
    for (const auto& jn : j.at("nodes")) {
      cfg.nodes.push_back({jn.at("id").get<int>(), cfg_node_kind_from_string(jn.at("kind").get<std::string>()),
                           jn.at("text").get<std::string>()});
    }
    for (const auto& je : j.at("edges")) {
      CfgEdge e{je.at("src").get<int>(), je.at("dst").get<int>(), std::nullopt};
      const auto& l = je.at("label");
      if (!l.is_null()) {
        auto s = l.get<std::string>();
        if (s != "true" && s != "false") throw Error("edge label must be \"true\", \"false\" or null");
        e.label = s == "true";
      }
      cfg.edges.push_back(e);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed CFG JSON: ") + e.what());
  }
  std::sort(cfg.nodes.begin(), cfg.nodes.end(), [](const CfgNode& a, const CfgNode& b) { return a.id < b.id; });
  return cfg;
}

}  // namespace invsynth
