#pragma once

#include "invsynth/program.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace invsynth {

enum class CfgNodeKind { Entry, BasicBlock, Branch, LoopHead, Exit };

const char* to_string(CfgNodeKind kind) noexcept;
CfgNodeKind cfg_node_kind_from_string(std::string_view s);

struct CfgNode {
  int id = 0;
  CfgNodeKind kind = CfgNodeKind::BasicBlock;
  // Basic blocks hold C statements, branch and loop-head nodes hold the
  // condition, the exit node holds the assertion.
  std::string text;

  friend bool operator==(const CfgNode&, const CfgNode&) = default;
};

struct CfgEdge {
  int src = 0;
  int dst = 0;
  std::optional<bool> label;

  friend bool operator==(const CfgEdge&, const CfgEdge&) = default;
};

struct Cfg {
  std::vector<CfgNode> nodes;  // sorted by id, ids are 0..n-1
  std::vector<CfgEdge> edges;

  const CfgNode& node(int id) const;
  std::vector<const CfgEdge*> out_edges(int id) const;

  friend bool operator==(const Cfg&, const Cfg&) = default;
};

/// Builds the control-flow graph: entry -> prefix blocks -> loop-head, a
/// true edge into the body, back edges to the head, and a false edge to the
/// exit node. Straight-line statements share one basic block; each if-else
/// becomes a branch node with labeled successors.
Cfg build_cfg(const Program& program);

/// Throws std::logic_error when a structural invariant is violated: one
/// entry, one exit, one loop-head with exactly a true and a false out-edge,
/// branch nodes with labeled out-edges, everything reachable from entry.
void validate_cfg(const Cfg& cfg);

/// `{"nodes":[{"id":..,"kind":..,"text":..}],"edges":[{"src":..,"dst":..,"label":..}]}`
/// with nodes sorted by id and edges by (src, dst, label).
std::string cfg_to_json(const Cfg& cfg);
Cfg cfg_from_json(std::string_view json);

}  // namespace invsynth
