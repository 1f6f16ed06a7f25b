#include "invsynth/cfg.hpp"
#include "invsynth/program.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace {

using namespace invsynth;

int count_kind(const Cfg& g, CfgNodeKind k) {
  return static_cast<int>(std::count_if(g.nodes.begin(), g.nodes.end(), [&](const CfgNode& n) { return n.kind == k; }));
}

const CfgNode& only(const Cfg& g, CfgNodeKind k) {
  return *std::find_if(g.nodes.begin(), g.nodes.end(), [&](const CfgNode& n) { return n.kind == k; });
}

TEST(Cfg, Benchmark122HasFiveNodes) {
  auto g = build_cfg(parse_program(testing_support::kBench122));
  ASSERT_EQ(g.nodes.size(), 5u);
  EXPECT_EQ(count_kind(g, CfgNodeKind::Entry), 1);
  EXPECT_EQ(count_kind(g, CfgNodeKind::BasicBlock), 2);
  EXPECT_EQ(count_kind(g, CfgNodeKind::LoopHead), 1);
  EXPECT_EQ(count_kind(g, CfgNodeKind::Exit), 1);
  const auto& head = only(g, CfgNodeKind::LoopHead);
  auto out = g.out_edges(head.id);
  ASSERT_EQ(out.size(), 2u);
  int true_dst = -1, false_dst = -1;
  for (auto* e : out) (e->label.value() ? true_dst : false_dst) = e->dst;
  EXPECT_EQ(g.node(true_dst).kind, CfgNodeKind::BasicBlock);
  EXPECT_EQ(g.node(false_dst).kind, CfgNodeKind::Exit);
  auto back = g.out_edges(true_dst);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0]->dst, head.id);
}

TEST(Cfg, BranchNodeHasLabeledSuccessors) {
  auto g = build_cfg(parse_program(
      "int x, y; x = 0; while (x < 10) { if (y > 0) { x = x + 1; } else { x = x + 2; } } assert(x >= 10);"));
  ASSERT_EQ(count_kind(g, CfgNodeKind::Branch), 1);
  const auto& br = only(g, CfgNodeKind::Branch);
  auto out = g.out_edges(br.id);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_TRUE(out[0]->label.has_value());
  EXPECT_TRUE(out[1]->label.has_value());
  EXPECT_NE(*out[0]->label, *out[1]->label);
  EXPECT_EQ(parse_condition(br.text, {"x", "y"}), gt(Expr::var("y"), lit(0)));
}

TEST(Cfg, EmptyBodyIsASelfLoop) {
  auto g = build_cfg(parse_program("int x; x = 0; while (x > 0) { } assert(x == 0);"));
  EXPECT_EQ(g.nodes.size(), 4u);
  const auto& head = only(g, CfgNodeKind::LoopHead);
  bool self = false;
  for (auto* e : g.out_edges(head.id)) self |= e->dst == head.id && e->label == true;
  EXPECT_TRUE(self);
}

TEST(Cfg, NoPrefixConnectsEntryToHead) {
  auto g = build_cfg(parse_program("int x; while (x > 0) { x--; } assert(x <= 0);"));
  auto out = g.out_edges(only(g, CfgNodeKind::Entry).id);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(g.node(out[0]->dst).kind, CfgNodeKind::LoopHead);
}

TEST(Cfg, NodeTextReparses) {
  auto p = parse_program(testing_support::kBench122);
  auto g = build_cfg(p);
  for (const auto& n : g.nodes) {
    switch (n.kind) {
      case CfgNodeKind::BasicBlock: EXPECT_NO_THROW(parse_statements(n.text, p.variables)) << n.text; break;
      case CfgNodeKind::LoopHead: EXPECT_EQ(parse_condition(n.text, p.variables), p.guard); break;
      case CfgNodeKind::Exit: EXPECT_EQ(n.text, "assert(" + to_c(p.postcondition) + ");"); break;
      default: break;
    }
  }
}

TEST(Cfg, JsonRoundTrip) {
  for (const auto& entry : std::filesystem::directory_iterator(testing_support::corpus_dir())) {
    if (entry.path().extension() != ".c") continue;
    auto g = build_cfg(parse_program(testing_support::read_file(entry.path())));
    auto json = cfg_to_json(g);
    EXPECT_EQ(cfg_from_json(json), g) << entry.path();
    EXPECT_EQ(cfg_to_json(cfg_from_json(json)), json);
  }
}

TEST(Cfg, ValidateRejectsBrokenGraphs) {
  auto g = build_cfg(parse_program(testing_support::kBench122));
  EXPECT_NO_THROW(validate_cfg(g));
  auto two_exits = g;
  two_exits.nodes.push_back({static_cast<int>(g.nodes.size()), CfgNodeKind::Exit, "assert(1);"});
  EXPECT_THROW(validate_cfg(two_exits), std::logic_error);
  auto unlabeled = g;
  for (auto& e : unlabeled.edges)
    if (unlabeled.node(e.src).kind == CfgNodeKind::LoopHead) e.label.reset();
  EXPECT_THROW(validate_cfg(unlabeled), std::logic_error);
  auto unreachable = g;
  unreachable.nodes.push_back({static_cast<int>(g.nodes.size()), CfgNodeKind::BasicBlock, "x = 1;"});
  EXPECT_THROW(validate_cfg(unreachable), std::logic_error);
}

TEST(Cfg, KindNamesRoundTrip) {
  for (auto k : {CfgNodeKind::Entry, CfgNodeKind::BasicBlock, CfgNodeKind::Branch, CfgNodeKind::LoopHead,
                 CfgNodeKind::Exit})
    EXPECT_EQ(cfg_node_kind_from_string(to_string(k)), k);
  EXPECT_ANY_THROW(cfg_node_kind_from_string("loop"));
}

}  // namespace
