#include "actorsim/constructs.hpp"
#include "actorsim/laws.hpp"
#include "actorsim/scenarios.hpp"
#include "actorsim/scheduler.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace actorsim;

namespace {

Value num(std::int64_t n) { return Value::integer(n); }

Tree random_tree(std::mt19937_64& rng, int leaves) {
  if (leaves == 1) return Tree::leaf(num(static_cast<std::int64_t>(rng() % 4)));
  const int left = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(leaves - 1));
  return Tree::fork(random_tree(rng, left), random_tree(rng, leaves - left));
}

std::size_t first_mismatch(const std::vector<Value>& a, const std::vector<Value>& b) {
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  return i;
}

}  // namespace

TEST(Tree, Shape) {
  const Tree t = example_tree_right_leaning();
  EXPECT_FALSE(t.is_leaf());
  EXPECT_EQ(t.leaf_count(), 3u);
  EXPECT_EQ(flatten(t), (std::vector<Value>{num(3), num(4), num(5)}));
  EXPECT_EQ(flatten(example_tree_left_leaning()), flatten(t));
  EXPECT_EQ(to_string(t), "(3 (4 5))");
  EXPECT_EQ(to_string(parse_tree("((3 4) 5)")), "((3 4) 5)");
  EXPECT_THROW(parse_tree("(3 4"), std::invalid_argument);
  EXPECT_THROW(parse_tree("(3)"), std::invalid_argument);
}

TEST(Fringe, LazyListMatchesFlatten) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const Tree t = random_tree(rng, 1 + static_cast<int>(rng() % 9));
    EXPECT_EQ(fringe(t), flatten(t)) << to_string(t);
  }
}

TEST(Fringe, NothingComputedBeforeFirstRequest) {
  Configuration c;
  std::vector<TreeNodeActor> nodes;
  const Address root = build_tree(c, example_tree_right_leaning(), &nodes);
  const Address cell = build_fringe(c, root);
  EXPECT_TRUE(c.quiescent());
  EXPECT_EQ(nodes.size(), 5u);
  for (const auto& n : nodes) EXPECT_EQ(c.actor(n.address).reception_count, 0u);
  EXPECT_EQ(c.actor(cell).reception_count, 0u);
}

TEST(SameFringe, ExampleTreesAgree) {
  const auto r = same_fringe(example_tree_right_leaning(), example_tree_left_leaning());
  EXPECT_TRUE(r.equal);
  EXPECT_TRUE(check_all(r.final_config.trace()).ok());
}

TEST(SameFringe, AgreesWithFlattenOracle) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    const Tree a = random_tree(rng, 1 + static_cast<int>(rng() % 6));
    const Tree b = random_tree(rng, 1 + static_cast<int>(rng() % 6));
    EXPECT_EQ(same_fringe(a, b).equal, flatten(a) == flatten(b)) << to_string(a) << " vs " << to_string(b);
  }
}

TEST(SameFringe, StopsAtFirstMismatch) {
  // Subtrees wholly right of the first mismatch are never visited.
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    const Tree a = random_tree(rng, 2 + static_cast<int>(rng() % 7));
    const Tree b = random_tree(rng, 2 + static_cast<int>(rng() % 7));
    const auto fa = flatten(a);
    const auto fb = flatten(b);
    if (fa == fb) continue;
    const auto k = first_mismatch(fa, fb);
    const auto r = same_fringe(a, b);
    ASSERT_FALSE(r.equal);
    for (const auto* nodes : {&r.first_nodes, &r.second_nodes}) {
      for (const auto& n : *nodes) {
        if (n.first_leaf > k) {
          EXPECT_EQ(r.final_config.actor(n.address).reception_count, 0u)
              << to_string(a) << " vs " << to_string(b) << " leaf " << n.first_leaf;
        }
      }
    }
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(SameFringe, ScenarioUnderRandomSchedules) {
  const auto system = same_fringe_scenario(parse_tree("((1 2) (3 4))"), parse_tree("(1 (2 (3 5)))"));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = run(system, Policy::seeded_random(seed));
    ASSERT_TRUE(r.halted);
    EXPECT_EQ(r.outputs, std::vector<Value>{Value::boolean(false)});
  }
}

TEST(SameFringe, DifferentLengths) {
  EXPECT_FALSE(same_fringe(parse_tree("(1 2)"), parse_tree("(1 (2 3))")).equal);
  EXPECT_FALSE(same_fringe(parse_tree("(1 (2 3))"), parse_tree("(1 2)")).equal);
  EXPECT_TRUE(same_fringe(parse_tree("7"), parse_tree("7")).equal);
}
