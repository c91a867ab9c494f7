#pragma once

#include "actorsim/kernel.hpp"
#include "actorsim/scheduler.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace actorsim {

void register_construct_behaviors(BehaviorRegistry& registry);
void register_fringe_behaviors(BehaviorRegistry& registry);

// Behavior specs. States are plain Values:
//   customer      pending | received value | [threw, e]
//   counter       [count, continue]
//   account       balance
//   latch         [released, [waiting customers...]]
//   gcd-queue     dispatched-count
//   future        [status, value-or-block, [[payload, customer|void, derivative|void]...]]
//   channel       [[[m, putter|void]...], [getters...]]

BehaviorSpec customer_behavior();
BehaviorSpec counter_behavior(std::int64_t count = 0);
BehaviorSpec account_behavior(std::int64_t initial);
BehaviorSpec latch_behavior();
BehaviorSpec gcd_queue_behavior();
BehaviorSpec channel_behavior();

/// Runs a registered block: [name, args...] with names const, inc, double,
/// square, add, fail. Throws ActorThrow (BlockFailed, UnknownBlock, ...).
Value eval_block(const Value& block);

/// Eager future: the block starts running concurrently right away.
Address future_create(Configuration& config, Value block);
/// Lazy future: the block runs only once the future receives its first message.
Address postpone_create(Configuration& config, Value block);

/// Binary tree with leaf values.
class Tree {
 public:
  static Tree leaf(Value v);
  static Tree fork(Tree left, Tree right);

  bool is_leaf() const noexcept { return node_->left == nullptr; }
  const Value& value() const { return node_->value; }
  const Tree& left() const { return *node_->left; }
  const Tree& right() const { return *node_->right; }
  std::size_t leaf_count() const noexcept { return node_->leaves; }

 private:
  struct Node {
    Value value;
    std::shared_ptr<const Tree> left;
    std::shared_ptr<const Tree> right;
    std::size_t leaves = 1;
  };
  explicit Tree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Eager left-to-right leaf list.
std::vector<Value> flatten(const Tree& tree);

/// One actor per tree node; leaf indices are positions in the fringe.
struct TreeNodeActor {
  Address address;
  std::size_t first_leaf;
  std::size_t last_leaf;
};

Address build_tree(Configuration& config, const Tree& tree,
                   std::vector<TreeNodeActor>* nodes = nullptr);

/// Lazy list over the fringe: a dormant cell answering `next` with
/// [value, rest-cell] or nil, computing nothing until asked.
Address build_fringe(Configuration& config, Address tree_root);

/// Drains the lazy fringe of `tree` under the fair scheduler.
std::vector<Value> fringe(const Tree& tree);

struct SameFringeRun {
  bool equal = false;
  Configuration final_config;
  std::vector<TreeNodeActor> first_nodes;
  std::vector<TreeNodeActor> second_nodes;
};

/// Compares fringes element by element, stopping at the first mismatch.
SameFringeRun same_fringe(const Tree& first, const Tree& second);

/// The two example trees sharing the fringe [3 4 5].
Tree example_tree_right_leaning();
Tree example_tree_left_leaning();

// Scenarios.

/// Counter(0) with concurrent root `go` and `stop`; output is stop's reply.
System unbounded_scenario();
/// Account(balance) with two concurrent withdrawals, then getBalance.
System account_scenario(std::int64_t balance = 5, std::int64_t first = 1, std::int64_t second = 2);
/// wait, wait, releaseAll from three harness customers.
System latch_scenario();
/// sync square(3), sync inc(4), async square(5) read back through its future.
System gcd_scenario();
/// future square(4): two reads and one derivative add(3).
System future_scenario();
/// `puts` put requests (values 5, 6, ...) and `gets` get requests.
System channel_scenario(int puts = 1, int gets = 1);
/// Lazy stream of nondeterministic bits; the reader asks for `bits` of them.
/// Outputs are the bits chosen so far.
System real_scenario(int bits = 3);
/// Step 1: print 1 or halt; step 2: go to step 1. Output is the tape once halted.
System ndtm_scenario();
/// X sends stop, Y loops go/guard with Z; Z reports n.
System csp_scenario();
System same_fringe_scenario(const Tree& first, const Tree& second);

}  // namespace actorsim
