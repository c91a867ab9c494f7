#include "actorsim/constructs.hpp"

namespace actorsim {

namespace {

Value sym(std::string name) { return Value::symbol(std::move(name)); }
Value addr(Address a) { return Value::address(a); }

Value dormant_cell(Value::List stack) {
  return Value::list({sym("dormant"), Value::list(std::move(stack)), Value{}, Value::list({})});
}

// tree-leaf: [v]; tree-fork: [left, right]. Both answer `shape`.
void tree_leaf(BehaviorContext& ctx) {
  ctx.reply(Value::list({sym("leaf"), ctx.state().at(0)}));
}

void tree_fork(BehaviorContext& ctx) {
  ctx.reply(Value::list({sym("fork"), ctx.state().at(0), ctx.state().at(1)}));
}

// Memoizing lazy list cell over a stack of unexplored subtrees.
// State: [status, stack, result, waiting]; result is [v, rest-cell] or nil.
void fringe_cell(BehaviorContext& ctx) {
  const auto& status = ctx.state().at(0).as_symbol();
  const auto& stack = ctx.state().at(1);
  const auto& result = ctx.state().at(2);
  const auto& waiting = ctx.state().at(3);
  const auto sel = ctx.payload().selector();
  if (sel == "next") {
    if (status == "ready") {
      ctx.reply(result);
      return;
    }
    Value::List w = waiting.as_list();
    if (ctx.customer()) w.push_back(addr(*ctx.customer()));
    if (status == "dormant") {
      if (stack.size() == 0) {
        for (const auto& c : w) ctx.respond(c.as_address(), sym("nil"));
        ctx.become(Value::list({sym("ready"), stack, sym("nil"), Value::list({})}));
        return;
      }
      const auto& items = stack.as_list();
      const Address k = ctx.create(
          "fringe-step",
          Value::list({addr(ctx.self()), Value::list(Value::List(items.begin() + 1, items.end()))}));
      ctx.send(items.front().as_address(), sym("shape"), k);
    }
    ctx.become(Value::list({sym("pending"), stack, result, Value::list(std::move(w))}));
  } else if (sel == "resolved") {
    const Value& r = ctx.payload().at(1);
    for (const auto& c : waiting.as_list()) ctx.respond(c.as_address(), r);
    ctx.become(Value::list({sym("ready"), Value::list({}), r, Value::list({})}));
  } else {
    throw ActorThrow{Value::list({sym("NotUnderstood"), ctx.payload()})};
  }
}

// Walks left spines until a leaf. State: [cell, stack].
void fringe_step(BehaviorContext& ctx) {
  if (!is_response(ctx.kind())) return;
  const Value& cell = ctx.state().at(0);
  const Value& stack = ctx.state().at(1);
  const Value& shape = ctx.payload();
  if (shape.selector() == "leaf") {
    const Address rest = ctx.create("fringe-cell", dormant_cell(stack.as_list()));
    ctx.send(cell.as_address(), Value::list({sym("resolved"), Value::list({shape.at(1), addr(rest)})}));
  } else {
    Value::List next{shape.at(2)};
    for (const auto& s : stack.as_list()) next.push_back(s);
    const Address k = ctx.create("fringe-step", Value::list({cell, Value::list(std::move(next))}));
    ctx.send(shape.at(1).as_address(), sym("shape"), k);
  }
  ctx.halt();
}

// Forwards one fringe element to a comparison join. State: [join, side].
void fringe_probe(BehaviorContext& ctx) {
  if (!is_response(ctx.kind())) return;
  ctx.send(ctx.state().at(0).as_address(), Value::list({sym("side"), ctx.state().at(1), ctx.payload()}));
  ctx.halt();
}

// State: [first-result|pending, second-result|pending, customer].
void fringe_compare(BehaviorContext& ctx) {
  if (ctx.payload().selector() != "side") {
    throw ActorThrow{Value::list({sym("NotUnderstood"), ctx.payload()})};
  }
  Value a = ctx.state().at(0);
  Value b = ctx.state().at(1);
  const Value& h = ctx.state().at(2);
  (ctx.payload().at(1).as_integer() == 1 ? a : b) = ctx.payload().at(2);
  if (a.is_symbol("pending") || b.is_symbol("pending")) {
    ctx.become(Value::list({a, b, h}));
    return;
  }
  ctx.halt();
  ctx.become(Value::list({a, b, h}));
  const bool a_nil = a.is_symbol("nil");
  const bool b_nil = b.is_symbol("nil");
  if (a_nil || b_nil) {
    ctx.respond(h.as_address(), Value::boolean(a_nil && b_nil));
    return;
  }
  if (a.at(0) != b.at(0)) {
    ctx.respond(h.as_address(), Value::boolean(false));
    return;
  }
  const Address j = ctx.create("fringe-compare", Value::list({sym("pending"), sym("pending"), h}));
  const Address p1 = ctx.create("fringe-probe", Value::list({addr(j), Value::integer(1)}));
  const Address p2 = ctx.create("fringe-probe", Value::list({addr(j), Value::integer(2)}));
  ctx.send(a.at(1).as_address(), sym("next"), p1);
  ctx.send(b.at(1).as_address(), sym("next"), p2);
}

// Drains a lazy list. State: [collected, customer].
void fringe_collector(BehaviorContext& ctx) {
  if (!is_response(ctx.kind())) return;
  const Value& h = ctx.state().at(1);
  if (ctx.payload().is_symbol("nil")) {
    ctx.respond(h.as_address(), ctx.state().at(0));
  } else {
    Value::List acc = ctx.state().at(0).as_list();
    acc.push_back(ctx.payload().at(0));
    const Address k = ctx.create("fringe-collector", Value::list({Value::list(std::move(acc)), h}));
    ctx.send(ctx.payload().at(1).as_address(), sym("next"), k);
  }
  ctx.halt();
}

Address build_node(Configuration& config, const Tree& tree, std::size_t first,
                   std::vector<TreeNodeActor>* nodes) {
  Address a = tree.is_leaf()
                  ? config.create_actor({"tree-leaf", Value::list({tree.value()})})
                  : [&] {
                      const Address l = build_node(config, tree.left(), first, nodes);
                      const Address r =
                          build_node(config, tree.right(), first + tree.left().leaf_count(), nodes);
                      return config.create_actor({"tree-fork", Value::list({addr(l), addr(r)})});
                    }();
  if (nodes) nodes->push_back(TreeNodeActor{a, first, first + tree.leaf_count() - 1});
  return a;
}

void collect_leaves(const Tree& t, std::vector<Value>& out) {
  if (t.is_leaf()) {
    out.push_back(t.value());
    return;
  }
  collect_leaves(t.left(), out);
  collect_leaves(t.right(), out);
}

}  // namespace

void register_fringe_behaviors(BehaviorRegistry& registry) {
  registry.add("tree-leaf", tree_leaf);
  registry.add("tree-fork", tree_fork);
  registry.add("fringe-cell", fringe_cell);
  registry.add("fringe-step", fringe_step);
  registry.add("fringe-probe", fringe_probe);
  registry.add("fringe-compare", fringe_compare);
  registry.add("fringe-collector", fringe_collector);
}

Tree Tree::leaf(Value v) {
  return Tree(std::make_shared<const Node>(Node{std::move(v), nullptr, nullptr, 1}));
}

Tree Tree::fork(Tree left, Tree right) {
  const auto leaves = left.leaf_count() + right.leaf_count();
  return Tree(std::make_shared<const Node>(Node{Value{}, std::make_shared<const Tree>(std::move(left)),
                                                std::make_shared<const Tree>(std::move(right)),
                                                leaves}));
}

std::vector<Value> flatten(const Tree& tree) {
  std::vector<Value> out;
  collect_leaves(tree, out);
  return out;
}

Address build_tree(Configuration& config, const Tree& tree, std::vector<TreeNodeActor>* nodes) {
  return build_node(config, tree, 0, nodes);
}

Address build_fringe(Configuration& config, Address tree_root) {
  return config.create_actor({"fringe-cell", dormant_cell({addr(tree_root)})});
}

std::vector<Value> fringe(const Tree& tree) {
  Configuration c;
  const Address h = c.create_actor(customer_behavior());
  const Address root = build_tree(c, tree);
  const Address cell = build_fringe(c, root);
  const Address k = c.create_actor({"fringe-collector", Value::list({Value::list({}), addr(h)})});
  c.send(cell, sym("next"), k);
  auto result = run(System{"fringe", std::move(c)}, Policy::fair_fifo());
  const Value& out = result.outputs.at(0);
  if (!out.is_list()) throw std::runtime_error("fringe did not complete: " + to_string(out));
  return out.as_list();
}

namespace {

struct SameFringeSetup {
  System system;
  std::vector<TreeNodeActor> first_nodes;
  std::vector<TreeNodeActor> second_nodes;
};

SameFringeSetup setup_same_fringe(const Tree& first, const Tree& second) {
  SameFringeSetup s;
  Configuration c;
  const Address h = c.create_actor(customer_behavior());
  const Address r1 = build_tree(c, first, &s.first_nodes);
  const Address r2 = build_tree(c, second, &s.second_nodes);
  const Address c1 = build_fringe(c, r1);
  const Address c2 = build_fringe(c, r2);
  const Address j = c.create_actor({"fringe-compare", Value::list({sym("pending"), sym("pending"), addr(h)})});
  const Address p1 = c.create_actor({"fringe-probe", Value::list({addr(j), Value::integer(1)})});
  const Address p2 = c.create_actor({"fringe-probe", Value::list({addr(j), Value::integer(2)})});
  c.send(c1, sym("next"), p1);
  c.send(c2, sym("next"), p2);
  s.system = System{"same-fringe", std::move(c)};
  return s;
}

}  // namespace

SameFringeRun same_fringe(const Tree& first, const Tree& second) {
  auto setup = setup_same_fringe(first, second);
  auto result = run(setup.system, Policy::fair_fifo());
  const Value& out = result.outputs.at(0);
  if (!out.is_boolean()) throw std::runtime_error("same-fringe did not complete: " + to_string(out));
  return SameFringeRun{out.as_boolean(), std::move(result.final_config), std::move(setup.first_nodes),
                       std::move(setup.second_nodes)};
}

System same_fringe_scenario(const Tree& first, const Tree& second) {
  return setup_same_fringe(first, second).system;
}

Tree example_tree_right_leaning() {
  return Tree::fork(Tree::leaf(Value::integer(3)),
                    Tree::fork(Tree::leaf(Value::integer(4)), Tree::leaf(Value::integer(5))));
}

Tree example_tree_left_leaning() {
  return Tree::fork(Tree::fork(Tree::leaf(Value::integer(3)), Tree::leaf(Value::integer(4))),
                    Tree::leaf(Value::integer(5)));
}

}  // namespace actorsim
