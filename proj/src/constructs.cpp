#include "actorsim/constructs.hpp"

#include <string>

namespace actorsim {

namespace {

Value sym(std::string name) { return Value::symbol(std::move(name)); }
Value num(std::int64_t v) { return Value::integer(v); }
Value addr(Address a) { return Value::address(a); }

[[noreturn]] void not_understood(const BehaviorContext& ctx) {
  throw ActorThrow{Value::list({sym("NotUnderstood"), ctx.payload()})};
}

Value::List appended(const Value& list, Value item) {
  Value::List out = list.as_list();
  out.push_back(std::move(item));
  return out;
}

Value::List tail(const Value& list) {
  const auto& items = list.as_list();
  return Value::List(items.begin() + 1, items.end());
}

// Harness customer: records the first response it gets.
void customer(BehaviorContext& ctx) {
  if (!is_response(ctx.kind()) || !ctx.state().is_symbol("pending")) return;
  if (ctx.kind() == MessageKind::Threw) {
    ctx.become(Value::list({sym("threw"), ctx.payload()}));
  } else {
    ctx.become(ctx.payload());
  }
}

void counter(BehaviorContext& ctx) {
  const auto count = ctx.state().at(0).as_integer();
  const bool cont = ctx.state().at(1).as_boolean();
  const auto sel = ctx.payload().selector();
  if (sel == "go") {
    if (!cont) return;
    ctx.send(ctx.self(), sym("go"));
    ctx.become(Value::list({num(count + 1), Value::boolean(true)}));
  } else if (sel == "stop") {
    ctx.reply(num(count));
    ctx.become(Value::list({num(count), Value::boolean(false)}));
  } else {
    not_understood(ctx);
  }
}

void account(BehaviorContext& ctx) {
  const auto balance = ctx.state().as_integer();
  const auto sel = ctx.payload().selector();
  if (sel == "getBalance") {
    ctx.reply(num(balance));
  } else if (sel == "withdraw") {
    const auto amount = ctx.payload().at(1).as_integer();
    if (amount > balance) throw ActorThrow{sym("OverdrawnException")};
    ctx.become(num(balance - amount));
    ctx.reply(Value{});
  } else if (sel == "deposit") {
    ctx.become(num(balance + ctx.payload().at(1).as_integer()));
    ctx.reply(Value{});
  } else {
    not_understood(ctx);
  }
}

// One-shot customer that reports completion to a join actor. State: [join].
void notify(BehaviorContext& ctx) {
  if (!is_response(ctx.kind())) return;
  ctx.send(ctx.state().at(0).as_address(), sym("done"));
  ctx.halt();
}

// State: [remaining, account, customer]. Asks for the balance once every
// withdrawal has been answered.
void join(BehaviorContext& ctx) {
  if (ctx.payload().selector() != "done") not_understood(ctx);
  const auto remaining = ctx.state().at(0).as_integer() - 1;
  if (remaining == 0) {
    ctx.send(ctx.state().at(1).as_address(), sym("getBalance"), ctx.state().at(2).as_address());
    ctx.halt();
  }
  ctx.become(Value::list({num(remaining), ctx.state().at(1), ctx.state().at(2)}));
}

void latch(BehaviorContext& ctx) {
  const bool released = ctx.state().at(0).as_boolean();
  const auto& waiting = ctx.state().at(1);
  const auto sel = ctx.payload().selector();
  if (sel == "wait") {
    if (released) {
      ctx.reply(Value{});
    } else if (ctx.customer()) {
      ctx.become(Value::list({Value::boolean(false), Value::list(appended(waiting, addr(*ctx.customer())))}));
    }
  } else if (sel == "releaseAll") {
    for (const auto& c : waiting.as_list()) ctx.respond(c.as_address(), Value{});
    ctx.become(Value::list({Value::boolean(true), Value::list({})}));
    ctx.reply(Value{});
  } else {
    not_understood(ctx);
  }
}

void block_runner(BehaviorContext& ctx) {
  if (ctx.payload().selector() != "run") not_understood(ctx);
  ctx.reply(eval_block(ctx.state()));
  ctx.halt();
}

Value pending_future_state() {
  return Value::list({sym("pending"), Value{}, Value::list({})});
}

void gcd_queue(BehaviorContext& ctx) {
  const auto dispatched = ctx.state().as_integer();
  const auto sel = ctx.payload().selector();
  if (sel == "dispatch_sync") {
    ctx.reply(eval_block(ctx.payload().at(1)));
  } else if (sel == "dispatch_async") {
    const Address f = ctx.create("future", pending_future_state());
    const Address r = ctx.create("block-runner", ctx.payload().at(1));
    ctx.send(r, sym("run"), f);
    ctx.reply(addr(f));
  } else {
    not_understood(ctx);
  }
  ctx.become(num(dispatched + 1));
}

// Answers one request against a settled future. `target` is the requester's
// customer or a derivative future.
void serve(BehaviorContext& ctx, const std::string& status, const Value& v, const Value& request,
           Address target) {
  if (status == "failed") {
    ctx.respond_threw(target, v);
    return;
  }
  const auto sel = request.selector();
  if (sel == "get") {
    ctx.respond(target, v);
  } else if (sel == "apply") {
    // [apply, block-name, extra args...]: block-name(v, extra...)
    Value::List block{request.at(1), v};
    for (std::size_t i = 2; i < request.size(); ++i) block.push_back(request.at(i));
    try {
      ctx.respond(target, eval_block(Value::list(std::move(block))));
    } catch (const ActorThrow& e) {
      ctx.respond_threw(target, e.value);
    }
  } else if (v.is_address()) {
    ctx.send(v.as_address(), request, target);
  } else {
    ctx.respond_threw(target, Value::list({sym("NotUnderstood"), request}));
  }
}

void future(BehaviorContext& ctx) {
  std::string status = ctx.state().at(0).as_symbol();
  Value value = ctx.state().at(1);
  Value buffered = ctx.state().at(2);

  if (is_response(ctx.kind())) {
    // Only the first resolution counts; later ones leave the state alone.
    if (status != "pending") return;
    status = ctx.kind() == MessageKind::Threw ? "failed" : "resolved";
    value = ctx.payload();
    for (const auto& entry : buffered.as_list()) {
      const Value& target = entry.at(2).is_address() ? entry.at(2) : entry.at(1);
      if (target.is_address()) serve(ctx, status, value, entry.at(0), target.as_address());
    }
    ctx.become(Value::list({sym(status), value, Value::list({})}));
    return;
  }

  if (status == "dormant") {
    const Address r = ctx.create("block-runner", value);
    ctx.send(r, sym("run"), ctx.self());
    status = "pending";
    value = Value{};
  }
  if (status == "pending") {
    Value cust = ctx.customer() ? addr(*ctx.customer()) : Value{};
    Value derivative;
    if (ctx.payload().selector() != "get") {
      const Address d = ctx.create("future", pending_future_state());
      derivative = addr(d);
      ctx.reply(derivative);
      cust = Value{};
    }
    ctx.become(Value::list(
        {sym(status), value, Value::list(appended(buffered, Value::list({ctx.payload(), cust, derivative})))}));
    return;
  }
  if (ctx.customer()) serve(ctx, status, value, ctx.payload(), *ctx.customer());
}

void channel(BehaviorContext& ctx) {
  const auto& puts = ctx.state().at(0);
  const auto& gets = ctx.state().at(1);
  const auto sel = ctx.payload().selector();
  if (sel == "put") {
    const Value& m = ctx.payload().at(1);
    if (gets.size() > 0) {
      ctx.respond(gets.at(0).as_address(), m);
      ctx.reply(Value{});
      ctx.become(Value::list({puts, Value::list(tail(gets))}));
    } else {
      Value putter = ctx.customer() ? addr(*ctx.customer()) : Value{};
      ctx.become(Value::list({Value::list(appended(puts, Value::list({m, putter}))), gets}));
    }
  } else if (sel == "get") {
    if (puts.size() > 0) {
      const auto& head = puts.at(0);
      ctx.reply(head.at(0));
      if (head.at(1).is_address()) ctx.respond(head.at(1).as_address(), Value{});
      ctx.become(Value::list({Value::list(tail(puts)), gets}));
    } else if (ctx.customer()) {
      ctx.become(Value::list({puts, Value::list(appended(gets, addr(*ctx.customer())))}));
    }
  } else {
    not_understood(ctx);
  }
}

// Lazy nondeterministic bit stream. State: [status, [bit, rest]|void, waiting].
// On first demand the cell sends itself both candidate bits; whichever
// arrives first is the bit.
void real_cell(BehaviorContext& ctx) {
  const auto& status = ctx.state().at(0).as_symbol();
  const auto& result = ctx.state().at(1);
  const auto& waiting = ctx.state().at(2);
  const auto sel = ctx.payload().selector();
  if (sel == "next") {
    const Value cust = ctx.customer() ? addr(*ctx.customer()) : Value{};
    if (status == "chosen") {
      ctx.reply(result);
      return;
    }
    Value::List w = waiting.as_list();
    if (cust.is_address()) w.push_back(cust);
    if (status == "dormant") {
      ctx.send(ctx.self(), Value::list({sym("pick"), num(0)}));
      ctx.send(ctx.self(), Value::list({sym("pick"), num(1)}));
    }
    ctx.become(Value::list({sym("choosing"), result, Value::list(std::move(w))}));
  } else if (sel == "pick") {
    if (status != "choosing") return;
    const Address rest =
        ctx.create("real-cell", Value::list({sym("dormant"), Value{}, Value::list({})}));
    Value chosen = Value::list({ctx.payload().at(1), addr(rest)});
    for (const auto& c : waiting.as_list()) ctx.respond(c.as_address(), chosen);
    ctx.become(Value::list({sym("chosen"), chosen, Value::list({})}));
  } else {
    not_understood(ctx);
  }
}

// Continuation collecting bits. State: [bits, remaining, customer].
void real_reader(BehaviorContext& ctx) {
  if (!is_response(ctx.kind())) return;
  Value::List bits = appended(ctx.state().at(0), ctx.payload().at(0));
  const auto remaining = ctx.state().at(1).as_integer() - 1;
  const Value& h = ctx.state().at(2);
  if (remaining <= 0) {
    ctx.respond(h.as_address(), Value::list(std::move(bits)));
  } else {
    const Address k = ctx.create("real-reader", Value::list({Value::list(std::move(bits)), num(remaining), h}));
    ctx.send(ctx.payload().at(1).as_address(), sym("next"), k);
  }
  ctx.halt();
}

// State: [tape length, halted].
void ndtm(BehaviorContext& ctx) {
  const auto tape = ctx.state().at(0).as_integer();
  if (ctx.state().at(1).as_boolean()) return;
  const auto sel = ctx.payload().selector();
  if (sel == "print") {
    ctx.send(ctx.self(), sym("print"));
    ctx.become(Value::list({num(tape + 1), Value::boolean(false)}));
  } else if (sel == "halt") {
    ctx.become(Value::list({num(tape), Value::boolean(true)}));
  } else {
    not_understood(ctx);
  }
}

// X: [z]. Sends stop to Z once.
void csp_x(BehaviorContext& ctx) {
  if (ctx.payload().selector() != "start") not_understood(ctx);
  ctx.send(ctx.state().at(0).as_address(), sym("stop"));
  ctx.halt();
}

// Y: [z]. Sends go while Z's guard stays true.
void csp_y(BehaviorContext& ctx) {
  const auto sel = ctx.payload().selector();
  const Address z = ctx.state().at(0).as_address();
  if (sel == "start" || (sel == "guard" && ctx.payload().at(1).as_boolean())) {
    ctx.send(z, Value::list({sym("go"), addr(ctx.self())}));
  } else if (sel == "guard") {
    ctx.halt();
  } else {
    not_understood(ctx);
  }
}

// Z: [n, continue, customer].
void csp_z(BehaviorContext& ctx) {
  const auto n = ctx.state().at(0).as_integer();
  const bool cont = ctx.state().at(1).as_boolean();
  const Value& h = ctx.state().at(2);
  const auto sel = ctx.payload().selector();
  if (sel == "stop") {
    ctx.become(Value::list({num(n), Value::boolean(false), h}));
  } else if (sel == "go") {
    ctx.send(ctx.payload().at(1).as_address(), Value::list({sym("guard"), Value::boolean(cont)}));
    ctx.become(Value::list({num(n + 1), Value::boolean(cont), h}));
    if (!cont) {
      ctx.respond(h.as_address(), num(n + 1));
      ctx.halt();
    }
  } else {
    not_understood(ctx);
  }
}

void await(BehaviorContext& ctx);

}  // namespace

Value eval_block(const Value& block) {
  if (!block.is_list() || block.size() == 0 || !block.at(0).is_symbol()) {
    throw ActorThrow{Value::list({sym("UnknownBlock"), block})};
  }
  const auto& name = block.at(0).as_symbol();
  auto arg = [&](std::size_t i) {
    if (i >= block.size() || !block.at(i).is_integer()) {
      throw ActorThrow{Value::list({sym("BadBlockArgument"), block})};
    }
    return block.at(i).as_integer();
  };
  if (name == "const") {
    if (block.size() < 2) throw ActorThrow{Value::list({sym("BadBlockArgument"), block})};
    return block.at(1);
  }
  if (name == "inc") return num(arg(1) + 1);
  if (name == "double") return num(arg(1) * 2);
  if (name == "square") return num(arg(1) * arg(1));
  if (name == "add") return num(arg(1) + arg(2));
  if (name == "fail") throw ActorThrow{sym("BlockFailed")};
  throw ActorThrow{Value::list({sym("UnknownBlock"), block})};
}

void register_construct_behaviors(BehaviorRegistry& registry) {
  registry.add("customer", customer);
  registry.add("counter", counter);
  registry.add("account", account);
  registry.add("notify", notify);
  registry.add("join", join);
  registry.add("latch", latch);
  registry.add("block-runner", block_runner);
  registry.add("gcd-queue", gcd_queue);
  registry.add("future", future);
  registry.add("channel", channel);
  registry.add("real-cell", real_cell);
  registry.add("real-reader", real_reader);
  registry.add("ndtm", ndtm);
  registry.add("csp-x", csp_x);
  registry.add("csp-y", csp_y);
  registry.add("csp-z", csp_z);
  registry.add("await", await);
}

BehaviorSpec customer_behavior() { return {"customer", sym("pending")}; }
BehaviorSpec counter_behavior(std::int64_t count) {
  return {"counter", Value::list({num(count), Value::boolean(true)})};
}
BehaviorSpec account_behavior(std::int64_t initial) { return {"account", num(initial)}; }
BehaviorSpec latch_behavior() {
  return {"latch", Value::list({Value::boolean(false), Value::list({})})};
}
BehaviorSpec gcd_queue_behavior() { return {"gcd-queue", num(0)}; }
BehaviorSpec channel_behavior() {
  return {"channel", Value::list({Value::list({}), Value::list({})})};
}

Address future_create(Configuration& config, Value block) {
  const Address f = config.create_actor({"future", pending_future_state()});
  const Address r = config.create_actor({"block-runner", std::move(block)});
  config.send(r, sym("run"), f);
  return f;
}

Address postpone_create(Configuration& config, Value block) {
  return config.create_actor(
      {"future", Value::list({sym("dormant"), std::move(block), Value::list({})})});
}

// Scenarios.

System unbounded_scenario() {
  Configuration c;
  const Address h = c.create_actor(customer_behavior());
  const Address counter = c.create_actor(counter_behavior(0));
  c.send(counter, sym("go"));
  c.send(counter, sym("stop"), h);
  return System{"unbounded", std::move(c)};
}

System account_scenario(std::int64_t balance, std::int64_t first, std::int64_t second) {
  Configuration c;
  const Address h = c.create_actor(customer_behavior());
  const Address acct = c.create_actor(account_behavior(balance));
  const Address j = c.create_actor({"join", Value::list({num(2), addr(acct), addr(h)})});
  const Address n1 = c.create_actor({"notify", Value::list({addr(j)})});
  const Address n2 = c.create_actor({"notify", Value::list({addr(j)})});
  c.send(acct, Value::list({sym("withdraw"), num(first)}), n1);
  c.send(acct, Value::list({sym("withdraw"), num(second)}), n2);
  return System{"account", std::move(c)};
}

System latch_scenario() {
  Configuration c;
  const Address w1 = c.create_actor(customer_behavior());
  const Address w2 = c.create_actor(customer_behavior());
  const Address r = c.create_actor(customer_behavior());
  const Address l = c.create_actor(latch_behavior());
  c.send(l, sym("wait"), w1);
  c.send(l, sym("wait"), w2);
  c.send(l, sym("releaseAll"), r);
  return System{"latch", std::move(c)};
}

namespace {

// Continuation that reads a future it receives and hands the result to its
// customer, so outputs hold values rather than addresses. State: [customer].
void await(BehaviorContext& ctx) {
  if (!is_response(ctx.kind())) return;
  const Address h = ctx.state().at(0).as_address();
  if (ctx.kind() == MessageKind::Threw) {
    ctx.respond_threw(h, ctx.payload());
  } else if (ctx.payload().is_address()) {
    ctx.send(ctx.payload().as_address(), sym("get"), h);
  } else {
    ctx.respond(h, ctx.payload());
  }
  ctx.halt();
}

}  // namespace

System gcd_scenario() {
  Configuration c;
  const Address h1 = c.create_actor(customer_behavior());
  const Address h2 = c.create_actor(customer_behavior());
  const Address h3 = c.create_actor(customer_behavior());
  const Address q = c.create_actor(gcd_queue_behavior());
  const Address k = c.create_actor({"await", Value::list({addr(h3)})});
  c.send(q, Value::list({sym("dispatch_sync"), Value::list({sym("square"), num(3)})}), h1);
  c.send(q, Value::list({sym("dispatch_sync"), Value::list({sym("inc"), num(4)})}), h2);
  c.send(q, Value::list({sym("dispatch_async"), Value::list({sym("square"), num(5)})}), k);
  return System{"gcd", std::move(c)};
}

System future_scenario() {
  Configuration c;
  const Address h1 = c.create_actor(customer_behavior());
  const Address h2 = c.create_actor(customer_behavior());
  const Address h3 = c.create_actor(customer_behavior());
  const Address f = future_create(c, Value::list({sym("square"), num(4)}));
  const Address k = c.create_actor({"await", Value::list({addr(h3)})});
  c.send(f, sym("get"), h1);
  c.send(f, sym("get"), h2);
  c.send(f, Value::list({sym("apply"), sym("add"), num(3)}), k);
  return System{"future", std::move(c)};
}

System channel_scenario(int puts, int gets) {
  Configuration c;
  std::vector<Address> putters;
  std::vector<Address> getters;
  for (int i = 0; i < puts; ++i) putters.push_back(c.create_actor(customer_behavior()));
  for (int i = 0; i < gets; ++i) getters.push_back(c.create_actor(customer_behavior()));
  const Address ch = c.create_actor(channel_behavior());
  for (int i = 0; i < puts; ++i) {
    c.send(ch, Value::list({sym("put"), num(5 + i)}), putters[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < gets; ++i) c.send(ch, sym("get"), getters[static_cast<std::size_t>(i)]);
  return System{"channel", std::move(c)};
}

System real_scenario(int bits) {
  if (bits < 1) throw std::invalid_argument("real: bits must be positive");
  Configuration c;
  const Address h = c.create_actor(customer_behavior());
  const Address cell =
      c.create_actor({"real-cell", Value::list({sym("dormant"), Value{}, Value::list({})})});
  const Address reader =
      c.create_actor({"real-reader", Value::list({Value::list({}), num(bits), addr(h)})});
  c.send(cell, sym("next"), reader);
  System s{"real", std::move(c)};
  s.observe = [](const Configuration& config) {
    Value::List chosen;
    for (const auto& a : config.actors()) {
      if (a.spec.behavior_name == "real-cell" && a.spec.state.at(0).is_symbol("chosen")) {
        chosen.push_back(a.spec.state.at(1).at(0));
      }
    }
    return std::vector<Value>{Value::list(std::move(chosen))};
  };
  return s;
}

System ndtm_scenario() {
  Configuration c;
  const Address m = c.create_actor({"ndtm", Value::list({num(0), Value::boolean(false)})});
  c.send(m, sym("print"));
  c.send(m, sym("halt"));
  System s{"ndtm", std::move(c)};
  s.observe = [](const Configuration& config) {
    for (const auto& a : config.actors()) {
      if (a.spec.behavior_name != "ndtm") continue;
      if (!a.spec.state.at(1).as_boolean()) return std::vector<Value>{sym("running")};
      return std::vector<Value>{
          Value::string(std::string(static_cast<std::size_t>(a.spec.state.at(0).as_integer()), '1'))};
    }
    return std::vector<Value>{};
  };
  return s;
}

System csp_scenario() {
  Configuration c;
  const Address h = c.create_actor(customer_behavior());
  const Address z =
      c.create_actor({"csp-z", Value::list({num(0), Value::boolean(true), addr(h)})});
  const Address x = c.create_actor({"csp-x", Value::list({addr(z)})});
  const Address y = c.create_actor({"csp-y", Value::list({addr(z)})});
  c.send(x, sym("start"));
  c.send(y, sym("start"));
  return System{"csp-xyz", std::move(c)};
}

}  // namespace actorsim
