#include "actorsim/scheduler.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>

namespace actorsim {

Policy Policy::seeded_random(std::uint64_t seed) {
  Policy p;
  p.kind = Kind::SeededRandom;
  p.seed = seed;
  return p;
}

Policy Policy::adversarial(const std::string& script_name) {
  Policy p;
  p.kind = Kind::Adversarial;
  p.script_name = script_name;
  if (script_name == "starve-stop") {
    p.script.push_back(SelectionRule{
        "anything-but-stop", [](const Message& m) { return m.payload.selector() != "stop"; }});
  } else if (script_name == "always-print" || script_name == "always-step2") {
    p.script.push_back(
        SelectionRule{"print", [](const Message& m) { return m.payload.selector() == "print"; }});
  } else {
    throw std::invalid_argument("unknown adversarial script: " + script_name);
  }
  return p;
}

std::string Policy::tag() const {
  switch (kind) {
    case Kind::FairFifo:
      return "fair";
    case Kind::SeededRandom:
      return "random:" + std::to_string(seed);
    case Kind::Adversarial:
      return "adversarial:" + script_name;
    case Kind::Exhaustive:
      return "exhaustive";
  }
  return "fair";
}

std::vector<Value> harness_outputs(const Configuration& config) {
  std::vector<Value> out;
  for (const auto& a : config.actors()) {
    if (a.spec.behavior_name == "customer") out.push_back(a.spec.state);
  }
  return out;
}

namespace {

std::size_t choose(const std::vector<Message>& in_transit, const Policy& policy,
                   std::mt19937_64& rng) {
  switch (policy.kind) {
    case Policy::Kind::FairFifo:
      return 0;
    case Policy::Kind::SeededRandom:
      return static_cast<std::size_t>(rng() % in_transit.size());
    case Policy::Kind::Adversarial:
      for (const auto& rule : policy.script) {
        for (std::size_t i = 0; i < in_transit.size(); ++i) {
          if (rule.accepts(in_transit[i])) return i;
        }
      }
      return 0;
    case Policy::Kind::Exhaustive:
      break;
  }
  throw std::invalid_argument("exhaustive policy cannot drive a single run");
}

}  // namespace

RunResult run(const System& system, const Policy& policy, std::uint64_t max_steps) {
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  if (policy.kind == Policy::Kind::Exhaustive) {
    throw std::invalid_argument("exhaustive policy cannot drive a single run");
  }
  RunResult result{false, 0, system.initial, {}};
  Configuration& config = result.final_config;
  config.set_policy_tag(policy.tag());
  std::mt19937_64 rng(policy.seed);
  while (!config.quiescent() && result.steps < max_steps) {
    // in_transit is kept in msg_id order, so index 0 is the oldest.
    const auto i = choose(config.in_transit(), policy, rng);
    config.deliver_step(config.in_transit()[i].msg_id);
    ++result.steps;
  }
  result.halted = config.quiescent();
  result.outputs = system.observe(config);
  return result;
}

bool OutcomeSet::has_frontier() const {
  return std::any_of(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return !o.halted; });
}

std::set<std::vector<Value>> OutcomeSet::halting_outputs() const {
  std::set<std::vector<Value>> out;
  for (const auto& o : outcomes) {
    if (o.halted) out.insert(o.outputs);
  }
  return out;
}

ExplosionGuard::ExplosionGuard(std::uint64_t c)
    : std::runtime_error("enumeration exceeded " + std::to_string(c) + " configurations"), cap(c) {}

namespace {

struct Explorer {
  const System& system;
  int depth;
  const EnumerateOptions& options;
  OutcomeSet& result;

  void visit(const Configuration& config, int steps) {
    if (++result.tree_size > options.cap) throw ExplosionGuard(options.cap);
    const bool halted = config.quiescent();
    if (halted || steps == depth) {
      result.outcomes.insert(Outcome{halted, system.observe(config)});
      if (options.on_leaf) options.on_leaf(config, halted);
      return;
    }
    std::vector<MsgId> choices;
    for (const auto& m : config.in_transit()) choices.push_back(m.msg_id);
    std::sort(choices.begin(), choices.end());
    for (auto id : choices) {
      Configuration next = config;
      next.deliver_step(id);
      visit(next, steps + 1);
    }
  }
};

}  // namespace

OutcomeSet enumerate_outcomes(const System& system, int depth, const EnumerateOptions& options) {
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  OutcomeSet result;
  result.depth = depth;
  Configuration root = system.initial;
  root.set_policy_tag("exhaustive");
  Explorer{system, depth, options, result}.visit(root, 0);
  return result;
}

std::uint64_t enumeration_cap_from_env() {
  if (const char* v = std::getenv("ACTOR_KERNEL_ENUM_CAP")) {
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
    }
  }
  return kDefaultEnumerationCap;
}

Report fairness_bound_check(const Trace& trace) {
  if (trace.policy != "fair") {
    throw std::invalid_argument("fairness bound applies to fair traces only (got '" +
                                trace.policy + "')");
  }
  Report report;
  std::vector<const Event*> order;
  for (const auto& e : trace.events) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });

  struct Pending {
    std::uint64_t sent_at;  // deliveries completed before the send
    std::uint64_t bound;
  };
  std::map<MsgId, Pending> pending;
  std::uint64_t deliveries = 0;
  std::uint64_t in_transit = 0;
  for (const Event* e : order) {
    if (e->is_transmission()) {
      ++in_transit;
      pending[e->msg] = Pending{deliveries, in_transit};
      continue;
    }
    ++deliveries;
    if (in_transit > 0) --in_transit;
    auto it = pending.find(e->msg);
    if (it == pending.end()) continue;
    const auto waited = deliveries - it->second.sent_at;
    if (waited > it->second.bound) {
      report.violations.push_back(Violation{
          "fairness",
          "message " + std::to_string(e->msg) + " waited " + std::to_string(waited) +
              " deliveries, bound " + std::to_string(it->second.bound),
          e->id});
    }
    pending.erase(it);
  }
  for (const auto& [msg, p] : pending) {
    if (deliveries - p.sent_at > p.bound) {
      report.violations.push_back(Violation{
          "fairness", "message " + std::to_string(msg) + " still undelivered past its bound", {}});
    }
  }
  return report;
}

bool plotkin_consistent(const System& system, const std::vector<int>& depths,
                        const EnumerateOptions& options) {
  std::vector<int> sorted = depths;
  std::sort(sorted.begin(), sorted.end());
  std::optional<OutcomeSet> settled;
  for (int d : sorted) {
    auto set = enumerate_outcomes(system, d, options);
    if (settled) {
      if (set.outcomes != settled->outcomes) return false;
    } else if (!set.has_frontier()) {
      settled = std::move(set);
    }
  }
  return true;
}

}  // namespace actorsim
