#include "actorsim/laws.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace actorsim {

bool Report::has(std::string_view kind) const noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

void Report::merge(const Report& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

UnknownEvent::UnknownEvent(EventId i)
    : std::invalid_argument("unknown event " + std::to_string(i.value)), id(i) {}

UnknownPredicate::UnknownPredicate(std::string n)
    : std::invalid_argument("unknown predicate: " + n), name(std::move(n)) {}

namespace {

std::string ev(EventId e) { return "e" + std::to_string(e.value); }

/// Event graph over positions in trace.events.
struct EventGraph {
  std::unordered_map<std::uint64_t, std::size_t> index;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::vector<std::size_t>> pred;

  EventGraph(const Trace& trace, bool with_reception_order) {
    const auto n = trace.events.size();
    succ.resize(n);
    pred.resize(n);
    for (std::size_t i = 0; i < n; ++i) index.emplace(trace.events[i].id.value, i);
    auto edge = [&](std::size_t from, std::size_t to) {
      succ[from].push_back(to);
      pred[to].push_back(from);
    };
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = trace.events[i];
      if (!e.activated_by) continue;
      auto it = index.find(e.activated_by->value);
      if (it != index.end()) edge(it->second, i);
    }
    if (with_reception_order) {
      std::map<ActorId, std::size_t> last;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& e = trace.events[i];
        if (!e.is_reception()) continue;
        auto it = last.find(e.actor);
        if (it != last.end()) edge(it->second, i);
        last[e.actor] = i;
      }
    }
  }

  std::size_t at(EventId id) const {
    auto it = index.find(id.value);
    if (it == index.end()) throw UnknownEvent(id);
    return it->second;
  }

  std::vector<bool> reach(std::size_t from, bool forward) const {
    std::vector<bool> seen(succ.size(), false);
    std::deque<std::size_t> work;
    const auto& adj = forward ? succ : pred;
    for (auto s : adj[from]) {
      if (!seen[s]) {
        seen[s] = true;
        work.push_back(s);
      }
    }
    while (!work.empty()) {
      auto u = work.front();
      work.pop_front();
      for (auto s : adj[u]) {
        if (!seen[s]) {
          seen[s] = true;
          work.push_back(s);
        }
      }
    }
    return seen;
  }

  /// Kahn's algorithm; returns positions left on a cycle.
  std::vector<std::size_t> cyclic_nodes() const {
    std::vector<std::size_t> indeg(succ.size(), 0);
    for (const auto& out : succ) {
      for (auto s : out) ++indeg[s];
    }
    std::deque<std::size_t> work;
    for (std::size_t i = 0; i < indeg.size(); ++i) {
      if (indeg[i] == 0) work.push_back(i);
    }
    std::size_t done = 0;
    while (!work.empty()) {
      auto u = work.front();
      work.pop_front();
      ++done;
      for (auto s : succ[u]) {
        if (--indeg[s] == 0) work.push_back(s);
      }
    }
    std::vector<std::size_t> left;
    if (done == succ.size()) return left;
    for (std::size_t i = 0; i < indeg.size(); ++i) {
      if (indeg[i] > 0) left.push_back(i);
    }
    return left;
  }
};

bool precedes(const Trace& trace, EventId a, EventId b, bool combined) {
  EventGraph g(trace, combined);
  const auto from = g.at(a);
  const auto to = g.at(b);
  return g.reach(from, true)[to];
}

}  // namespace

bool activation_precedes(const Trace& trace, EventId a, EventId b) {
  return precedes(trace, a, b, false);
}

bool combined_precedes(const Trace& trace, EventId a, EventId b) {
  return precedes(trace, a, b, true);
}

std::vector<EventId> intermediate_events(const Trace& trace, EventId a, EventId b) {
  EventGraph g(trace, true);
  const auto after_a = g.reach(g.at(a), true);
  const auto before_b = g.reach(g.at(b), false);
  std::vector<EventId> out;
  for (std::size_t i = 0; i < after_a.size(); ++i) {
    if (after_a[i] && before_b[i]) out.push_back(trace.events[i].id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Report check_well_formed(const Trace& trace) {
  Report report;
  auto flag = [&](std::string kind, std::string detail, std::optional<EventId> e = {}) {
    report.violations.push_back(Violation{std::move(kind), std::move(detail), e});
  };

  std::set<std::uint64_t> ids;
  for (const auto& e : trace.events) {
    if (!ids.insert(e.id.value).second) flag("event-id", "duplicate event id " + ev(e.id), e.id);
  }
  std::set<MsgId> msg_ids;
  for (const auto& m : trace.messages) {
    if (!msg_ids.insert(m.id).second) flag("msg", "duplicate message record " + std::to_string(m.id));
  }

  std::map<MsgId, int> transmitted;
  std::map<MsgId, int> received;
  std::map<ActorId, std::uint64_t> next_seq;
  for (const auto& e : trace.events) {
    const MessageRecord* m = trace.message(e.msg);
    if (m == nullptr) {
      flag("msg", ev(e.id) + " refers to unknown message " + std::to_string(e.msg), e.id);
    }
    if (e.is_transmission()) {
      ++transmitted[e.msg];
      if (e.activated_by) {
        const Event* by = trace.event(*e.activated_by);
        if (by == nullptr || !by->is_reception()) {
          flag("activator", ev(e.id) + " is activated by a missing or non-reception event", e.id);
        }
      }
    } else {
      ++received[e.msg];
      if (!e.activated_by) {
        flag("activator", "reception " + ev(e.id) + " has no activating transmission", e.id);
      } else {
        const Event* by = trace.event(*e.activated_by);
        if (by == nullptr || !by->is_transmission() || by->msg != e.msg) {
          flag("activator", "reception " + ev(e.id) + " is not activated by its message's transmission",
               e.id);
        }
      }
      if (m != nullptr && m->target != e.actor) {
        flag("msg", "message " + std::to_string(e.msg) + " received by @" + std::to_string(e.actor) +
                        " but targeted @" + std::to_string(m->target),
             e.id);
      }
      auto& expected = next_seq[e.actor];
      if (e.seq != expected) {
        flag("seq", "reception " + ev(e.id) + " at @" + std::to_string(e.actor) + " has seq " +
                        std::to_string(e.seq) + ", expected " + std::to_string(expected),
             e.id);
      }
      expected = e.seq + 1;
    }
  }
  for (const auto& m : trace.messages) {
    const int tx = transmitted[m.id];
    if (tx != 1) {
      flag("msg", "message " + std::to_string(m.id) + " transmitted " + std::to_string(tx) + " times");
    }
    const int rx = received[m.id];
    if (rx > 1) {
      flag("msg", "message " + std::to_string(m.id) + " received " + std::to_string(rx) + " times");
    }
  }

  EventGraph g(trace, true);
  for (auto i : g.cyclic_nodes()) {
    flag("cycle", ev(trace.events[i].id) + " lies on a cycle of the combined order",
         trace.events[i].id);
  }
  return report;
}

Report check_single_response(const Trace& trace) {
  Report report;
  std::map<ActorId, std::vector<MsgId>> responses;
  for (const auto& m : trace.messages) {
    if (!is_response(m.kind)) continue;
    responses[m.target].push_back(m.id);
    if (m.customer) {
      report.violations.push_back(Violation{
          "single-response", "response " + std::to_string(m.id) + " carries a customer", {}});
    }
  }
  for (const auto& [customer, ids] : responses) {
    if (ids.size() < 2) continue;
    std::string detail = "customer @" + std::to_string(customer) + " receives " +
                         std::to_string(ids.size()) + " responses (messages";
    for (auto id : ids) detail += " " + std::to_string(id);
    report.violations.push_back(Violation{"single-response", detail + ")", {}});
  }
  return report;
}

Report check_locality(const Trace& trace) {
  Report report;
  std::map<ActorId, std::set<ActorId>> known;
  std::multimap<std::uint64_t, const CreationRecord*> created_by;
  for (const auto& c : trace.creations) {
    if (c.by) {
      created_by.emplace(c.by->value, &c);
    } else {
      auto& k = known[c.actor];
      k.insert(c.actor);
      k.insert(c.refs.begin(), c.refs.end());
    }
  }
  auto flag = [&](std::string detail, EventId e) {
    report.violations.push_back(Violation{"locality", std::move(detail), e});
  };

  std::vector<const Event*> order;
  for (const auto& e : trace.events) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });

  // Acquaintances of the receiving actor as of each reception.
  std::map<std::uint64_t, std::pair<ActorId, std::set<ActorId>>> at_reception;
  for (const Event* e : order) {
    const MessageRecord* m = trace.message(e->msg);
    if (m == nullptr) continue;
    if (e->is_reception()) {
      auto& k = known[e->actor];
      k.insert(e->actor);
      k.insert(m->refs.begin(), m->refs.end());
      if (m->customer) k.insert(*m->customer);
      auto [lo, hi] = created_by.equal_range(e->id.value);
      for (auto it = lo; it != hi; ++it) k.insert(it->second->actor);
      for (auto it = lo; it != hi; ++it) {
        const CreationRecord& c = *it->second;
        for (auto r : c.refs) {
          if (!k.contains(r)) {
            flag("@" + std::to_string(e->actor) + " created @" + std::to_string(c.actor) +
                     " holding unknown address @" + std::to_string(r),
                 e->id);
          }
        }
        auto& child = known[c.actor];
        child.insert(c.actor);
        child.insert(c.refs.begin(), c.refs.end());
      }
      at_reception[e->id.value] = {e->actor, k};
      continue;
    }
    if (!e->activated_by) {
      if (!known.contains(m->target)) {
        flag("root message " + std::to_string(m->id) + " targets nonexistent @" +
                 std::to_string(m->target),
             e->id);
      }
      continue;
    }
    auto it = at_reception.find(e->activated_by->value);
    if (it == at_reception.end()) continue;  // reported by check_well_formed
    const auto& [sender, k] = it->second;
    auto check = [&](ActorId a, const char* where) {
      if (!k.contains(a)) {
        flag("@" + std::to_string(sender) + " sent message " + std::to_string(m->id) + " with " +
                 where + " @" + std::to_string(a) + " it never acquired",
             e->id);
      }
    };
    check(m->target, "target");
    for (auto r : m->refs) check(r, "payload address");
    if (m->customer) check(*m->customer, "customer");
  }
  return report;
}

Report check_discreteness(const Trace& trace, std::size_t* pairs) {
  Report report;
  EventGraph g(trace, true);
  const auto n = trace.events.size();
  const auto words = (n + 63) / 64;
  auto pack = [&](const std::vector<bool>& bits) {
    std::vector<std::uint64_t> out(words, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (bits[i]) out[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    return out;
  };
  std::vector<std::vector<std::uint64_t>> fwd(n);
  std::vector<std::vector<std::uint64_t>> bwd(n);
  for (std::size_t i = 0; i < n; ++i) {
    fwd[i] = pack(g.reach(i, true));
    bwd[i] = pack(g.reach(i, false));
  }
  auto test = [](const std::vector<std::uint64_t>& bits, std::size_t i) {
    return (bits[i / 64] >> (i % 64)) & 1U;
  };
  std::size_t examined = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!test(fwd[a], b)) continue;
      ++examined;
      if (a == b) {
        report.violations.push_back(Violation{
            "cycle", ev(trace.events[a].id) + " precedes itself", trace.events[a].id});
        continue;
      }
      // The interval is fwd(a) & bwd(b); it may not contain its endpoints.
      if (test(fwd[a], a) || test(fwd[b], b) || !test(bwd[b], a)) {
        report.violations.push_back(Violation{
            "discreteness", "interval " + ev(trace.events[a].id) + ".." + ev(trace.events[b].id) +
                                " contains an endpoint", trace.events[a].id});
      }
    }
  }
  if (pairs != nullptr) *pairs = examined;
  return report;
}

Report check_all(const Trace& trace) {
  Report r = check_well_formed(trace);
  r.merge(check_single_response(trace));
  r.merge(check_locality(trace));
  return r;
}

void PredicateRegistry::add_state(std::string name, StatePredicate p) {
  states_.emplace_back(std::move(name), std::move(p));
}

void PredicateRegistry::add_transition(std::string name, TransitionPredicate p) {
  transitions_.emplace_back(std::move(name), std::move(p));
}

const StatePredicate* PredicateRegistry::state(std::string_view name) const noexcept {
  for (const auto& [n, p] : states_) {
    if (n == name) return &p;
  }
  return nullptr;
}

const TransitionPredicate* PredicateRegistry::transition(std::string_view name) const noexcept {
  for (const auto& [n, p] : transitions_) {
    if (n == name) return &p;
  }
  return nullptr;
}

const PredicateRegistry& builtin_predicates() {
  static const PredicateRegistry registry = [] {
    PredicateRegistry r;
    // Counter state: [count, continue]
    r.add_state("count-nonneg", [](const Value& s) { return s.at(0).as_integer() >= 0; });
    r.add_transition("counter-monotone", [](const Value& before, const Value& after) {
      return after.at(0).as_integer() >= before.at(0).as_integer();
    });
    r.add_transition("continue-latched", [](const Value& before, const Value& after) {
      return before.at(1).as_boolean() || !after.at(1).as_boolean();
    });
    // Account state: balance
    r.add_state("balance-nonneg", [](const Value& s) { return s.as_integer() >= 0; });
    r.add_state("balance-at-least-5", [](const Value& s) { return s.as_integer() >= 5; });
    // Latch state: [released, waiting]
    r.add_state("latch-drained", [](const Value& s) {
      return !s.at(0).as_boolean() || s.at(1).size() == 0;
    });
    // Future state: [status, value, buffered]
    r.add_transition("future-resolves-once", [](const Value& before, const Value& after) {
      const auto& status = before.at(0);
      if (status.is_symbol("resolved") || status.is_symbol("failed")) {
        return after.at(0) == status && after.at(1) == before.at(1);
      }
      return true;
    });
    return r;
  }();
  return registry;
}

InductionResult actor_induction(const Configuration& config, Address actor,
                                std::string_view predicate, const PredicateRegistry& registry) {
  const auto& history = config.state_history(actor);
  InductionResult result;
  if (const auto* p = registry.state(predicate)) {
    for (std::size_t i = 0; i < history.size(); ++i) {
      if ((*p)(history[i].state)) continue;
      result.holds = false;
      if (i == 0) {
        result.failed_initially = true;
      } else {
        result.first_violation = history[i].after;
      }
      return result;
    }
    return result;
  }
  if (const auto* p = registry.transition(predicate)) {
    for (std::size_t i = 1; i < history.size(); ++i) {
      if ((*p)(history[i - 1].state, history[i].state)) continue;
      result.holds = false;
      result.first_violation = history[i].after;
      return result;
    }
    return result;
  }
  throw UnknownPredicate(std::string(predicate));
}

}  // namespace actorsim
