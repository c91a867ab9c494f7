#include "actorsim/constructs.hpp"
#include "actorsim/laws.hpp"
#include "actorsim/scheduler.hpp"

#include <gtest/gtest.h>

using namespace actorsim;

namespace {

Event tx(std::uint64_t id, MsgId msg, std::optional<std::uint64_t> by) {
  Event e;
  e.id = EventId{id};
  e.kind = EventKind::Transmission;
  e.msg = msg;
  if (by) e.activated_by = EventId{*by};
  return e;
}

Event rx(std::uint64_t id, MsgId msg, std::uint64_t by, ActorId actor, std::uint64_t seq) {
  Event e;
  e.id = EventId{id};
  e.kind = EventKind::Reception;
  e.msg = msg;
  e.activated_by = EventId{by};
  e.actor = actor;
  e.seq = seq;
  return e;
}

MessageRecord msg(MsgId id, ActorId target, MessageKind kind = MessageKind::Request,
                  std::optional<ActorId> customer = {}, std::vector<ActorId> refs = {}) {
  return MessageRecord{id, target, kind, "null", customer, std::move(refs)};
}

CreationRecord top(ActorId a, std::vector<ActorId> refs = {}) {
  return CreationRecord{a, std::nullopt, "customer", std::move(refs)};
}

Trace account_trace() {
  return run(account_scenario(), Policy::fair_fifo()).final_config.trace();
}

}  // namespace

TEST(WellFormed, KernelTracesPass) {
  for (auto system : {account_scenario(), latch_scenario(), future_scenario(), gcd_scenario()}) {
    const auto r = run(system, Policy::seeded_random(3));
    EXPECT_TRUE(check_all(r.final_config.trace()).ok()) << system.name;
  }
}

TEST(WellFormed, ActivationCycleDetected) {
  Trace t;
  t.creations = {top(0)};
  t.messages = {msg(0, 0)};
  t.events = {tx(0, 0, 1), rx(1, 0, 0, 0, 0)};
  const auto r = check_well_formed(t);
  EXPECT_TRUE(r.has("cycle"));
}

TEST(WellFormed, ReceptionWithoutTransmissionDetected) {
  Trace t;
  t.creations = {top(0)};
  t.messages = {msg(0, 0)};
  t.events = {rx(0, 0, 5, 0, 0)};
  const auto r = check_well_formed(t);
  EXPECT_TRUE(r.has("activator"));
  EXPECT_TRUE(r.has("msg"));
}

TEST(WellFormed, SequenceGapDetected) {
  Trace t;
  t.creations = {top(0)};
  t.messages = {msg(0, 0), msg(1, 0)};
  t.events = {tx(0, 0, {}), tx(1, 1, {}), rx(2, 0, 0, 0, 0), rx(3, 1, 1, 0, 2)};
  EXPECT_TRUE(check_well_formed(t).has("seq"));
}

TEST(WellFormed, DoubleReceptionDetected) {
  Trace t;
  t.creations = {top(0)};
  t.messages = {msg(0, 0)};
  t.events = {tx(0, 0, {}), rx(1, 0, 0, 0, 0), rx(2, 0, 0, 0, 1)};
  EXPECT_TRUE(check_well_formed(t).has("msg"));
}

TEST(SingleResponse, DoubleResponseDetected) {
  Trace t;
  t.creations = {top(0), top(1)};
  t.messages = {msg(0, 1, MessageKind::Request, 0), msg(1, 0, MessageKind::Returned),
                msg(2, 0, MessageKind::Returned)};
  t.events = {tx(0, 0, {}), rx(1, 0, 0, 1, 0), tx(2, 1, 1), tx(3, 2, 1)};
  const auto r = check_single_response(t);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(r.has("single-response"));
  EXPECT_TRUE(check_well_formed(t).ok());
}

TEST(SingleResponse, ResponseWithCustomerDetected) {
  Trace t;
  t.creations = {top(0)};
  t.messages = {msg(0, 0, MessageKind::Threw, 0)};
  t.events = {tx(0, 0, {})};
  EXPECT_TRUE(check_single_response(t).has("single-response"));
}

TEST(Locality, ForgedAddressDetected) {
  // @0 receives a message naming nobody, then sends to @2.
  Trace t;
  t.creations = {top(0), top(1), top(2)};
  t.messages = {msg(0, 0), msg(1, 2)};
  t.events = {tx(0, 0, {}), rx(1, 0, 0, 0, 0), tx(2, 1, 1)};
  const auto r = check_locality(t);
  EXPECT_TRUE(r.has("locality"));
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].event, EventId{2});
}

TEST(Locality, AddressLearnedFromMessageIsAllowed) {
  Trace t;
  t.creations = {top(0), top(1), top(2)};
  t.messages = {msg(0, 0, MessageKind::Request, {}, {2}), msg(1, 2)};
  t.events = {tx(0, 0, {}), rx(1, 0, 0, 0, 0), tx(2, 1, 1)};
  EXPECT_TRUE(check_locality(t).ok());
}

TEST(Locality, AddressLearnedFromCreationStateIsAllowed) {
  Trace t;
  t.creations = {top(0, {2}), top(1), top(2)};
  t.messages = {msg(0, 0), msg(1, 2, MessageKind::Request, 1)};
  t.events = {tx(0, 0, {}), rx(1, 0, 0, 0, 0), tx(2, 1, 1)};
  const auto r = check_locality(t);
  ASSERT_EQ(r.violations.size(), 1u);  // customer @1 was never learned
}

TEST(Orders, ActivationAndCombined) {
  const Trace t = account_trace();
  const auto roots = t.roots();
  ASSERT_EQ(roots.size(), 2u);
  // First root transmission precedes its own reception.
  EventId first_rx{0};
  for (const auto& e : t.events) {
    if (e.is_reception() && e.activated_by == roots[0]) first_rx = e.id;
  }
  EXPECT_TRUE(activation_precedes(t, roots[0], first_rx));
  EXPECT_FALSE(activation_precedes(t, first_rx, roots[0]));
  EXPECT_FALSE(activation_precedes(t, roots[0], roots[0]));
  // Two receptions at the account are ordered only by the combined order.
  const auto seqs = t.reception_seqs();
  bool found = false;
  for (const auto& [actor, events] : seqs) {
    if (events.size() < 2) continue;
    if (!activation_precedes(t, events[0], events[1])) {
      EXPECT_TRUE(combined_precedes(t, events[0], events[1]));
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Orders, IntermediateEventsAreBetweenEndpoints) {
  const Trace t = account_trace();
  const EventId a = t.events.front().id;
  const EventId b = t.events.back().id;
  ASSERT_TRUE(combined_precedes(t, a, b));
  const auto mid = intermediate_events(t, a, b);
  for (auto e : mid) {
    EXPECT_TRUE(combined_precedes(t, a, e));
    EXPECT_TRUE(combined_precedes(t, e, b));
  }
  EXPECT_EQ(std::count(mid.begin(), mid.end(), a), 0);
  EXPECT_EQ(std::count(mid.begin(), mid.end(), b), 0);
}

TEST(Orders, UnknownEventThrows) {
  const Trace t = account_trace();
  EXPECT_THROW(activation_precedes(t, EventId{9999}, EventId{0}), UnknownEvent);
  EXPECT_THROW(combined_precedes(t, EventId{0}, EventId{9999}), UnknownEvent);
}

TEST(Discreteness, EveryIntervalFiniteOnKernelTraces) {
  for (auto system : {account_scenario(), same_fringe_scenario(example_tree_right_leaning(),
                                                               example_tree_left_leaning())}) {
    const auto r = run(system, Policy::seeded_random(11));
    std::size_t pairs = 0;
    EXPECT_TRUE(check_discreteness(r.final_config.trace(), &pairs).ok());
    EXPECT_GT(pairs, 0u);
  }
}

TEST(Discreteness, CycleFlagged) {
  Trace t;
  t.creations = {top(0)};
  t.messages = {msg(0, 0)};
  t.events = {tx(0, 0, 1), rx(1, 0, 0, 0, 0)};
  EXPECT_FALSE(check_discreteness(t).ok());
}

TEST(Induction, BalanceNeverNegativeOnAnySchedule) {
  EnumerateOptions options;
  int leaves = 0;
  options.on_leaf = [&](const Configuration& c, bool) {
    ++leaves;
    for (const auto& a : c.actors()) {
      if (a.spec.behavior_name != "account") continue;
      EXPECT_TRUE(actor_induction(c, a.address, "balance-nonneg").holds);
    }
  };
  enumerate_outcomes(account_scenario(5, 4, 3), 12, options);
  EXPECT_GT(leaves, 1);
}

TEST(Induction, ViolationLocatesReception) {
  const auto r = run(account_scenario(), Policy::fair_fifo());
  const Address acct = r.final_config.actors()[1].address;
  const auto res = actor_induction(r.final_config, acct, "balance-at-least-5");
  EXPECT_FALSE(res.holds);
  EXPECT_FALSE(res.failed_initially);
  ASSERT_TRUE(res.first_violation.has_value());
  const Event* e = r.final_config.trace().event(*res.first_violation);
  ASSERT_NE(e, nullptr);
  EXPECT_TRUE(e->is_reception());
  EXPECT_EQ(e->actor, acct.id());
}

TEST(Induction, InitialFailure) {
  const auto r = run(account_scenario(3, 1, 1), Policy::fair_fifo());
  const auto res = actor_induction(r.final_config, r.final_config.actors()[1].address, "balance-at-least-5");
  EXPECT_TRUE(res.failed_initially);
}

TEST(Induction, CounterTransitions) {
  const auto r = run(unbounded_scenario(), Policy::seeded_random(5));
  const Address counter = r.final_config.actors()[1].address;
  EXPECT_TRUE(actor_induction(r.final_config, counter, "counter-monotone").holds);
  EXPECT_TRUE(actor_induction(r.final_config, counter, "continue-latched").holds);
  EXPECT_TRUE(actor_induction(r.final_config, counter, "count-nonneg").holds);
}

TEST(Induction, UnknownPredicateThrows) {
  const auto r = run(unbounded_scenario(), Policy::fair_fifo());
  EXPECT_THROW(actor_induction(r.final_config, r.final_config.actors()[1].address, "nope"), UnknownPredicate);
}

TEST(Induction, CustomTransitionPredicate) {
  PredicateRegistry preds;
  preds.add_transition("never-changes", [](const Value& a, const Value& b) { return a == b; });
  const auto r = run(account_scenario(), Policy::fair_fifo());
  EXPECT_FALSE(actor_induction(r.final_config, r.final_config.actors()[1].address, "never-changes", preds).holds);
}
