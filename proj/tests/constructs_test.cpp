#include "actorsim/constructs.hpp"
#include "actorsim/laws.hpp"
#include "actorsim/scheduler.hpp"

#include <gtest/gtest.h>

using namespace actorsim;

namespace {

Value num(std::int64_t n) { return Value::integer(n); }
Value sym(const char* s) { return Value::symbol(s); }
Value block(const char* name, std::int64_t a) { return Value::list({sym(name), num(a)}); }

using OutputSet = std::set<std::vector<Value>>;

// Every schedule must halt within `depth` and satisfy the laws.
OutputSet all_outcomes(const System& system, int depth) {
  EnumerateOptions o;
  o.on_leaf = [](const Configuration& c, bool) { EXPECT_TRUE(check_all(c.trace()).ok()); };
  const auto set = enumerate_outcomes(system, depth, o);
  EXPECT_FALSE(set.has_frontier()) << system.name << " at depth " << depth;
  return set.halting_outputs();
}

void drain(Configuration& c) {
  while (!c.quiescent()) c.deliver_step(c.in_transit().front().msg_id);
}

}  // namespace

TEST(Blocks, Evaluate) {
  EXPECT_EQ(eval_block(block("square", 7)), num(49));
  EXPECT_EQ(eval_block(block("inc", -1)), num(0));
  EXPECT_EQ(eval_block(block("double", 21)), num(42));
  EXPECT_EQ(eval_block(block("const", 3)), num(3));
  EXPECT_EQ(eval_block(Value::list({sym("add"), num(2), num(40)})), num(42));
}

TEST(Blocks, FailuresThrow) {
  EXPECT_THROW(eval_block(block("fail", 1)), ActorThrow);
  EXPECT_THROW(eval_block(block("nope", 1)), ActorThrow);
  EXPECT_THROW(eval_block(Value::list({sym("square"), sym("x")})), ActorThrow);
  try {
    eval_block(block("nope", 1));
  } catch (const ActorThrow& t) {
    EXPECT_EQ(t.value.selector(), "UnknownBlock");
  }
}

TEST(Account, AllSchedulesAgree) {
  EXPECT_EQ(all_outcomes(account_scenario(), 12), (OutputSet{{num(2)}}));
  EXPECT_EQ(all_outcomes(account_scenario(10, 3, 3), 12), (OutputSet{{num(4)}}));
}

TEST(Account, DepositAndUnknownSelector) {
  Configuration c;
  const Address h = c.create_actor(customer_behavior());
  const Address k = c.create_actor(customer_behavior());
  const Address acct = c.create_actor(account_behavior(1));
  c.send(acct, Value::list({sym("deposit"), num(4)}), h);
  c.send(acct, sym("audit"), k);
  drain(c);
  EXPECT_EQ(c.actor(acct).spec.state, num(5));
  EXPECT_EQ(c.actor(k).spec.state.at(0), sym("threw"));
  EXPECT_EQ(c.actor(k).spec.state.at(1).selector(), "NotUnderstood");
}

TEST(Counter, FairRunStopsAfterOneGo) {
  const auto r = run(unbounded_scenario(), Policy::fair_fifo());
  EXPECT_TRUE(r.halted);
  EXPECT_EQ(r.outputs, std::vector<Value>{num(1)});
  const Address counter = r.final_config.actors()[1].address;
  EXPECT_EQ(r.final_config.actor(counter).spec.state, Value::list({num(1), Value::boolean(false)}));
}

TEST(Counter, RandomRunsAlwaysHalt) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = run(unbounded_scenario(), Policy::seeded_random(seed));
    ASSERT_TRUE(r.halted) << seed;
    ASSERT_EQ(r.outputs.size(), 1u);
    EXPECT_GE(r.outputs[0].as_integer(), 0);
  }
}

TEST(Latch, WaitersReleasedOnEverySchedule) {
  EXPECT_EQ(all_outcomes(latch_scenario(), 12), (OutputSet{{Value{}, Value{}, Value{}}}));
}

TEST(Latch, HoldsUntilRelease) {
  Configuration c;
  const Address w = c.create_actor(customer_behavior());
  const Address l = c.create_actor(latch_behavior());
  c.send(l, sym("wait"), w);
  drain(c);
  EXPECT_EQ(c.actor(w).spec.state, sym("pending"));
  c.send(l, sym("releaseAll"));
  drain(c);
  EXPECT_TRUE(c.actor(w).spec.state.is_void());
  EXPECT_TRUE(actor_induction(c, l, "latch-drained").holds);
}

TEST(Gcd, SyncAndAsyncResults) {
  EXPECT_EQ(all_outcomes(gcd_scenario(), 20), (OutputSet{{num(9), num(5), num(25)}}));
}

TEST(Future, ReadersAndDerivativeOnEverySchedule) {
  EXPECT_EQ(all_outcomes(future_scenario(), 20), (OutputSet{{num(16), num(16), num(19)}}));
}

TEST(Future, ResolvesOnce) {
  const auto r = run(future_scenario(), Policy::seeded_random(4));
  for (const auto& a : r.final_config.actors()) {
    if (a.spec.behavior_name == "future") {
      EXPECT_TRUE(actor_induction(r.final_config, a.address, "future-resolves-once").holds);
    }
  }
}

TEST(Future, FailedBlockReachesReaders) {
  Configuration c;
  const Address h = c.create_actor(customer_behavior());
  const Address f = future_create(c, block("fail", 0));
  c.send(f, sym("get"), h);
  drain(c);
  EXPECT_EQ(c.actor(h).spec.state.at(0), sym("threw"));
  EXPECT_EQ(c.actor(h).spec.state.at(1).selector(), "BlockFailed");
}

TEST(Future, PostponeIsLazy) {
  Configuration c;
  const Address f = postpone_create(c, block("square", 6));
  drain(c);
  const auto before = c.actors().size();
  EXPECT_EQ(c.actor(f).spec.state.at(0), sym("dormant"));
  const Address h = c.create_actor(customer_behavior());
  c.send(f, sym("get"), h);
  drain(c);
  EXPECT_GT(c.actors().size(), before + 1);
  EXPECT_EQ(c.actor(h).spec.state, num(36));
}

TEST(Channel, RendezvousPairsPutWithGet) {
  EXPECT_EQ(all_outcomes(channel_scenario(1, 1), 10), (OutputSet{{Value{}, num(5)}}));
  const auto two = all_outcomes(channel_scenario(2, 2), 16);
  for (const auto& o : two) {
    ASSERT_EQ(o.size(), 4u);
    EXPECT_TRUE(o[0].is_void());
    EXPECT_TRUE(o[1].is_void());
    EXPECT_EQ((std::set<Value>{o[2], o[3]}), (std::set<Value>{num(5), num(6)}));
  }
  EXPECT_EQ(two.size(), 2u);
}

TEST(Channel, UnmatchedPutWaits) {
  const auto r = run(channel_scenario(2, 1), Policy::fair_fifo());
  EXPECT_TRUE(r.halted);
  EXPECT_EQ(std::count(r.outputs.begin(), r.outputs.end(), sym("pending")), 1);
}

TEST(Real, EveryBitStringReachable) {
  std::set<Value> seen;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto r = run(real_scenario(3), Policy::seeded_random(seed));
    ASSERT_TRUE(r.halted);
    ASSERT_EQ(r.outputs.size(), 1u);
    ASSERT_EQ(r.outputs[0].as_list().size(), 3u);
    for (const auto& b : r.outputs[0].as_list()) EXPECT_TRUE(b == num(0) || b == num(1));
    seen.insert(r.outputs[0]);
  }
  EXPECT_EQ(seen.size(), 8u);
}

TEST(Ndtm, HaltingTapesAreFinite) {
  const auto set = enumerate_outcomes(ndtm_scenario(), 12);
  EXPECT_TRUE(set.has_frontier());
  OutputSet expected;
  for (int k = 0; k < 11; ++k) expected.insert({Value::string(std::string(static_cast<std::size_t>(k), '1'))});
  EXPECT_EQ(set.halting_outputs(), expected);
}

TEST(Csp, FairRunTerminates) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto r = run(csp_scenario(), Policy::seeded_random(seed));
    ASSERT_TRUE(r.halted) << seed;
    EXPECT_GE(r.outputs.at(0).as_integer(), 0);
  }
  EXPECT_TRUE(run(csp_scenario(), Policy::fair_fifo()).halted);
}
