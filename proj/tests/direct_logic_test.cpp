#include "actorsim/direct_logic.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace actorsim;
using namespace actorsim::logic;

namespace {

Proposition prop(const char* text) { return parse_proposition(text); }
Pattern pat(const char* text) { return parse_pattern(text); }

Action assert_action(const std::string& theory, const char* pattern) {
  return {ActionStep{ActionStep::Kind::Assert, theory, pat(pattern)}};
}

std::set<std::string> atom_names(const Proposition& p) {
  if (p.kind() == Proposition::Kind::Atom) return {p.name()};
  std::set<std::string> out = atom_names(p.left());
  if (p.kind() != Proposition::Kind::Not) {
    const auto right = atom_names(p.right());
    out.insert(right.begin(), right.end());
  }
  return out;
}

std::string script_output(std::string_view script) {
  std::ostringstream out;
  run_script(script, out);
  return out.str();
}

}  // namespace

TEST(Syntax, ParseAndPrint) {
  for (const char* text : {"Human[Socrates]", "~P", "(P & Q)", "(P | ~Q)", "(P |-{t} Q)", "(P =>{t} Q)",
                           "Edge[a1, 2]"}) {
    EXPECT_EQ(to_string(prop(text)), text);
  }
  EXPECT_EQ(prop("Human(Socrates)"), prop("Human[Socrates]"));
  EXPECT_THROW(parse_proposition("(P & Q"), std::invalid_argument);
}

TEST(Pattern, VariablesBindAndBoundVariablesMustMatch) {
  const auto b = match(pat("Parent[x, y]"), prop("Parent[Ann, Bob]"));
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->at("x"), Value::symbol("Ann"));
  EXPECT_FALSE(match(pat("Same[x, x]"), prop("Same[A, B]")).has_value());
  EXPECT_TRUE(match(pat("Same[x, x]"), prop("Same[A, A]")).has_value());
  EXPECT_FALSE(match(pat("Human[=x]"), prop("Human[Socrates]")).has_value());
  EXPECT_TRUE(match(pat("Human[=x]"), prop("Human[Socrates]"), {{"x", Value::symbol("Socrates")}}).has_value());
  EXPECT_EQ(instantiate(pat("Mortal[x]"), *b), prop("Mortal[Ann]"));
  EXPECT_THROW(instantiate(pat("Mortal[z]"), *b), UnboundVariable);
}

TEST(Store, ForwardRuleDerives) {
  Store s;
  s.add_theory("t");
  s.when_assert("t", pat("Human[x]"), assert_action("t", "Mortal[x]"));
  EXPECT_TRUE(s.assert_prop("t", prop("Human[Socrates]")));
  EXPECT_TRUE(s.visible("t").count(prop("Mortal[Socrates]")));
  const auto firings = s.firings();
  EXPECT_FALSE(s.assert_prop("t", prop("Human[Socrates]")));
  EXPECT_EQ(s.firings(), firings);
}

TEST(Store, RulesFireRetroactively) {
  Store s;
  s.add_theory("t");
  s.assert_prop("t", prop("Human[Socrates]"));
  s.when_assert("t", pat("Human[x]"), assert_action("t", "Mortal[x]"));
  EXPECT_TRUE(s.visible("t").count(prop("Mortal[Socrates]")));
}

TEST(Store, BoundVariableWithoutBindingNeverFires) {
  Store s;
  s.add_theory("t");
  s.when_assert("t", pat("Human[=x]"), assert_action("t", "Mortal[Nobody]"));
  s.assert_prop("t", prop("Human[Socrates]"));
  EXPECT_EQ(s.visible("t").size(), 1u);
}

TEST(Store, RuleOrderDoesNotMatter) {
  auto build = [](bool flip) {
    Store s;
    s.add_theory("t");
    auto r1 = [&] { s.when_assert("t", pat("A[x]"), assert_action("t", "B[x]")); };
    auto r2 = [&] { s.when_assert("t", pat("A[x]"), assert_action("t", "C[x]")); };
    if (flip) {
      r2();
      r1();
    } else {
      r1();
      r2();
    }
    s.assert_prop("t", prop("A[k]"));
    return s.visible("t");
  };
  EXPECT_EQ(build(false), build(true));
  EXPECT_EQ(build(false).size(), 3u);
}

TEST(Store, ExtensionInheritsOneWay) {
  Store s;
  s.add_theory("t");
  const auto child = s.extend_theory("t");
  const auto grandchild = s.extend_theory(child, "t3");
  s.assert_prop("t", prop("P"));
  s.assert_prop(child, prop("Q"));
  EXPECT_TRUE(s.visible(child).count(prop("P")));
  EXPECT_TRUE(s.visible(grandchild).count(prop("P")));
  EXPECT_TRUE(s.visible(grandchild).count(prop("Q")));
  EXPECT_FALSE(s.visible("t").count(prop("Q")));
  EXPECT_EQ(s.parent(grandchild), child);
  EXPECT_THROW(s.add_theory("t"), DuplicateTheory);
  EXPECT_THROW(s.extend_theory("nope"), UnknownTheory);
}

TEST(Store, ParentRuleFiresInChild) {
  Store s;
  s.add_theory("t");
  s.when_assert("t", pat("Human[x]"), assert_action("t", "Mortal[x]"));
  const auto child = s.extend_theory("t");
  s.assert_prop(child, prop("Human[Plato]"));
  EXPECT_TRUE(s.own(child).count(prop("Mortal[Plato]")));
  EXPECT_FALSE(s.visible("t").count(prop("Mortal[Plato]")));
}

TEST(Query, EmptyTheoryAndInheritedMatch) {
  Store s;
  s.add_theory("t");
  EXPECT_TRUE(s.query("t", pat("Human[x]")).empty());
  s.assert_prop("t", prop("Human[Socrates]"));
  const auto child = s.extend_theory("t");
  const auto found = s.query(child, pat("Human[x]"));
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].binding.at("x"), Value::symbol("Socrates"));
}

TEST(Query, GoalRulesChainBackward) {
  Store s;
  s.add_theory("t");
  s.assert_prop("t", prop("Human[Socrates]"));
  s.when_goal("t", pat("Mortal[x]"),
              {ActionStep{ActionStep::Kind::Query, "t", pat("Human[=x]")},
               ActionStep{ActionStep::Kind::Assert, "t", pat("Mortal[x]")}});
  const auto found = s.query("t", pat("Mortal[Socrates]"));
  ASSERT_EQ(found.size(), 1u);
  EXPECT_TRUE(s.own("t").count(prop("Mortal[Socrates]")));
  EXPECT_TRUE(s.query("t", pat("Mortal[Plato]")).empty());
}

TEST(Rules, AndIntroAndElim) {
  Store s;
  s.add_theory("t");
  s.assert_prop("t", prop("P"));
  s.assert_prop("t", prop("Q"));
  EXPECT_EQ(s.apply_rule("t", "and_intro", {prop("P"), prop("Q")}), std::vector<Proposition>{prop("(P & Q)")});
  s.assert_prop("t", prop("(R & S)"));
  s.apply_rule("t", "and_elim", {prop("(R & S)")});
  EXPECT_TRUE(s.visible("t").count(prop("R")));
  EXPECT_TRUE(s.visible("t").count(prop("S")));
}

TEST(Rules, OrIntroNeedsBothDisjuncts) {
  Store s;
  s.add_theory("t");
  s.assert_prop("t", prop("P"));
  EXPECT_THROW(s.apply_rule("t", "or_intro", {prop("P"), prop("Q")}), PremiseMissing);
  EXPECT_EQ(s.visible("t").size(), 1u);
  EXPECT_THROW(s.apply_rule("t", "no_such_rule", {prop("P")}), UnknownRule);
}

TEST(Rules, OrElimChainAndCases) {
  Store s;
  s.add_theory("t");
  for (const char* p : {"~P", "(P | Q)", "A", "(A |-{t} B)", "(C | D)", "(C |-{t} E)", "(D |-{t} F)"}) {
    s.assert_prop("t", prop(p));
  }
  EXPECT_EQ(s.apply_rule("t", "or_elim", {prop("~P"), prop("(P | Q)")}), std::vector<Proposition>{prop("Q")});
  EXPECT_EQ(s.apply_rule("t", "chain", {prop("A"), prop("(A |-{t} B)")}), std::vector<Proposition>{prop("B")});
  EXPECT_EQ(s.apply_rule("t", "or_cases", {prop("(C | D)"), prop("(C |-{t} E)"), prop("(D |-{t} F)")}),
            std::vector<Proposition>{prop("(E | F)")});
  EXPECT_THROW(s.apply_rule("t", "chain", {prop("A"), prop("(A |-{u} B)")}), std::invalid_argument);
}

TEST(Rules, ImpliesIntroAndElim) {
  Store s;
  s.add_theory("t");
  s.assert_prop("t", prop("(P |-{t} Q)"));
  EXPECT_THROW(s.apply_rule("t", "implies_intro", {prop("(P |-{t} Q)"), prop("(~Q |-{t} ~P)")}), PremiseMissing);
  s.assert_prop("t", prop("(~Q |-{t} ~P)"));
  EXPECT_EQ(s.apply_rule("t", "implies_intro", {prop("(P |-{t} Q)"), prop("(~Q |-{t} ~P)")}),
            std::vector<Proposition>{prop("(P =>{t} Q)")});
  Store u;
  u.add_theory("t");
  u.assert_prop("t", prop("(P =>{t} Q)"));
  u.apply_rule("t", "implies_elim", {prop("(P =>{t} Q)")});
  EXPECT_TRUE(u.visible("t").count(prop("(P |-{t} Q)")));
  EXPECT_TRUE(u.visible("t").count(prop("(~Q |-{t} ~P)")));
}

TEST(Subargument, ProvesAndIsolates) {
  Store s;
  s.add_theory("t");
  s.when_assert("t", pat("Human[x]"), assert_action("t", "Mortal[x]"));
  EXPECT_TRUE(s.subargument("t", prop("Human[Plato]"), prop("Mortal[Plato]")));
  EXPECT_TRUE(s.own("t").count(prop("(Human[Plato] |-{t} Mortal[Plato])")));
  EXPECT_FALSE(s.visible("t").count(prop("Human[Plato]")));
  EXPECT_FALSE(s.visible("t").count(prop("Mortal[Plato]")));
  EXPECT_EQ(s.theories(), std::vector<std::string>{"t"});
}

TEST(Subargument, UsesInferenceSchemas) {
  Store s;
  s.add_theory("t");
  EXPECT_TRUE(s.subargument("t", prop("(A & B)"), prop("B")));
  EXPECT_TRUE(s.own("t").count(prop("((A & B) |-{t} B)")));
  EXPECT_EQ(s.visible("t").size(), 1u);
}

TEST(Subargument, FailureLeavesStoreUnchanged) {
  Store s;
  s.add_theory("t");
  s.assert_prop("t", prop("P"));
  const auto before = s.visible("t");
  EXPECT_FALSE(s.subargument("t", prop("Q"), prop("R")));
  EXPECT_EQ(s.visible("t"), before);
  EXPECT_EQ(s.theories(), std::vector<std::string>{"t"});
}

TEST(Saturate, SmallClosure) {
  Store s;
  s.add_theory("t");
  s.assert_prop("t", prop("P"));
  s.saturate("t", 2);
  EXPECT_EQ(s.visible("t"), (std::set<Proposition>{prop("P"), prop("(P & P)"), prop("(P | P)")}));
  Store empty;
  empty.add_theory("t");
  empty.saturate("t", 4);
  EXPECT_TRUE(empty.visible("t").empty());
}

TEST(Saturate, NoExFalso) {
  for (int depth = 0; depth <= 3; ++depth) {
    Store s;
    s.add_theory("t");
    s.assert_prop("t", prop("P"));
    s.assert_prop("t", prop("~P"));
    s.saturate("t", depth);
    for (const auto& p : s.visible("t")) {
      EXPECT_EQ(atom_names(p), std::set<std::string>{"P"}) << to_string(p);
      EXPECT_LE(p.depth(), std::max(depth, 2));
    }
  }
}

TEST(Saturate, OrderIndependent) {
  auto closure = [](std::optional<std::uint64_t> seed) {
    Store s;
    s.add_theory("t");
    for (const char* p : {"A", "~A", "(A | B)"}) s.assert_prop("t", prop(p));
    s.saturate("t", 3, seed);
    return s.visible("t");
  };
  const auto reference = closure(std::nullopt);
  EXPECT_TRUE(reference.count(prop("B")));
  for (std::uint64_t seed : {1u, 2u, 3u}) EXPECT_EQ(closure(seed), reference);
}

TEST(Isolation, RandomizedScripts) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 30; ++round) {
    Store s;
    s.add_theory("t0");
    std::vector<std::string> names{"t0"};
    std::map<std::string, std::set<Proposition>> direct;
    for (int op = 0; op < 30; ++op) {
      const auto& theory = names[rng() % names.size()];
      if (rng() % 4 == 0) {
        names.push_back(s.extend_theory(theory));
      } else {
        const auto p = Proposition::atom("A" + std::to_string(rng() % 6));
        s.assert_prop(theory, p);
        direct[theory].insert(p);
      }
    }
    // Oracle: visible = direct assertions along the ancestor chain.
    for (const auto& t : names) {
      std::set<Proposition> expected;
      for (std::optional<std::string> a = t; a; a = s.parent(*a)) {
        expected.insert(direct[*a].begin(), direct[*a].end());
      }
      EXPECT_EQ(s.visible(t), expected) << t;
    }
  }
}

TEST(Script, SocratesBothDirections) {
  EXPECT_NE(script_output(socrates_forward_script()).find("Mortal[Socrates]"), std::string::npos);
  EXPECT_NE(script_output(socrates_backward_script()).find("Mortal[Socrates]"), std::string::npos);
}

TEST(Script, CommandsAndErrors) {
  const std::string out = script_output(
      "# comment\n"
      "assert t P\n"
      "rule t or_intro P ; Q\n"
      "rule t and_intro P ; P\n"
      "extend t as u\n"
      "assert u Q\n"
      "query t Q\n"
      "query u Q\n"
      "subargument t R => R\n");
  EXPECT_NE(out.find("rejected:"), std::string::npos);
  EXPECT_NE(out.find("derived (P & P)"), std::string::npos);
  EXPECT_NE(out.find("no matches"), std::string::npos);
  EXPECT_NE(out.find("proved (R |-{t} R)"), std::string::npos);
  try {
    script_output("assert t P\nfrobnicate t\n");
    FAIL() << "expected ScriptError";
  } catch (const ScriptError& e) {
    EXPECT_EQ(e.line, 2u);
  }
}
