#pragma once

#include "actorsim/value.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actorsim::logic {

/// Argument of a pattern atom: a constant, a variable that binds on first
/// occurrence, or `=x`, which must match an existing binding.
struct PatternArg {
  enum class Kind { Constant, Var, BoundVar };
  Kind kind = Kind::Constant;
  Value constant;
  std::string var;

  static PatternArg constant_of(Value v) { return {Kind::Constant, std::move(v), {}}; }
  static PatternArg var_of(std::string n) { return {Kind::Var, {}, std::move(n)}; }
  static PatternArg bound_of(std::string n) { return {Kind::BoundVar, {}, std::move(n)}; }

  friend bool operator==(const PatternArg&, const PatternArg&) = default;
  friend auto operator<=>(const PatternArg&, const PatternArg&) = default;
};

/// Proposition tree, parameterized by the atom argument type: Value for
/// ground propositions, PatternArg for patterns.
template <typename Arg>
class Formula {
 public:
  enum class Kind { Atom, Not, And, Or, Turnstile, Implies };

  static Formula atom(std::string name, std::vector<Arg> args = {}) {
    return Formula(Node{Kind::Atom, std::move(name), std::move(args), {}, nullptr, nullptr, 1});
  }
  static Formula negation(Formula p) {
    const auto d = p.depth() + 1;
    return Formula(Node{Kind::Not, {}, {}, {}, share(std::move(p)), nullptr, d});
  }
  static Formula conjunction(Formula p, Formula q) { return binary(Kind::And, {}, std::move(p), std::move(q)); }
  static Formula disjunction(Formula p, Formula q) { return binary(Kind::Or, {}, std::move(p), std::move(q)); }
  /// (p ⊢theory q)
  static Formula turnstile(std::string theory, Formula p, Formula q) {
    return binary(Kind::Turnstile, std::move(theory), std::move(p), std::move(q));
  }
  /// (p ⇒theory q)
  static Formula implies(std::string theory, Formula p, Formula q) {
    return binary(Kind::Implies, std::move(theory), std::move(p), std::move(q));
  }

  Kind kind() const noexcept { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const std::vector<Arg>& args() const { return node_->args; }
  const std::string& theory() const { return node_->theory; }
  /// Operand of Not; left side otherwise.
  const Formula& left() const { return *node_->left; }
  const Formula& right() const { return *node_->right; }
  /// Atoms have depth 1; each connective adds one.
  int depth() const noexcept { return node_->depth; }

  friend bool operator==(const Formula& a, const Formula& b) { return (a <=> b) == 0; }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    if (auto c = a.name() <=> b.name(); c != 0) return c;
    if (auto c = a.theory() <=> b.theory(); c != 0) return c;
    if (auto c = compare_args(a.args(), b.args()); c != 0) return c;
    if (a.node_->left) {
      if (auto c = a.left() <=> b.left(); c != 0) return c;
    }
    if (a.node_->right) return a.right() <=> b.right();
    return std::strong_ordering::equal;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Arg> args;
    std::string theory;
    std::shared_ptr<const Formula> left;
    std::shared_ptr<const Formula> right;
    int depth;
  };

  explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static std::shared_ptr<const Formula> share(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

  static Formula binary(Kind k, std::string theory, Formula p, Formula q) {
    const auto d = std::max(p.depth(), q.depth()) + 1;
    return Formula(Node{k, {}, {}, std::move(theory), share(std::move(p)), share(std::move(q)), d});
  }

  static std::strong_ordering compare_args(const std::vector<Arg>& a, const std::vector<Arg>& b) {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

  std::shared_ptr<const Node> node_;
};

using Proposition = Formula<Value>;
using Pattern = Formula<PatternArg>;
using Binding = std::map<std::string, Value>;

std::string to_string(const Proposition& p);
std::string to_string(const Pattern& p);

/// Ground pattern with the same shape as `p`.
Pattern to_pattern(const Proposition& p);

/// Extends `binding` so that `pattern` matches `p`, or nullopt.
std::optional<Binding> match(const Pattern& pattern, const Proposition& p, const Binding& binding = {});

struct UnboundVariable : std::invalid_argument {
  explicit UnboundVariable(std::string var);
  std::string var;
};

/// Replaces variables by their bindings. Throws UnboundVariable.
Proposition instantiate(const Pattern& pattern, const Binding& binding);

struct UnknownTheory : std::invalid_argument {
  explicit UnknownTheory(std::string id);
  std::string id;
};

struct DuplicateTheory : std::invalid_argument {
  explicit DuplicateTheory(std::string id);
  std::string id;
};

struct PremiseMissing : std::invalid_argument {
  PremiseMissing(std::string rule, std::string premise);
  std::string rule;
  std::string premise;
};

struct UnknownRule : std::invalid_argument {
  explicit UnknownRule(std::string rule);
  std::string rule;
};

struct BadPremises : std::invalid_argument {
  BadPremises(std::string rule, std::string why);
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(std::uint64_t budget);
};

/// One step of a rule action. A step aimed at the rule's own theory runs
/// in whichever theory the rule fired in.
struct ActionStep {
  enum class Kind { Assert, Query };
  Kind kind;
  std::string theory;
  Pattern pattern;
};

using Action = std::vector<ActionStep>;

struct Match {
  Proposition proposition;
  Binding binding;
};

inline constexpr std::uint64_t kDefaultFiringBudget = 100000;

/// Theories with one-way inheritance, forward rules (`when` an assertion
/// matches) and goal rules (`when` a matching goal is queried).
class Store {
 public:
  explicit Store(std::uint64_t firing_budget = kDefaultFiringBudget);

  /// Creates a root theory. Throws DuplicateTheory.
  void add_theory(const std::string& id);
  /// Creates a child of `parent`; the name is generated when empty.
  std::string extend_theory(const std::string& parent, std::string child = {});
  bool has_theory(std::string_view id) const;
  std::optional<std::string> parent(const std::string& id) const;

  /// Adds `p` to `theory` unless already visible there, then fires matching
  /// forward rules in the theory and its descendants. Returns whether `p`
  /// was new.
  bool assert_prop(const std::string& theory, const Proposition& p);

  /// Registers a forward rule; it also fires on assertions already visible.
  void when_assert(const std::string& theory, Pattern pattern, Action action);
  /// Registers a goal rule, triggered by queries whose pattern unifies.
  void when_goal(const std::string& theory, Pattern pattern, Action action);

  /// Runs goal rules to a fixpoint, then matches visible assertions.
  /// Results are sorted by proposition.
  std::vector<Match> query(const std::string& theory, const Pattern& pattern, const Binding& binding = {});

  /// Hypothetical reasoning in a scratch extension. On success asserts
  /// (hypothesis ⊢theory goal) in `theory`; the scratch theory never survives.
  bool subargument(const std::string& theory, const Proposition& hypothesis, const Proposition& goal);

  /// Applies one inference schema to visible premises and asserts the
  /// conclusions. Rules: and_intro, and_elim, or_intro, or_elim, or_cases,
  /// chain, implies_intro, implies_elim.
  std::vector<Proposition> apply_rule(const std::string& theory, std::string_view rule,
                                      const std::vector<Proposition>& premises);

  /// Applies every schema to every visible premise combination whose
  /// conclusion has depth <= max_depth, until nothing new appears.
  /// `shuffle_seed` permutes the order conclusions are asserted.
  void saturate(const std::string& theory, int max_depth, std::optional<std::uint64_t> shuffle_seed = {});

  /// Own and inherited assertions.
  std::set<Proposition> visible(const std::string& theory) const;
  const std::set<Proposition>& own(const std::string& theory) const;
  std::vector<std::string> theories() const;

  std::uint64_t firings() const noexcept { return firings_; }

 private:
  struct Rule {
    std::uint64_t id;
    std::string home;
    Pattern pattern;
    Action action;
  };
  struct Theory {
    std::optional<std::string> parent;
    std::set<Proposition> assertions;
    std::vector<Rule> forward;
    std::vector<Rule> goals;
  };

  const Theory& get(const std::string& id) const;
  Theory& get(const std::string& id);
  bool visible_in(const std::string& theory, const Proposition& p) const;
  std::vector<std::string> lineage(const std::string& theory) const;  // self first
  std::vector<std::string> subtree(const std::string& theory) const;
  std::vector<const Rule*> visible_rules(const std::string& theory, bool goals) const;

  void fire(const Rule& rule, const std::string& context, const Binding& binding);
  void run_action(const Rule& rule, const std::string& context, std::size_t step, const Binding& binding);
  void cascade(const std::string& theory, const Proposition& p);
  void count_firing();

  std::map<std::string, Theory> theories_;
  std::set<std::tuple<std::uint64_t, std::string, Binding>> fired_;
  std::set<std::pair<std::string, Pattern>> active_goals_;
  std::uint64_t next_rule_ = 0;
  std::uint64_t next_scratch_ = 0;
  std::uint64_t firings_ = 0;
  std::uint64_t budget_;
};

struct ScriptError : std::invalid_argument {
  ScriptError(std::size_t line, const std::string& message);
  std::size_t line;
};

/// Ground proposition: `Name`, `Name[a, b]`, `Name(a, b)`, `~P`, `(P & Q)`,
/// `(P | Q)`, `(P |-{t} Q)`, `(P =>{t} Q)`.
Proposition parse_proposition(std::string_view text);
/// As above; lowercase arguments are variables and `=x` is a bound variable.
Pattern parse_pattern(std::string_view text);

/// Executes a script line by line, printing query results to `out`:
///   assert T P | query T PAT | extend T as T2 | saturate T N
///   when-assert T PAT => assert T2 P2
///   when-goal T PAT => query T PAT2 => assert T P
///   rule T NAME P1 ; P2 ; ...      subargument T P => Q      # comment
/// Theories named in a script are created on first use. Throws ScriptError.
void run_script(std::string_view script, std::ostream& out, Store& store);
void run_script(std::string_view script, std::ostream& out);

/// Forward and backward forms of the Socrates example.
std::string_view socrates_forward_script();
std::string_view socrates_backward_script();

}  // namespace actorsim::logic
