#pragma once

#include "actorsim/kernel.hpp"
#include "actorsim/scheduler.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actorsim {

void register_lambda_behaviors(BehaviorRegistry& registry);

/// λ-term. Literals (integers) are an extension used for ground readout.
class Term {
 public:
  enum class Kind { Identifier, Application, Lambda, Literal };

  static Term identifier(std::string name);
  static Term application(Term op, Term arg);
  static Term lambda(std::string formal, Term body);
  static Term literal(Value v);

  Kind kind() const noexcept { return node_->kind; }
  /// Identifier name or Lambda formal.
  const std::string& name() const { return node_->name; }
  const Value& literal_value() const { return node_->literal; }
  const Term& op() const { return *node_->a; }
  const Term& arg() const { return *node_->b; }
  const Term& body() const { return *node_->a; }

  /// Node count: identifiers and literals 1, applications and lambdas 1 + children.
  std::size_t size() const noexcept { return node_->size; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    Value literal;
    std::shared_ptr<const Term> a;
    std::shared_ptr<const Term> b;
    std::size_t size = 1;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Fully parenthesized form, e.g. "(\x.(x x))". Parses back to the same term.
std::string to_string(const Term& t);

struct TermParseError : std::invalid_argument {
  TermParseError(std::string message, std::size_t position);
  std::size_t position;
};

/// Grammar: term := '\' ident '.' term | app ; app := atom+ ;
/// atom := ident | integer | '(' term ')'. 'λ' may replace '\'.
Term parse_term(std::string_view text);

/// Environment specification; lookups resolve to the innermost binding.
/// Every environment built by the kernel sits on a prelude binding `succ`.
struct EnvSpec {
  struct Binding {
    std::string name;
    Value value;
  };
  std::vector<Binding> bindings;  // outermost first

  static EnvSpec empty() { return {}; }
  EnvSpec bind(std::string name, Value value) const;
};

/// One actor per syntax node answering [eval, env] requests.
Address build_term_actor(Configuration& config, const Term& term);
/// Environment actors for `env` above the prelude; returns the innermost.
Address build_env(Configuration& config, const EnvSpec& env);

struct LambdaResult {
  enum class Status { Value, Threw, BudgetExceeded };
  Status status = Status::Value;
  /// The value, the thrown exception, or void. Function values read out as
  /// the symbol `<function>`.
  Value value;
  /// β-reductions: receptions of apply messages by closures.
  std::uint64_t beta = 0;
  std::uint64_t steps = 0;

  friend bool operator==(const LambdaResult&, const LambdaResult&) = default;
};

std::string to_string(const LambdaResult& r);

inline constexpr std::uint64_t kDefaultLambdaBudget = 200000;

/// Evaluates `term` in `env` on the actor network under the fair scheduler.
/// `budget` bounds deliveries.
LambdaResult eval_term(const Term& term, const EnvSpec& env = {},
                       std::uint64_t budget = kDefaultLambdaBudget);

/// System that evaluates `term` in the prelude environment; its harness
/// customer receives the result.
System lambda_system(const Term& term);

enum class Strategy { Applicative, Normal };

/// Substitution evaluator (weak, capture-avoiding). `budget` bounds β steps.
LambdaResult reference_eval(const Term& term, Strategy strategy = Strategy::Normal,
                            std::uint64_t budget = 20000);

/// Applies a function result to ground literals 1000, 1001, ... (at most
/// `max_args`) until the result is not a function.
struct Readout {
  LambdaResult result;
  int applied = 0;

  friend bool operator==(const Readout&, const Readout&) = default;
};

Readout actor_readout(const Term& term, int max_args = 3);
Readout reference_readout(const Term& term, Strategy strategy, int max_args = 3);

/// Capture-avoiding substitution t[x := s].
Term substitute(const Term& t, const std::string& x, const Term& s);

// Term corpora.

/// Every closed term of size <= max_size over `vars` names.
std::vector<Term> enumerate_closed_terms(std::size_t max_size, const std::vector<std::string>& vars);

/// Church numeral n: \f.\x.f (f ... x).
Term church(int n);
/// \m.\n.\f.\x.m f (n f x)
Term church_plus();
/// (c succ 0): reads a Church numeral as an integer.
Term church_to_int(const Term& c);

}  // namespace actorsim
