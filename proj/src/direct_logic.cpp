#include "actorsim/direct_logic.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

namespace actorsim::logic {

// Printing.

namespace {

std::string arg_text(const Value& v) { return actorsim::to_string(v); }

std::string arg_text(const PatternArg& a) {
  switch (a.kind) {
    case PatternArg::Kind::Constant:
      return actorsim::to_string(a.constant);
    case PatternArg::Kind::Var:
      return a.var;
    case PatternArg::Kind::BoundVar:
      return "=" + a.var;
  }
  return {};
}

template <typename Arg>
std::string render(const Formula<Arg>& f) {
  using K = typename Formula<Arg>::Kind;
  switch (f.kind()) {
    case K::Atom: {
      if (f.args().empty()) return f.name();
      std::string out = f.name() + "[";
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) out += ", ";
        out += arg_text(f.args()[i]);
      }
      return out + "]";
    }
    case K::Not:
      return "~" + render(f.left());
    case K::And:
      return "(" + render(f.left()) + " & " + render(f.right()) + ")";
    case K::Or:
      return "(" + render(f.left()) + " | " + render(f.right()) + ")";
    case K::Turnstile:
      return "(" + render(f.left()) + " |-{" + f.theory() + "} " + render(f.right()) + ")";
    case K::Implies:
      return "(" + render(f.left()) + " =>{" + f.theory() + "} " + render(f.right()) + ")";
  }
  return {};
}

}  // namespace

std::string to_string(const Proposition& p) { return render(p); }
std::string to_string(const Pattern& p) { return render(p); }

// Matching.

Pattern to_pattern(const Proposition& p) {
  using K = Proposition::Kind;
  switch (p.kind()) {
    case K::Atom: {
      std::vector<PatternArg> args;
      for (const auto& v : p.args()) args.push_back(PatternArg::constant_of(v));
      return Pattern::atom(p.name(), std::move(args));
    }
    case K::Not:
      return Pattern::negation(to_pattern(p.left()));
    case K::And:
      return Pattern::conjunction(to_pattern(p.left()), to_pattern(p.right()));
    case K::Or:
      return Pattern::disjunction(to_pattern(p.left()), to_pattern(p.right()));
    case K::Turnstile:
      return Pattern::turnstile(p.theory(), to_pattern(p.left()), to_pattern(p.right()));
    case K::Implies:
      return Pattern::implies(p.theory(), to_pattern(p.left()), to_pattern(p.right()));
  }
  throw std::logic_error("bad formula kind");
}

namespace {

bool match_into(const Pattern& pat, const Proposition& p, Binding& b) {
  if (static_cast<int>(pat.kind()) != static_cast<int>(p.kind())) return false;
  switch (p.kind()) {
    case Proposition::Kind::Atom: {
      if (pat.name() != p.name() || pat.args().size() != p.args().size()) return false;
      for (std::size_t i = 0; i < p.args().size(); ++i) {
        const auto& a = pat.args()[i];
        const auto& v = p.args()[i];
        if (a.kind == PatternArg::Kind::Constant) {
          if (a.constant != v) return false;
          continue;
        }
        auto it = b.find(a.var);
        if (it != b.end()) {
          if (it->second != v) return false;
        } else if (a.kind == PatternArg::Kind::BoundVar) {
          return false;
        } else {
          b.emplace(a.var, v);
        }
      }
      return true;
    }
    case Proposition::Kind::Not:
      return match_into(pat.left(), p.left(), b);
    default:
      return pat.theory() == p.theory() && match_into(pat.left(), p.left(), b) &&
             match_into(pat.right(), p.right(), b);
  }
}

// Binds the goal rule's variables from what the query pattern pins down.
bool unify_goal(const Pattern& goal, const Pattern& query, const Binding& qb, Binding& gb) {
  if (goal.kind() != query.kind()) return false;
  switch (goal.kind()) {
    case Pattern::Kind::Atom: {
      if (goal.name() != query.name() || goal.args().size() != query.args().size()) return false;
      for (std::size_t i = 0; i < goal.args().size(); ++i) {
        const auto& g = goal.args()[i];
        const auto& q = query.args()[i];
        std::optional<Value> known;
        if (q.kind == PatternArg::Kind::Constant) {
          known = q.constant;
        } else if (auto it = qb.find(q.var); it != qb.end()) {
          known = it->second;
        }
        if (!known) continue;
        if (g.kind == PatternArg::Kind::Constant) {
          if (g.constant != *known) return false;
          continue;
        }
        auto it = gb.find(g.var);
        if (it == gb.end()) {
          gb.emplace(g.var, *known);
        } else if (it->second != *known) {
          return false;
        }
      }
      return true;
    }
    case Pattern::Kind::Not:
      return unify_goal(goal.left(), query.left(), qb, gb);
    default:
      return goal.theory() == query.theory() && unify_goal(goal.left(), query.left(), qb, gb) &&
             unify_goal(goal.right(), query.right(), qb, gb);
  }
}

// Replaces bound variables by constants so equivalent goals share a key.
Pattern resolve(const Pattern& p, const Binding& b) {
  switch (p.kind()) {
    case Pattern::Kind::Atom: {
      std::vector<PatternArg> args;
      for (const auto& a : p.args()) {
        auto it = a.kind == PatternArg::Kind::Constant ? b.end() : b.find(a.var);
        args.push_back(it == b.end() ? a : PatternArg::constant_of(it->second));
      }
      return Pattern::atom(p.name(), std::move(args));
    }
    case Pattern::Kind::Not:
      return Pattern::negation(resolve(p.left(), b));
    case Pattern::Kind::And:
      return Pattern::conjunction(resolve(p.left(), b), resolve(p.right(), b));
    case Pattern::Kind::Or:
      return Pattern::disjunction(resolve(p.left(), b), resolve(p.right(), b));
    case Pattern::Kind::Turnstile:
      return Pattern::turnstile(p.theory(), resolve(p.left(), b), resolve(p.right(), b));
    case Pattern::Kind::Implies:
      return Pattern::implies(p.theory(), resolve(p.left(), b), resolve(p.right(), b));
  }
  throw std::logic_error("bad formula kind");
}

}  // namespace

std::optional<Binding> match(const Pattern& pattern, const Proposition& p, const Binding& binding) {
  Binding b = binding;
  if (!match_into(pattern, p, b)) return std::nullopt;
  return b;
}

UnboundVariable::UnboundVariable(std::string v)
    : std::invalid_argument("unbound variable: " + v), var(std::move(v)) {}

Proposition instantiate(const Pattern& p, const Binding& b) {
  switch (p.kind()) {
    case Pattern::Kind::Atom: {
      std::vector<Value> args;
      for (const auto& a : p.args()) {
        if (a.kind == PatternArg::Kind::Constant) {
          args.push_back(a.constant);
          continue;
        }
        auto it = b.find(a.var);
        if (it == b.end()) throw UnboundVariable(a.var);
        args.push_back(it->second);
      }
      return Proposition::atom(p.name(), std::move(args));
    }
    case Pattern::Kind::Not:
      return Proposition::negation(instantiate(p.left(), b));
    case Pattern::Kind::And:
      return Proposition::conjunction(instantiate(p.left(), b), instantiate(p.right(), b));
    case Pattern::Kind::Or:
      return Proposition::disjunction(instantiate(p.left(), b), instantiate(p.right(), b));
    case Pattern::Kind::Turnstile:
      return Proposition::turnstile(p.theory(), instantiate(p.left(), b), instantiate(p.right(), b));
    case Pattern::Kind::Implies:
      return Proposition::implies(p.theory(), instantiate(p.left(), b), instantiate(p.right(), b));
  }
  throw std::logic_error("bad formula kind");
}

// Errors.

UnknownTheory::UnknownTheory(std::string t) : std::invalid_argument("unknown theory: " + t), id(std::move(t)) {}
DuplicateTheory::DuplicateTheory(std::string t)
    : std::invalid_argument("theory already exists: " + t), id(std::move(t)) {}
PremiseMissing::PremiseMissing(std::string r, std::string p)
    : std::invalid_argument(r + ": premise not asserted: " + p), rule(std::move(r)), premise(std::move(p)) {}
UnknownRule::UnknownRule(std::string r) : std::invalid_argument("unknown rule: " + r), rule(std::move(r)) {}
BadPremises::BadPremises(std::string rule, std::string why) : std::invalid_argument(rule + ": " + why) {}
BudgetExceeded::BudgetExceeded(std::uint64_t budget)
    : std::runtime_error("rule firings exceeded budget of " + std::to_string(budget)) {}

// Store.

Store::Store(std::uint64_t firing_budget) : budget_(firing_budget) {}

void Store::add_theory(const std::string& id) {
  if (id.empty()) throw std::invalid_argument("theory id must not be empty");
  if (!theories_.emplace(id, Theory{}).second) throw DuplicateTheory(id);
}

std::string Store::extend_theory(const std::string& parent, std::string child) {
  get(parent);
  if (child.empty()) {
    child = parent + "'";
    while (theories_.count(child)) child += "'";
  }
  if (theories_.count(child)) throw DuplicateTheory(child);
  Theory t;
  t.parent = parent;
  theories_.emplace(child, std::move(t));
  return child;
}

bool Store::has_theory(std::string_view id) const { return theories_.count(std::string(id)) > 0; }

std::optional<std::string> Store::parent(const std::string& id) const { return get(id).parent; }

const Store::Theory& Store::get(const std::string& id) const {
  auto it = theories_.find(id);
  if (it == theories_.end()) throw UnknownTheory(id);
  return it->second;
}

Store::Theory& Store::get(const std::string& id) {
  auto it = theories_.find(id);
  if (it == theories_.end()) throw UnknownTheory(id);
  return it->second;
}

std::vector<std::string> Store::lineage(const std::string& theory) const {
  std::vector<std::string> out{theory};
  for (auto p = get(theory).parent; p; p = get(*p).parent) out.push_back(*p);
  return out;
}

std::vector<std::string> Store::subtree(const std::string& theory) const {
  std::vector<std::string> out{theory};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& [id, t] : theories_) {
      if (t.parent == out[i]) out.push_back(id);
    }
  }
  return out;
}

bool Store::visible_in(const std::string& theory, const Proposition& p) const {
  for (const auto& t : lineage(theory)) {
    if (get(t).assertions.count(p)) return true;
  }
  return false;
}

std::set<Proposition> Store::visible(const std::string& theory) const {
  std::set<Proposition> out;
  for (const auto& t : lineage(theory)) {
    const auto& a = get(t).assertions;
    out.insert(a.begin(), a.end());
  }
  return out;
}

const std::set<Proposition>& Store::own(const std::string& theory) const { return get(theory).assertions; }

std::vector<std::string> Store::theories() const {
  std::vector<std::string> out;
  for (const auto& [id, t] : theories_) out.push_back(id);
  return out;
}

std::vector<const Store::Rule*> Store::visible_rules(const std::string& theory, bool goals) const {
  std::vector<const Rule*> out;
  for (const auto& t : lineage(theory)) {
    for (const auto& r : goals ? get(t).goals : get(t).forward) out.push_back(&r);
  }
  return out;
}

void Store::count_firing() {
  if (++firings_ > budget_) throw BudgetExceeded(budget_);
}

bool Store::assert_prop(const std::string& theory, const Proposition& p) {
  if (visible_in(theory, p)) return false;
  get(theory).assertions.insert(p);
  cascade(theory, p);
  return true;
}

void Store::cascade(const std::string& theory, const Proposition& p) {
  for (const auto& context : subtree(theory)) {
    for (const Rule* rule : visible_rules(context, false)) {
      if (auto b = match(rule->pattern, p)) fire(*rule, context, *b);
    }
  }
}

void Store::fire(const Rule& rule, const std::string& context, const Binding& binding) {
  if (!fired_.emplace(rule.id, context, binding).second) return;
  count_firing();
  run_action(rule, context, 0, binding);
}

void Store::run_action(const Rule& rule, const std::string& context, std::size_t step,
                       const Binding& binding) {
  if (step >= rule.action.size()) return;
  const ActionStep& s = rule.action[step];
  const std::string& target = s.theory == rule.home ? context : s.theory;
  if (s.kind == ActionStep::Kind::Assert) {
    assert_prop(target, instantiate(s.pattern, binding));
    run_action(rule, context, step + 1, binding);
    return;
  }
  for (const auto& m : query(target, s.pattern, binding)) run_action(rule, context, step + 1, m.binding);
}

void Store::when_assert(const std::string& theory, Pattern pattern, Action action) {
  auto& t = get(theory);
  t.forward.push_back(Rule{next_rule_++, theory, std::move(pattern), std::move(action)});
  const Rule rule = t.forward.back();
  for (const auto& context : subtree(theory)) {
    for (const auto& p : visible(context)) {
      if (auto b = match(rule.pattern, p)) fire(rule, context, *b);
    }
  }
}

void Store::when_goal(const std::string& theory, Pattern pattern, Action action) {
  get(theory).goals.push_back(Rule{next_rule_++, theory, std::move(pattern), std::move(action)});
}

std::vector<Match> Store::query(const std::string& theory, const Pattern& pattern, const Binding& binding) {
  get(theory);
  auto key = std::make_pair(theory, resolve(pattern, binding));
  if (active_goals_.insert(key).second) {
    try {
      auto total = [this] {
        std::size_t n = 0;
        for (const auto& [id, t] : theories_) n += t.assertions.size();
        return n;
      };
      while (true) {
        const auto before = total();
        // Copy: actions may register nothing, but vectors of rules must not
        // be iterated while assertions reshape the store.
        std::vector<Rule> goals;
        for (const Rule* r : visible_rules(theory, true)) goals.push_back(*r);
        for (const auto& rule : goals) {
          Binding gb;
          if (!unify_goal(rule.pattern, pattern, binding, gb)) continue;
          count_firing();
          run_action(rule, theory, 0, gb);
        }
        if (total() == before) break;
      }
    } catch (...) {
      active_goals_.erase(key);
      throw;
    }
    active_goals_.erase(key);
  }
  std::vector<Match> out;
  for (const auto& p : visible(theory)) {
    if (auto b = match(pattern, p, binding)) out.push_back(Match{p, std::move(*b)});
  }
  return out;
}

bool Store::subargument(const std::string& theory, const Proposition& hypothesis, const Proposition& goal) {
  get(theory);
  const Store snapshot = *this;
  bool proved = false;
  try {
    std::string scratch;
    do {
      scratch = theory + "#sub" + std::to_string(next_scratch_++);
    } while (theories_.count(scratch));
    extend_theory(theory, scratch);
    assert_prop(scratch, hypothesis);
    proved = !query(scratch, to_pattern(goal)).empty();
    if (!proved) {
      saturate(scratch, goal.depth());
      proved = !query(scratch, to_pattern(goal)).empty();
    }
  } catch (...) {
    const auto counter = next_scratch_;
    *this = snapshot;
    next_scratch_ = counter;
    throw;
  }
  const auto counter = next_scratch_;
  *this = snapshot;
  next_scratch_ = counter;
  if (proved) assert_prop(theory, Proposition::turnstile(theory, hypothesis, goal));
  return proved;
}

namespace {

using K = Proposition::Kind;

void require_arity(std::string_view rule, const std::vector<Proposition>& premises, std::size_t n) {
  if (premises.size() != n) {
    throw BadPremises(std::string(rule), "expects " + std::to_string(n) + " premises, got " +
                                             std::to_string(premises.size()));
  }
}

void require_kind(std::string_view rule, const Proposition& p, K kind, const char* what) {
  if (p.kind() != kind) throw BadPremises(std::string(rule), to_string(p) + " is not " + what);
}

}  // namespace

std::vector<Proposition> Store::apply_rule(const std::string& theory, std::string_view rule,
                                           const std::vector<Proposition>& premises) {
  const auto scopes = lineage(theory);
  auto in_scope = [&](const std::string& t) { return std::find(scopes.begin(), scopes.end(), t) != scopes.end(); };
  auto require_turnstile = [&](const Proposition& p) {
    require_kind(rule, p, K::Turnstile, "a turnstile");
    if (!in_scope(p.theory())) {
      throw BadPremises(std::string(rule), "turnstile theory " + p.theory() + " is not visible from " + theory);
    }
  };

  std::vector<Proposition> conclusions;
  if (rule == "and_intro") {
    require_arity(rule, premises, 2);
    conclusions.push_back(Proposition::conjunction(premises[0], premises[1]));
  } else if (rule == "and_elim") {
    require_arity(rule, premises, 1);
    require_kind(rule, premises[0], K::And, "a conjunction");
    conclusions = {premises[0].left(), premises[0].right()};
  } else if (rule == "or_intro") {
    require_arity(rule, premises, 2);
    conclusions.push_back(Proposition::disjunction(premises[0], premises[1]));
  } else if (rule == "or_elim") {
    require_arity(rule, premises, 2);
    require_kind(rule, premises[0], K::Not, "a negation");
    require_kind(rule, premises[1], K::Or, "a disjunction");
    const auto& denied = premises[0].left();
    if (premises[1].left() == denied) {
      conclusions.push_back(premises[1].right());
    } else if (premises[1].right() == denied) {
      conclusions.push_back(premises[1].left());
    } else {
      throw BadPremises(std::string(rule), "negated proposition is not a disjunct");
    }
  } else if (rule == "or_cases") {
    require_arity(rule, premises, 3);
    require_kind(rule, premises[0], K::Or, "a disjunction");
    require_turnstile(premises[1]);
    require_turnstile(premises[2]);
    if (premises[1].left() != premises[0].left() || premises[2].left() != premises[0].right()) {
      throw BadPremises(std::string(rule), "turnstile hypotheses do not match the disjuncts");
    }
    conclusions.push_back(Proposition::disjunction(premises[1].right(), premises[2].right()));
  } else if (rule == "chain") {
    require_arity(rule, premises, 2);
    require_turnstile(premises[1]);
    if (premises[1].left() != premises[0]) {
      throw BadPremises(std::string(rule), "turnstile hypothesis does not match the premise");
    }
    conclusions.push_back(premises[1].right());
  } else if (rule == "implies_intro") {
    require_arity(rule, premises, 2);
    require_turnstile(premises[0]);
    require_turnstile(premises[1]);
    const auto& fwd = premises[0];
    const auto& contra = premises[1];
    if (contra.theory() != fwd.theory() || contra.left() != Proposition::negation(fwd.right()) ||
        contra.right() != Proposition::negation(fwd.left())) {
      throw BadPremises(std::string(rule), "second premise is not the contrapositive of the first");
    }
    conclusions.push_back(Proposition::implies(fwd.theory(), fwd.left(), fwd.right()));
  } else if (rule == "implies_elim") {
    require_arity(rule, premises, 1);
    require_kind(rule, premises[0], K::Implies, "an implication");
    const auto& p = premises[0];
    if (!in_scope(p.theory())) {
      throw BadPremises(std::string(rule), "implication theory " + p.theory() + " is not visible from " + theory);
    }
    conclusions = {Proposition::turnstile(p.theory(), p.left(), p.right()),
                   Proposition::turnstile(p.theory(), Proposition::negation(p.right()),
                                          Proposition::negation(p.left()))};
  } else {
    throw UnknownRule(std::string(rule));
  }

  for (const auto& p : premises) {
    if (!visible_in(theory, p)) throw PremiseMissing(std::string(rule), to_string(p));
  }
  for (const auto& c : conclusions) assert_prop(theory, c);
  return conclusions;
}

void Store::saturate(const std::string& theory, int max_depth, std::optional<std::uint64_t> shuffle_seed) {
  if (max_depth < 0) throw std::invalid_argument("depth budget must be non-negative");
  const auto scopes = lineage(theory);
  auto in_scope = [&](const std::string& t) { return std::find(scopes.begin(), scopes.end(), t) != scopes.end(); };

  for (std::uint64_t round = 0;; ++round) {
    const auto known = visible(theory);
    std::set<Proposition> fresh;
    auto offer = [&](const Proposition& p) {
      if (p.depth() <= max_depth && !known.count(p)) fresh.insert(p);
    };

    std::vector<Proposition> small;
    std::map<Proposition, std::vector<Proposition>> turnstiles_by_hypothesis;
    for (const auto& p : known) {
      if (p.depth() < max_depth) small.push_back(p);
      if (p.kind() == K::Turnstile && in_scope(p.theory())) turnstiles_by_hypothesis[p.left()].push_back(p);
    }
    for (const auto& a : small) {
      for (const auto& b : small) {
        offer(Proposition::conjunction(a, b));
        offer(Proposition::disjunction(a, b));
      }
    }
    for (const auto& p : known) {
      switch (p.kind()) {
        case K::And:
          offer(p.left());
          offer(p.right());
          break;
        case K::Or: {
          if (known.count(Proposition::negation(p.left()))) offer(p.right());
          if (known.count(Proposition::negation(p.right()))) offer(p.left());
          auto l = turnstiles_by_hypothesis.find(p.left());
          auto r = turnstiles_by_hypothesis.find(p.right());
          if (l != turnstiles_by_hypothesis.end() && r != turnstiles_by_hypothesis.end()) {
            for (const auto& tl : l->second) {
              for (const auto& tr : r->second) offer(Proposition::disjunction(tl.right(), tr.right()));
            }
          }
          break;
        }
        case K::Turnstile:
          if (!in_scope(p.theory())) break;
          if (known.count(p.left())) offer(p.right());
          if (known.count(Proposition::turnstile(p.theory(), Proposition::negation(p.right()),
                                                 Proposition::negation(p.left())))) {
            offer(Proposition::implies(p.theory(), p.left(), p.right()));
          }
          break;
        case K::Implies:
          if (!in_scope(p.theory())) break;
          offer(Proposition::turnstile(p.theory(), p.left(), p.right()));
          offer(Proposition::turnstile(p.theory(), Proposition::negation(p.right()),
                                       Proposition::negation(p.left())));
          break;
        default:
          break;
      }
    }
    if (fresh.empty()) return;
    std::vector<Proposition> order(fresh.begin(), fresh.end());
    if (shuffle_seed) {
      std::mt19937_64 rng(*shuffle_seed + round);
      std::shuffle(order.begin(), order.end(), rng);
    }
    for (const auto& p : order) assert_prop(theory, p);
  }
}

// Parsing.

ScriptError::ScriptError(std::size_t l, const std::string& message)
    : std::invalid_argument("line " + std::to_string(l) + ": " + message), line(l) {}

namespace {

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-' || c == '.';
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, bool pattern) : text_(text), pattern_(pattern) {}

  template <typename Arg>
  Formula<Arg> parse_all() {
    auto f = formula<Arg>();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_)) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("bad proposition '" + std::string(text_) + "': " + why);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(std::string_view token) {
    skip();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  std::string name() {
    skip();
    const auto start = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string braced_theory() {
    if (!eat("{")) fail("expected '{theory}'");
    std::string t = name();
    if (!eat("}")) fail("expected '}'");
    return t;
  }

  template <typename Arg>
  Formula<Arg> formula() {
    skip();
    if (eat("~")) return Formula<Arg>::negation(formula<Arg>());
    if (eat("(")) {
      auto left = formula<Arg>();
      Formula<Arg> result = left;
      if (eat("&")) {
        result = Formula<Arg>::conjunction(left, formula<Arg>());
      } else if (eat("|-")) {
        auto t = braced_theory();
        result = Formula<Arg>::turnstile(t, left, formula<Arg>());
      } else if (eat("|")) {
        result = Formula<Arg>::disjunction(left, formula<Arg>());
      } else if (eat("=>")) {
        auto t = braced_theory();
        result = Formula<Arg>::implies(t, left, formula<Arg>());
      } else if (!eat(")")) {
        fail("expected a connective or ')'");
      } else {
        return left;
      }
      if (!eat(")")) fail("expected ')'");
      return result;
    }
    std::string n = name();
    std::vector<Arg> args;
    if (pos_ < text_.size() && (text_[pos_] == '[' || text_[pos_] == '(')) {
      const char close = text_[pos_] == '[' ? ']' : ')';
      ++pos_;
      if (!eat(std::string_view(&close, 1))) {
        do {
          args.push_back(arg<Arg>());
        } while (eat(","));
        if (!eat(std::string_view(&close, 1))) fail(std::string("expected '") + close + "'");
      }
    }
    return Formula<Arg>::atom(std::move(n), std::move(args));
  }

  template <typename Arg>
  Arg arg() {
    skip();
    if (pos_ >= text_.size()) fail("expected an argument");
    const char c = text_[pos_];
    if (c == '"') {
      const auto start = pos_++;
      while (pos_ < text_.size() && text_[pos_] != '"') pos_ += text_[pos_] == '\\' ? 2 : 1;
      if (pos_ >= text_.size()) fail("unterminated string");
      ++pos_;
      std::string raw(text_.substr(start + 1, pos_ - start - 2));
      return make_arg<Arg>(Value::string(std::move(raw)));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      const auto start = pos_++;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      try {
        return make_arg<Arg>(Value::integer(std::stoll(std::string(text_.substr(start, pos_ - start)))));
      } catch (const std::exception&) {
        fail("bad integer");
      }
    }
    if (c == '=') {
      if (!pattern_) fail("'=' variables are only allowed in patterns");
      ++pos_;
      return make_var<Arg>(name(), true);
    }
    std::string n = name();
    if (pattern_ && std::islower(static_cast<unsigned char>(n[0]))) return make_var<Arg>(std::move(n), false);
    return make_arg<Arg>(Value::symbol(std::move(n)));
  }

  template <typename Arg>
  static Arg make_arg(Value v) {
    if constexpr (std::is_same_v<Arg, Value>) {
      return v;
    } else {
      return PatternArg::constant_of(std::move(v));
    }
  }

  template <typename Arg>
  Arg make_var(std::string n, bool bound) {
    if constexpr (std::is_same_v<Arg, Value>) {
      fail("variables are only allowed in patterns");
    } else {
      return bound ? PatternArg::bound_of(std::move(n)) : PatternArg::var_of(std::move(n));
    }
  }

  std::string_view text_;
  bool pattern_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits on `sep` outside brackets.
std::vector<std::string_view> split_top(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (depth == 0 && s.substr(i, sep.size()) == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + sep.size();
      i = start - 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  for (auto piece : split_top(trim(s), " ")) {
    if (!piece.empty()) out.push_back(piece);
  }
  return out;
}

// Splits "word rest" into the first word and the remainder.
std::pair<std::string_view, std::string_view> head(std::string_view s) {
  s = trim(s);
  const auto sp = s.find_first_of(" \t");
  if (sp == std::string_view::npos) return {s, {}};
  return {s.substr(0, sp), trim(s.substr(sp))};
}

}  // namespace

Proposition parse_proposition(std::string_view text) {
  return FormulaParser(trim(text), false).parse_all<Value>();
}

Pattern parse_pattern(std::string_view text) { return FormulaParser(trim(text), true).parse_all<PatternArg>(); }

namespace {

void ensure_theory(Store& store, const std::string& id) {
  if (!store.has_theory(id)) store.add_theory(id);
}

Action parse_action(Store& store, const std::vector<std::string_view>& steps, std::size_t first) {
  Action action;
  for (std::size_t i = first; i < steps.size(); ++i) {
    auto [verb, rest] = head(steps[i]);
    auto [theory, body] = head(rest);
    if (theory.empty() || body.empty()) throw std::invalid_argument("incomplete action step '" + std::string(steps[i]) + "'");
    ensure_theory(store, std::string(theory));
    if (verb == "assert") {
      action.push_back(ActionStep{ActionStep::Kind::Assert, std::string(theory), parse_pattern(body)});
    } else if (verb == "query") {
      action.push_back(ActionStep{ActionStep::Kind::Query, std::string(theory), parse_pattern(body)});
    } else {
      throw std::invalid_argument("action steps are assert or query, got '" + std::string(verb) + "'");
    }
  }
  if (action.empty()) throw std::invalid_argument("rule has no action");
  return action;
}

void run_line(std::string_view line, std::ostream& out, Store& store) {
  auto [command, rest] = head(line);
  auto [theory_view, body] = head(rest);
  const std::string theory(theory_view);
  if (theory.empty()) throw std::invalid_argument("missing theory");

  if (command == "extend") {
    auto words = split_words(body);
    if (words.size() != 2 || words[0] != "as") throw std::invalid_argument("usage: extend T as T2");
    ensure_theory(store, theory);
    store.extend_theory(theory, std::string(words[1]));
    return;
  }
  ensure_theory(store, theory);
  if (command == "assert") {
    store.assert_prop(theory, parse_proposition(body));
  } else if (command == "query") {
    const auto matches = store.query(theory, parse_pattern(body));
    if (matches.empty()) out << "no matches\n";
    for (const auto& m : matches) out << to_string(m.proposition) << "\n";
  } else if (command == "when-assert" || command == "when-goal") {
    auto steps = split_top(body, "=>");
    if (steps.size() < 2) throw std::invalid_argument("usage: " + std::string(command) + " T PATTERN => ACTION");
    auto pattern = parse_pattern(steps[0]);
    auto action = parse_action(store, steps, 1);
    if (command == "when-assert") {
      store.when_assert(theory, std::move(pattern), std::move(action));
    } else {
      store.when_goal(theory, std::move(pattern), std::move(action));
    }
  } else if (command == "rule") {
    const auto [name, rest] = head(body);
    if (name.empty()) throw std::invalid_argument("usage: rule T NAME PREMISES...");
    // Premises are separated by ';' or, when there is none, by spaces.
    auto pieces = split_top(rest, ";");
    if (pieces.size() == 1) pieces = split_words(rest);
    std::vector<Proposition> premises;
    for (auto piece : pieces) {
      if (!piece.empty()) premises.push_back(parse_proposition(piece));
    }
    try {
      for (const auto& c : store.apply_rule(theory, name, premises)) out << "derived " << to_string(c) << "\n";
    } catch (const PremiseMissing& e) {
      out << "rejected: " << e.what() << "\n";
    } catch (const BadPremises& e) {
      out << "rejected: " << e.what() << "\n";
    }
  } else if (command == "saturate") {
    int depth = 0;
    try {
      depth = std::stoi(std::string(trim(body)));
    } catch (const std::exception&) {
      throw std::invalid_argument("usage: saturate T DEPTH");
    }
    store.saturate(theory, depth);
  } else if (command == "subargument") {
    auto parts = split_top(body, "=>");
    if (parts.size() != 2) throw std::invalid_argument("usage: subargument T P => Q");
    const auto hyp = parse_proposition(parts[0]);
    const auto goal = parse_proposition(parts[1]);
    if (store.subargument(theory, hyp, goal)) {
      out << "proved " << to_string(Proposition::turnstile(theory, hyp, goal)) << "\n";
    } else {
      out << "not proved\n";
    }
  } else {
    throw std::invalid_argument("unknown command '" + std::string(command) + "'");
  }
}

}  // namespace

void run_script(std::string_view script, std::ostream& out, Store& store) {
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= script.size()) {
    auto end = script.find('\n', start);
    if (end == std::string_view::npos) end = script.size();
    std::string_view line = script.substr(start, end - start);
    ++number;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      run_line(line, out, store);
    } catch (const BudgetExceeded& e) {
      throw ScriptError(number, e.what());
    } catch (const std::invalid_argument& e) {
      throw ScriptError(number, e.what());
    }
  }
}

void run_script(std::string_view script, std::ostream& out) {
  Store store;
  run_script(script, out, store);
}

std::string_view socrates_forward_script() {
  return "# forward chaining\n"
         "assert t Human[Socrates]\n"
         "when-assert t Human[x] => assert t Mortal[x]\n"
         "query t Mortal[Socrates]\n";
}

std::string_view socrates_backward_script() {
  return "# backward chaining\n"
         "assert t Human[Socrates]\n"
         "when-goal t Mortal[x] => query t Human[=x] => assert t Mortal[x]\n"
         "query t Mortal[Socrates]\n";
}

}  // namespace actorsim::logic
