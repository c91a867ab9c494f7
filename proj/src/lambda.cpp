#include "actorsim/lambda.hpp"

#include <cctype>
#include <functional>
#include <optional>
#include <set>

namespace actorsim {

namespace {

Value sym(std::string name) { return Value::symbol(std::move(name)); }
Value addr(Address a) { return Value::address(a); }

const Value& function_marker() {
  static const Value v = Value::symbol("<function>");
  return v;
}

// Term actors. States: lam-ident [name], lam-lit [value],
// lam-abs [formal, body], lam-app [op, arg].

void lam_ident(BehaviorContext& ctx) {
  const Value& env = ctx.payload().at(1);
  ctx.send(env.as_address(), Value::list({sym("lookup"), ctx.state().at(0)}), ctx.customer());
}

void lam_lit(BehaviorContext& ctx) { ctx.reply(ctx.state().at(0)); }

void lam_abs(BehaviorContext& ctx) {
  const Value& env = ctx.payload().at(1);
  const Address c =
      ctx.create("lam-closure", Value::list({ctx.state().at(0), ctx.state().at(1), env}));
  ctx.reply(addr(c));
}

void lam_app(BehaviorContext& ctx) {
  if (!ctx.customer()) return;
  const Value& env = ctx.payload().at(1);
  const Address k = ctx.create("lam-k-operator",
                               Value::list({ctx.state().at(1), env, addr(*ctx.customer())}));
  ctx.send(ctx.state().at(0).as_address(), Value::list({sym("eval"), env}), k);
}

// Receives the operator's value. State: [arg, env, customer].
void lam_k_operator(BehaviorContext& ctx) {
  if (!is_response(ctx.kind())) return;
  const Address k = ctx.state().at(2).as_address();
  ctx.halt();
  if (ctx.kind() == MessageKind::Threw) {
    ctx.respond_threw(k, ctx.payload());
    return;
  }
  const Address next = ctx.create("lam-k-operand", Value::list({ctx.payload(), ctx.state().at(2)}));
  ctx.send(ctx.state().at(0).as_address(), Value::list({sym("eval"), ctx.state().at(1)}), next);
}

// Receives the operand's value and applies. State: [function, customer].
void lam_k_operand(BehaviorContext& ctx) {
  if (!is_response(ctx.kind())) return;
  const Address k = ctx.state().at(1).as_address();
  const Value& f = ctx.state().at(0);
  ctx.halt();
  if (ctx.kind() == MessageKind::Threw) {
    ctx.respond_threw(k, ctx.payload());
  } else if (!f.is_address()) {
    ctx.respond_threw(k, Value::list({sym("NotAFunction"), f}));
  } else {
    ctx.send(f.as_address(), Value::list({sym("apply"), ctx.payload()}), k);
  }
}

// State: [formal, body, env]. Each apply reception is one β-reduction.
void lam_closure(BehaviorContext& ctx) {
  if (ctx.payload().selector() != "apply") {
    throw ActorThrow{Value::list({sym("NotUnderstood"), ctx.payload()})};
  }
  const Address e =
      ctx.create("env-bind", Value::list({ctx.state().at(0), ctx.payload().at(1), ctx.state().at(2)}));
  ctx.send(ctx.state().at(1).as_address(), Value::list({sym("eval"), addr(e)}), ctx.customer());
}

void lam_prim_succ(BehaviorContext& ctx) {
  const Value& v = ctx.payload().at(1);
  if (!v.is_integer()) throw ActorThrow{sym("NotAnInteger")};
  ctx.reply(Value::integer(v.as_integer() + 1));
}

void env_empty(BehaviorContext& ctx) {
  throw ActorThrow{Value::list({sym("UnboundIdentifier"), ctx.payload().at(1)})};
}

// State: [name, value, parent].
void env_bind(BehaviorContext& ctx) {
  const Value& name = ctx.payload().at(1);
  if (name == ctx.state().at(0)) {
    ctx.reply(ctx.state().at(1));
  } else {
    ctx.send(ctx.state().at(2).as_address(), ctx.payload(), ctx.customer());
  }
}

}  // namespace

void register_lambda_behaviors(BehaviorRegistry& registry) {
  registry.add("lam-ident", lam_ident);
  registry.add("lam-lit", lam_lit);
  registry.add("lam-abs", lam_abs);
  registry.add("lam-app", lam_app);
  registry.add("lam-k-operator", lam_k_operator);
  registry.add("lam-k-operand", lam_k_operand);
  registry.add("lam-closure", lam_closure);
  registry.add("lam-prim-succ", lam_prim_succ);
  registry.add("env-empty", env_empty);
  registry.add("env-bind", env_bind);
}

// Term.

Term Term::identifier(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::Identifier, std::move(name), {}, nullptr, nullptr, 1}));
}

Term Term::application(Term op, Term arg) {
  const auto size = 1 + op.size() + arg.size();
  return Term(std::make_shared<const Node>(Node{Kind::Application, {}, {},
                                                std::make_shared<const Term>(std::move(op)),
                                                std::make_shared<const Term>(std::move(arg)), size}));
}

Term Term::lambda(std::string formal, Term body) {
  const auto size = 1 + body.size();
  return Term(std::make_shared<const Node>(Node{Kind::Lambda, std::move(formal), {},
                                                std::make_shared<const Term>(std::move(body)), nullptr,
                                                size}));
}

Term Term::literal(Value v) {
  return Term(std::make_shared<const Node>(Node{Kind::Literal, {}, std::move(v), nullptr, nullptr, 1}));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Identifier:
      return a.name() == b.name();
    case Term::Kind::Literal:
      return a.literal_value() == b.literal_value();
    case Term::Kind::Lambda:
      return a.name() == b.name() && a.body() == b.body();
    case Term::Kind::Application:
      return a.op() == b.op() && a.arg() == b.arg();
  }
  return false;
}

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Identifier:
      return t.name();
    case Term::Kind::Literal:
      return to_string(t.literal_value());
    case Term::Kind::Lambda:
      return "(\\" + t.name() + "." + to_string(t.body()) + ")";
    case Term::Kind::Application:
      return "(" + to_string(t.op()) + " " + to_string(t.arg()) + ")";
  }
  return {};
}

// Parser.

TermParseError::TermParseError(std::string message, std::size_t pos)
    : std::invalid_argument(message + " at position " + std::to_string(pos)), position(pos) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Term parse() {
    Term t = term();
    skip_space();
    if (pos_ != text_.size()) throw TermParseError("unexpected input", pos_);
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_lambda() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '\\') return true;
    return text_.substr(pos_, 2) == "\xCE\xBB";  // λ
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string identifier() {
    skip_space();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) throw TermParseError("expected identifier", pos_);
    const auto start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Term term() {
    if (at_lambda()) {
      pos_ += text_[pos_] == '\\' ? 1 : 2;
      std::string formal = identifier();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '.') throw TermParseError("expected '.'", pos_);
      ++pos_;
      return Term::lambda(std::move(formal), term());
    }
    auto t = atom();
    if (!t) throw TermParseError("expected term", pos_);
    Term acc = *t;
    while (true) {
      if (at_lambda()) return Term::application(std::move(acc), term());
      auto next = atom();
      if (!next) return acc;
      acc = Term::application(std::move(acc), std::move(*next));
    }
  }

  std::optional<Term> atom() {
    skip_space();
    if (pos_ >= text_.size()) return std::nullopt;
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Term t = term();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw TermParseError("expected ')'", pos_);
      ++pos_;
      return t;
    }
    const bool negative = c == '-' && pos_ + 1 < text_.size() &&
                          std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
    if (std::isdigit(static_cast<unsigned char>(c)) || negative) {
      const auto start = pos_;
      if (negative) ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      try {
        return Term::literal(Value::integer(std::stoll(std::string(text_.substr(start, pos_ - start)))));
      } catch (const std::out_of_range&) {
        throw TermParseError("integer out of range", start);
      }
    }
    if (ident_start(c)) return Term::identifier(identifier());
    return std::nullopt;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Term parse_term(std::string_view text) { return Parser(text).parse(); }

// Actor evaluation.

EnvSpec EnvSpec::bind(std::string name, Value value) const {
  EnvSpec out = *this;
  out.bindings.push_back(Binding{std::move(name), std::move(value)});
  return out;
}

Address build_term_actor(Configuration& config, const Term& term) {
  switch (term.kind()) {
    case Term::Kind::Identifier:
      return config.create_actor({"lam-ident", Value::list({sym(term.name())})});
    case Term::Kind::Literal:
      return config.create_actor({"lam-lit", Value::list({term.literal_value()})});
    case Term::Kind::Lambda: {
      const Address body = build_term_actor(config, term.body());
      return config.create_actor({"lam-abs", Value::list({sym(term.name()), addr(body)})});
    }
    case Term::Kind::Application: {
      const Address op = build_term_actor(config, term.op());
      const Address arg = build_term_actor(config, term.arg());
      return config.create_actor({"lam-app", Value::list({addr(op), addr(arg)})});
    }
  }
  throw std::logic_error("bad term kind");
}

Address build_env(Configuration& config, const EnvSpec& env) {
  Address e = config.create_actor({"env-empty", Value{}});
  const Address succ = config.create_actor({"lam-prim-succ", Value{}});
  e = config.create_actor({"env-bind", Value::list({sym("succ"), addr(succ), addr(e)})});
  for (const auto& b : env.bindings) {
    e = config.create_actor({"env-bind", Value::list({sym(b.name), b.value, addr(e)})});
  }
  return e;
}

namespace {

System make_system(const Term& term, const EnvSpec& env) {
  Configuration c;
  const Address h = c.create_actor({"customer", sym("pending")});
  const Address e = build_env(c, env);
  const Address root = build_term_actor(c, term);
  c.send(root, Value::list({sym("eval"), addr(e)}), h);
  return System{"lambda", std::move(c)};
}

}  // namespace

System lambda_system(const Term& term) { return make_system(term, {}); }

LambdaResult eval_term(const Term& term, const EnvSpec& env, std::uint64_t budget) {
  if (budget == 0) throw std::invalid_argument("budget must be positive");
  auto run_result = run(make_system(term, env), Policy::fair_fifo(), budget);
  LambdaResult r;
  r.steps = run_result.steps;
  for (const auto& a : run_result.final_config.actors()) {
    if (a.spec.behavior_name == "lam-closure") r.beta += a.reception_count;
  }
  const Value& out = run_result.outputs.at(0);
  if (!run_result.halted || out.is_symbol("pending")) {
    r.status = LambdaResult::Status::BudgetExceeded;
  } else if (out.is_list() && out.size() == 2 && out.at(0).is_symbol("threw")) {
    r.status = LambdaResult::Status::Threw;
    r.value = out.at(1);
  } else {
    r.value = out.is_address() ? function_marker() : out;
  }
  return r;
}

std::string to_string(const LambdaResult& r) {
  switch (r.status) {
    case LambdaResult::Status::Value:
      return to_string(r.value) + " (beta " + std::to_string(r.beta) + ")";
    case LambdaResult::Status::Threw:
      return "threw " + to_string(r.value);
    case LambdaResult::Status::BudgetExceeded:
      return "budget exceeded";
  }
  return {};
}

// Substitution oracle.

namespace {

void free_vars(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Identifier:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case Term::Kind::Literal:
      return;
    case Term::Kind::Lambda: {
      const bool fresh = bound.insert(t.name()).second;
      free_vars(t.body(), bound, out);
      if (fresh) bound.erase(t.name());
      return;
    }
    case Term::Kind::Application:
      free_vars(t.op(), bound, out);
      free_vars(t.arg(), bound, out);
      return;
  }
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bound, out;
  free_vars(t, bound, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

}  // namespace

Term substitute(const Term& t, const std::string& x, const Term& s) {
  switch (t.kind()) {
    case Term::Kind::Identifier:
      return t.name() == x ? s : t;
    case Term::Kind::Literal:
      return t;
    case Term::Kind::Application:
      return Term::application(substitute(t.op(), x, s), substitute(t.arg(), x, s));
    case Term::Kind::Lambda: {
      if (t.name() == x) return t;
      const auto fv_s = free_vars(s);
      if (!fv_s.count(t.name())) return Term::lambda(t.name(), substitute(t.body(), x, s));
      auto avoid = fv_s;
      for (const auto& v : free_vars(t.body())) avoid.insert(v);
      avoid.insert(x);
      const std::string y = fresh_name(t.name(), avoid);
      const Term renamed = substitute(t.body(), t.name(), Term::identifier(y));
      return Term::lambda(y, substitute(renamed, x, s));
    }
  }
  throw std::logic_error("bad term kind");
}

namespace {

struct OracleStop {
  LambdaResult::Status status;
  Value value;
};

struct Oracle {
  Strategy strategy;
  std::uint64_t budget;
  std::uint64_t beta = 0;

  static bool is_succ(const Term& t) {
    return t.kind() == Term::Kind::Identifier && t.name() == "succ";
  }

  Term eval(Term t) {
    while (true) {
      switch (t.kind()) {
        case Term::Kind::Literal:
        case Term::Kind::Lambda:
          return t;
        case Term::Kind::Identifier:
          if (is_succ(t)) return t;
          throw OracleStop{LambdaResult::Status::Threw,
                           Value::list({Value::symbol("UnboundIdentifier"), Value::symbol(t.name())})};
        case Term::Kind::Application:
          break;
      }
      const Term f = eval(t.op());
      std::optional<Term> a;
      if (strategy == Strategy::Applicative) a = eval(t.arg());
      if (f.kind() == Term::Kind::Lambda) {
        if (beta >= budget) throw OracleStop{LambdaResult::Status::BudgetExceeded, Value{}};
        ++beta;
        t = substitute(f.body(), f.name(), a ? *a : t.arg());
        continue;
      }
      if (is_succ(f)) {
        const Term v = a ? *a : eval(t.arg());
        if (v.kind() != Term::Kind::Literal || !v.literal_value().is_integer()) {
          throw OracleStop{LambdaResult::Status::Threw, Value::symbol("NotAnInteger")};
        }
        return Term::literal(Value::integer(v.literal_value().as_integer() + 1));
      }
      throw OracleStop{LambdaResult::Status::Threw,
                       Value::list({Value::symbol("NotAFunction"), f.literal_value()})};
    }
  }
};

Term apply_ground(const Term& term, int n) {
  Term t = term;
  for (int i = 0; i < n; ++i) t = Term::application(t, Term::literal(Value::integer(1000 + i)));
  return t;
}

template <typename Eval>
Readout readout(const Term& term, int max_args, Eval eval) {
  Readout out;
  for (int i = 0;; ++i) {
    out.result = eval(apply_ground(term, i));
    out.applied = i;
    if (i >= max_args || out.result.status != LambdaResult::Status::Value ||
        out.result.value != function_marker()) {
      return out;
    }
  }
}

}  // namespace

LambdaResult reference_eval(const Term& term, Strategy strategy, std::uint64_t budget) {
  if (budget == 0) throw std::invalid_argument("budget must be positive");
  Oracle oracle{strategy, budget};
  LambdaResult r;
  try {
    const Term v = oracle.eval(term);
    r.value = v.kind() == Term::Kind::Literal ? v.literal_value() : function_marker();
  } catch (const OracleStop& stop) {
    r.status = stop.status;
    r.value = stop.value;
  }
  r.beta = oracle.beta;
  return r;
}

Readout actor_readout(const Term& term, int max_args) {
  return readout(term, max_args, [](const Term& t) { return eval_term(t); });
}

Readout reference_readout(const Term& term, Strategy strategy, int max_args) {
  return readout(term, max_args, [strategy](const Term& t) { return reference_eval(t, strategy); });
}

// Corpora.

namespace {

void generate(std::size_t size, std::vector<std::string>& scope, const std::vector<std::string>& vars,
              const std::function<void(const Term&)>& emit) {
  if (size == 1) {
    std::set<std::string> seen;
    for (const auto& v : scope) {
      if (seen.insert(v).second) emit(Term::identifier(v));
    }
    return;
  }
  for (const auto& x : vars) {
    scope.push_back(x);
    generate(size - 1, scope, vars, [&](const Term& body) { emit(Term::lambda(x, body)); });
    scope.pop_back();
  }
  for (std::size_t left = 1; left + 1 < size; ++left) {
    std::vector<Term> lefts;
    generate(left, scope, vars, [&](const Term& t) { lefts.push_back(t); });
    if (lefts.empty()) continue;
    generate(size - 1 - left, scope, vars, [&](const Term& r) {
      for (const auto& l : lefts) emit(Term::application(l, r));
    });
  }
}

}  // namespace

std::vector<Term> enumerate_closed_terms(std::size_t max_size, const std::vector<std::string>& vars) {
  std::vector<Term> out;
  std::vector<std::string> scope;
  for (std::size_t n = 1; n <= max_size; ++n) {
    generate(n, scope, vars, [&](const Term& t) { out.push_back(t); });
  }
  return out;
}

Term church(int n) {
  Term body = Term::identifier("x");
  for (int i = 0; i < n; ++i) body = Term::application(Term::identifier("f"), body);
  return Term::lambda("f", Term::lambda("x", body));
}

Term church_plus() { return parse_term("\\m.\\n.\\f.\\x.m f (n f x)"); }

Term church_to_int(const Term& c) {
  return Term::application(Term::application(c, Term::identifier("succ")),
                           Term::literal(Value::integer(0)));
}

}  // namespace actorsim
