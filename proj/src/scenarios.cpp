#include "actorsim/scenarios.hpp"

#include "actorsim/direct_logic.hpp"
#include "actorsim/lambda.hpp"

#include <cctype>
#include <set>

namespace actorsim {

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog = {
      {"account", "two concurrent withdrawals from a shared account, then getBalance", false},
      {"unbounded", "counter that always halts with an unbounded output", false},
      {"latch", "two waiters held until releaseAll", false},
      {"gcd", "dispatch_sync and dispatch_async on a queue", false},
      {"future", "eager future with buffered readers and a derivative", false},
      {"channel", "rendezvous channel pairing puts with gets", false},
      {"real", "lazy stream of nondeterministic bits", false},
      {"same-fringe", "lazy comparison of two tree fringes", false},
      {"lambda", "lambda term evaluated by term, environment and closure actors", false},
      {"ndtm", "nondeterministic machine: print 1 or halt", false},
      {"csp-xyz", "X stops Z while Y and Z loop on a guard", false},
      {"socrates-forward", "forward chaining: Human[Socrates] gives Mortal[Socrates]", true},
      {"socrates-backward", "backward chaining: goal Mortal[Socrates]", true},
  };
  return catalog;
}

const ScenarioInfo* find_scenario(std::string_view name) {
  for (const auto& s : scenario_catalog()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

UnknownScenario::UnknownScenario(const std::string& name) : std::invalid_argument("unknown scenario: " + name) {}

namespace {

class Params {
 public:
  Params(const std::string& scenario, const ScenarioParams& params, std::set<std::string> allowed)
      : scenario_(scenario), params_(params) {
    for (const auto& [k, v] : params) {
      if (!allowed.count(k)) throw std::invalid_argument(scenario + ": unknown parameter '" + k + "'");
    }
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    try {
      std::size_t used = 0;
      const auto v = std::stoll(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument(scenario_ + ": parameter '" + key + "' must be an integer");
    }
  }

  const std::string* text(const std::string& key) const {
    auto it = params_.find(key);
    return it == params_.end() ? nullptr : &it->second;
  }

 private:
  std::string scenario_;
  const ScenarioParams& params_;
};

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  Tree parse() {
    Tree t = tree();
    skip();
    if (pos_ != text_.size()) fail("unexpected input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("bad tree '" + std::string(text_) + "': " + why + " at position " +
                                std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Tree tree() {
    skip();
    if (pos_ >= text_.size()) fail("expected a tree");
    if (text_[pos_] == '(') {
      ++pos_;
      Tree left = tree();
      Tree right = tree();
      skip();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return Tree::fork(std::move(left), std::move(right));
    }
    const auto start = pos_;
    if (text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '-')) fail("expected an integer leaf");
    try {
      return Tree::leaf(Value::integer(std::stoll(std::string(text_.substr(start, pos_ - start)))));
    } catch (const std::out_of_range&) {
      fail("integer out of range");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Tree parse_tree(std::string_view text) { return TreeParser(text).parse(); }

std::string to_string(const Tree& tree) {
  if (tree.is_leaf()) return to_string(tree.value());
  return "(" + to_string(tree.left()) + " " + to_string(tree.right()) + ")";
}

System make_scenario(const std::string& name, const ScenarioParams& params) {
  const ScenarioInfo* info = find_scenario(name);
  if (info == nullptr) throw UnknownScenario(name);
  if (info->logic) throw std::invalid_argument(name + " is a logic scenario with no actor system");

  if (name == "account") {
    Params p(name, params, {"balance", "first", "second"});
    return account_scenario(p.integer("balance", 5), p.integer("first", 1), p.integer("second", 2));
  }
  if (name == "channel") {
    Params p(name, params, {"puts", "gets"});
    const auto puts = p.integer("puts", 1);
    const auto gets = p.integer("gets", 1);
    if (puts < 0 || gets < 0 || puts > 100 || gets > 100) {
      throw std::invalid_argument("channel: puts and gets must be in [0, 100]");
    }
    return channel_scenario(static_cast<int>(puts), static_cast<int>(gets));
  }
  if (name == "real") {
    Params p(name, params, {"bits"});
    const auto bits = p.integer("bits", 3);
    if (bits < 1 || bits > 64) throw std::invalid_argument("real: bits must be in [1, 64]");
    return real_scenario(static_cast<int>(bits));
  }
  if (name == "same-fringe") {
    Params p(name, params, {"first", "second"});
    const Tree first = p.text("first") ? parse_tree(*p.text("first")) : example_tree_right_leaning();
    const Tree second = p.text("second") ? parse_tree(*p.text("second")) : example_tree_left_leaning();
    return same_fringe_scenario(first, second);
  }
  if (name == "lambda") {
    Params p(name, params, {"term"});
    const Term term = p.text("term") ? parse_term(*p.text("term"))
                                     : church_to_int(Term::application(
                                           Term::application(church_plus(), church(2)), church(2)));
    return lambda_system(term);
  }
  Params p(name, params, {});
  if (name == "unbounded") return unbounded_scenario();
  if (name == "latch") return latch_scenario();
  if (name == "gcd") return gcd_scenario();
  if (name == "future") return future_scenario();
  if (name == "ndtm") return ndtm_scenario();
  if (name == "csp-xyz") return csp_scenario();
  throw UnknownScenario(name);
}

std::string_view logic_scenario_script(const std::string& name) {
  if (name == "socrates-forward") return logic::socrates_forward_script();
  if (name == "socrates-backward") return logic::socrates_backward_script();
  throw UnknownScenario(name);
}

}  // namespace actorsim
