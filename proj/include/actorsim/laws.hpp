#pragma once

#include "actorsim/kernel.hpp"
#include "actorsim/trace.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actorsim {

struct Violation {
  std::string kind;  // "cycle", "activator", "seq", "msg", "single-response", "locality", ...
  std::string detail;
  std::optional<EventId> event;
};

/// Law-check outcome. Violations are data; checkers never throw on a bad trace.
struct Report {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(std::string_view kind) const noexcept;
  void merge(const Report& other);
};

struct UnknownEvent : std::invalid_argument {
  explicit UnknownEvent(EventId id);
  EventId id;
};

/// Strict activation order: b reachable from a through activation edges.
bool activation_precedes(const Trace& trace, EventId a, EventId b);

/// Combined order: reachability through activation edges plus each actor's
/// reception successor edges.
bool combined_precedes(const Trace& trace, EventId a, EventId b);

/// {e | a ~> e ~> b} under the combined order, sorted by id.
std::vector<EventId> intermediate_events(const Trace& trace, EventId a, EventId b);

/// Acyclic combined order, one activator per non-root event, dense
/// per-actor reception sequences, each message transmitted once and
/// received at most once.
Report check_well_formed(const Trace& trace);

/// No customer receives two responses; responses carry no customer.
Report check_single_response(const Trace& trace);

/// Replays acquaintance growth (creation state, received messages, children)
/// and flags any transmission that names an address its sender never learned.
Report check_locality(const Trace& trace);

/// Enumerates every interval of the combined order and confirms each is finite.
/// Returns the number of ordered pairs examined in `pairs`.
Report check_discreteness(const Trace& trace, std::size_t* pairs = nullptr);

/// All of the above except discreteness.
Report check_all(const Trace& trace);

// Actor induction.

using StatePredicate = std::function<bool(const Value& state)>;
using TransitionPredicate = std::function<bool(const Value& before, const Value& after)>;

struct UnknownPredicate : std::invalid_argument {
  explicit UnknownPredicate(std::string name);
  std::string name;
};

class PredicateRegistry {
 public:
  void add_state(std::string name, StatePredicate p);
  void add_transition(std::string name, TransitionPredicate p);
  const StatePredicate* state(std::string_view name) const noexcept;
  const TransitionPredicate* transition(std::string_view name) const noexcept;

 private:
  std::vector<std::pair<std::string, StatePredicate>> states_;
  std::vector<std::pair<std::string, TransitionPredicate>> transitions_;
};

/// count-nonneg, balance-nonneg, balance-at-least-5, counter-monotone,
/// continue-latched, latch-drained, future-resolves-once.
const PredicateRegistry& builtin_predicates();

struct InductionResult {
  bool holds = true;
  bool failed_initially = false;
  std::optional<EventId> first_violation;  // reception after which it broke
};

/// Checks a predicate on the actor's initial state and after every reception
/// recorded in `config`. Throws UnknownPredicate.
InductionResult actor_induction(const Configuration& config, Address actor,
                                std::string_view predicate,
                                const PredicateRegistry& registry = builtin_predicates());

}  // namespace actorsim
