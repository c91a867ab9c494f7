#pragma once

#include "actorsim/kernel.hpp"
#include "actorsim/laws.hpp"

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace actorsim {

/// Chooses among in-transit messages during an adversarial run.
struct SelectionRule {
  std::string name;
  std::function<bool(const Message&)> accepts;
};

struct Policy {
  enum class Kind { FairFifo, SeededRandom, Adversarial, Exhaustive };

  Kind kind = Kind::FairFifo;
  std::uint64_t seed = 0;
  std::string script_name;
  std::vector<SelectionRule> script;

  static Policy fair_fifo() { return Policy{}; }
  static Policy seeded_random(std::uint64_t seed);
  /// Named scripts: starve-stop, always-print (alias always-step2).
  /// Throws std::invalid_argument for an unknown name.
  static Policy adversarial(const std::string& script_name);

  /// Tag recorded in traces, e.g. "fair", "random:7", "adversarial:starve-stop".
  std::string tag() const;
};

using Observer = std::function<std::vector<Value>(const Configuration&)>;

/// Responses received by harness customers, in customer creation order.
/// A customer still waiting contributes the symbol `pending`.
std::vector<Value> harness_outputs(const Configuration& config);

/// A closed system: initial configuration (actors created, root messages in
/// transit) plus how to read its output.
struct System {
  std::string name;
  Configuration initial;
  Observer observe = harness_outputs;
};

struct RunResult {
  bool halted = false;
  std::uint64_t steps = 0;
  Configuration final_config;
  std::vector<Value> outputs;
};

inline constexpr std::uint64_t kDefaultMaxSteps = 10000;
inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Delivers messages chosen by `policy` until quiescent or `max_steps`
/// deliveries. Exhaustive is not a run policy (std::invalid_argument).
RunResult run(const System& system, const Policy& policy, std::uint64_t max_steps = kDefaultMaxSteps);

struct Outcome {
  bool halted = false;
  std::vector<Value> outputs;

  friend bool operator==(const Outcome&, const Outcome&) = default;
  friend auto operator<=>(const Outcome&, const Outcome&) = default;
};

struct OutcomeSet {
  int depth = 0;
  std::set<Outcome> outcomes;
  std::uint64_t tree_size = 0;

  /// Some branch was still running when the depth bound cut it off.
  bool has_frontier() const;
  std::set<std::vector<Value>> halting_outputs() const;
};

struct ExplosionGuard : std::runtime_error {
  explicit ExplosionGuard(std::uint64_t cap);
  std::uint64_t cap;
};

struct EnumerateOptions {
  std::uint64_t cap = kDefaultEnumerationCap;
  /// Called on every leaf (quiescent or cut off at depth).
  std::function<void(const Configuration&, bool halted)> on_leaf;
};

/// Depth-first exploration of every delivery choice, ascending msg_id, up to
/// `depth` deliveries. Throws ExplosionGuard when more than `cap`
/// configurations are visited.
OutcomeSet enumerate_outcomes(const System& system, int depth, const EnumerateOptions& options = {});

/// Reads ACTOR_KERNEL_ENUM_CAP, falling back to the default cap.
std::uint64_t enumeration_cap_from_env();

/// Every message is delivered within Q deliveries of its transmission, Q
/// being the number of messages in transit right after it was sent. Only
/// meaningful for fair traces: throws std::invalid_argument otherwise.
Report fairness_bound_check(const Trace& trace);

/// Bounded-nondeterminism sanity check over increasing depths: once every
/// branch halts within a depth, deeper enumeration adds no outcomes.
/// Returns false when that is contradicted.
bool plotkin_consistent(const System& system, const std::vector<int>& depths,
                        const EnumerateOptions& options = {});

}  // namespace actorsim
