#pragma once

#include "actorsim/trace.hpp"
#include "actorsim/value.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actorsim {

struct BehaviorSpec {
  std::string behavior_name;
  Value state;

  friend bool operator==(const BehaviorSpec&, const BehaviorSpec&) = default;
};

struct Message {
  MsgId msg_id = 0;
  Address target;
  Value payload;
  std::optional<Address> customer;
  MessageKind kind = MessageKind::Request;
  EventId transmission;
};

struct ActorRecord {
  Address address;
  BehaviorSpec spec;
  std::uint64_t reception_count = 0;
  bool halted = false;
};

struct OutgoingSend {
  Address target;
  Value payload;
  std::optional<Address> customer;
  MessageKind kind = MessageKind::Request;
};

struct Creation {
  Address address;
  BehaviorSpec spec;
};

/// What one reception produces. Applied atomically by deliver_step after the
/// locality check.
struct Effect {
  std::vector<Creation> creations;
  std::vector<OutgoingSend> sends;
  Value next_state;
  bool halted = false;
};

struct KernelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownBehavior : KernelError {
  explicit UnknownBehavior(std::string name);
  std::string name;
};

struct DanglingAddress : KernelError {
  explicit DanglingAddress(std::uint64_t id);
  std::uint64_t id;
};

struct LocalityViolation : KernelError {
  LocalityViolation(std::uint64_t address, std::string source);
  std::uint64_t address;
  std::string source;  // where the address appeared: "target", "payload", ...
};

struct UnknownMessage : KernelError {
  explicit UnknownMessage(MsgId id);
  MsgId id;
};

/// Thrown by a behavior to answer its customer with an exception.
struct ActorThrow {
  Value value;
};

class BehaviorContext;
using BehaviorFn = void (*)(BehaviorContext&);

/// Closed table of named behaviors. Behaviors are plain functions so that a
/// delivery depends on nothing but (state, message).
class BehaviorRegistry {
 public:
  void add(std::string name, BehaviorFn fn);
  BehaviorFn find(std::string_view name) const noexcept;
  bool contains(std::string_view name) const noexcept { return find(name) != nullptr; }

 private:
  std::map<std::string, BehaviorFn, std::less<>> table_;
};

/// Registry holding every built-in behavior (constructs, lambda, harness).
std::shared_ptr<const BehaviorRegistry> builtin_registry();

/// Handed to a behavior for one reception; accumulates the Effect.
class BehaviorContext {
 public:
  Address self() const noexcept { return record_.address; }
  const Value& state() const noexcept { return record_.spec.state; }
  const Message& message() const noexcept { return message_; }
  const Value& payload() const noexcept { return message_.payload; }
  MessageKind kind() const noexcept { return message_.kind; }
  const std::optional<Address>& customer() const noexcept { return message_.customer; }

  /// Mints a fresh actor. Throws UnknownBehavior.
  Address create(std::string behavior, Value state);
  void send(Address target, Value payload, std::optional<Address> customer = std::nullopt);
  void respond(Address customer, Value v);
  void respond_threw(Address customer, Value e);
  /// Respond to this message's customer, if it has one.
  void reply(Value v);
  void reply_threw(Value e);
  void become(Value next_state) { effect_.next_state = std::move(next_state); }
  void halt() { effect_.halted = true; }

  const Effect& effect() const noexcept { return effect_; }

 private:
  BehaviorContext(const BehaviorRegistry& registry, const ActorRecord& record,
                  const Message& message, std::uint64_t next_actor);

  const BehaviorRegistry& registry_;
  const ActorRecord& record_;
  const Message& message_;
  std::uint64_t next_actor_;
  Effect effect_;

  friend class Configuration;
};

/// Addresses an actor may mention while handling `message`: those in the
/// message, its customer, its own state, the actors it just created, and
/// itself.
std::set<Address> provenance_set(const ActorRecord& record, const Message& message,
                                 std::span<const Address> creations);

struct StateEntry {
  std::optional<EventId> after;  // reception that installed it; absent = initial
  Value state;
};

/// The global simulation state: actors, messages in transit, and the trace.
/// A plain value; copying it forks the computation.
class Configuration {
 public:
  Configuration();
  explicit Configuration(std::shared_ptr<const BehaviorRegistry> registry);

  /// Throws UnknownBehavior, DanglingAddress (for addresses in the state).
  Address create_actor(BehaviorSpec spec);

  /// Puts a message in transit. Without an activating reception the send is
  /// a root transmission. Throws DanglingAddress.
  MsgId send(Address target, Value payload, std::optional<Address> customer = std::nullopt,
             std::optional<EventId> activating_event = std::nullopt,
             MessageKind kind = MessageKind::Request);

  /// Delivers one in-transit message. On any error the configuration is left
  /// unchanged. Throws UnknownMessage, LocalityViolation, UnknownBehavior.
  EventId deliver_step(MsgId msg_id);

  bool quiescent() const noexcept { return in_transit_.empty(); }
  const std::vector<Message>& in_transit() const noexcept { return in_transit_; }
  std::span<const ActorRecord> actors() const noexcept { return actors_; }
  const ActorRecord& actor(Address a) const;
  const Trace& trace() const noexcept { return trace_; }
  const std::vector<StateEntry>& state_history(Address a) const;
  const BehaviorRegistry& registry() const noexcept { return *registry_; }
  std::uint64_t steps() const noexcept { return steps_; }

  void set_policy_tag(std::string tag) { trace_.policy = std::move(tag); }

 private:
  void require_exists(Address a) const;
  void require_exists(const Value& v) const;
  MsgId enqueue(Address target, Value payload, std::optional<Address> customer,
                std::optional<EventId> activating_event, MessageKind kind);

  std::shared_ptr<const BehaviorRegistry> registry_;
  std::vector<ActorRecord> actors_;
  std::vector<std::vector<StateEntry>> history_;
  std::vector<Message> in_transit_;
  Trace trace_;
  std::uint64_t steps_ = 0;
};

/// Canonical JSON of the whole configuration; equal configurations
/// serialize to identical bytes.
std::string serialize(const Configuration& config);

}  // namespace actorsim
