#include "actorsim/kernel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace actorsim {

UnknownBehavior::UnknownBehavior(std::string n)
    : KernelError("unknown behavior: " + n), name(std::move(n)) {}

DanglingAddress::DanglingAddress(std::uint64_t i)
    : KernelError("dangling address @" + std::to_string(i)), id(i) {}

LocalityViolation::LocalityViolation(std::uint64_t a, std::string s)
    : KernelError("locality violation: @" + std::to_string(a) + " not in provenance (" + s + ")"),
      address(a),
      source(std::move(s)) {}

UnknownMessage::UnknownMessage(MsgId i)
    : KernelError("message " + std::to_string(i) + " is not in transit"), id(i) {}

void BehaviorRegistry::add(std::string name, BehaviorFn fn) { table_[std::move(name)] = fn; }

BehaviorFn BehaviorRegistry::find(std::string_view name) const noexcept {
  auto it = table_.find(name);
  return it == table_.end() ? nullptr : it->second;
}

BehaviorContext::BehaviorContext(const BehaviorRegistry& registry, const ActorRecord& record,
                                 const Message& message, std::uint64_t next_actor)
    : registry_(registry), record_(record), message_(message), next_actor_(next_actor) {
  effect_.next_state = record.spec.state;
}

Address BehaviorContext::create(std::string behavior, Value state) {
  if (!registry_.contains(behavior)) throw UnknownBehavior(behavior);
  Address a(next_actor_++);
  effect_.creations.push_back(Creation{a, BehaviorSpec{std::move(behavior), std::move(state)}});
  return a;
}

void BehaviorContext::send(Address target, Value payload, std::optional<Address> customer) {
  effect_.sends.push_back(
      OutgoingSend{target, std::move(payload), customer, MessageKind::Request});
}

void BehaviorContext::respond(Address customer, Value v) {
  effect_.sends.push_back(OutgoingSend{customer, std::move(v), std::nullopt, MessageKind::Returned});
}

void BehaviorContext::respond_threw(Address customer, Value e) {
  effect_.sends.push_back(OutgoingSend{customer, std::move(e), std::nullopt, MessageKind::Threw});
}

void BehaviorContext::reply(Value v) {
  if (message_.customer) respond(*message_.customer, std::move(v));
}

void BehaviorContext::reply_threw(Value e) {
  if (message_.customer) respond_threw(*message_.customer, std::move(e));
}

std::set<Address> provenance_set(const ActorRecord& record, const Message& message,
                                 std::span<const Address> creations) {
  std::set<Address> out = addresses(message.payload);
  if (message.customer) out.insert(*message.customer);
  collect_addresses(record.spec.state, out);
  out.insert(creations.begin(), creations.end());
  out.insert(record.address);
  return out;
}

Configuration::Configuration() : Configuration(builtin_registry()) {}

Configuration::Configuration(std::shared_ptr<const BehaviorRegistry> registry)
    : registry_(std::move(registry)) {}

void Configuration::require_exists(Address a) const {
  if (a.id() >= actors_.size()) throw DanglingAddress(a.id());
}

void Configuration::require_exists(const Value& v) const {
  for (const auto& a : addresses(v)) require_exists(a);
}

const ActorRecord& Configuration::actor(Address a) const {
  require_exists(a);
  return actors_[a.id()];
}

const std::vector<StateEntry>& Configuration::state_history(Address a) const {
  require_exists(a);
  return history_[a.id()];
}

namespace {

std::vector<ActorId> ids_of(const Value& v) {
  std::vector<ActorId> out;
  for (const auto& a : addresses(v)) out.push_back(a.id());
  return out;
}

}  // namespace

Address Configuration::create_actor(BehaviorSpec spec) {
  if (!registry_->contains(spec.behavior_name)) throw UnknownBehavior(spec.behavior_name);
  require_exists(spec.state);
  Address a(actors_.size());
  trace_.creations.push_back(
      CreationRecord{a.id(), std::nullopt, spec.behavior_name, ids_of(spec.state)});
  history_.push_back({StateEntry{std::nullopt, spec.state}});
  actors_.push_back(ActorRecord{a, std::move(spec), 0, false});
  return a;
}

MsgId Configuration::send(Address target, Value payload, std::optional<Address> customer,
                          std::optional<EventId> activating_event, MessageKind kind) {
  require_exists(target);
  require_exists(payload);
  if (customer) require_exists(*customer);
  if (is_response(kind) && customer) {
    throw KernelError("response messages carry no customer");
  }
  if (activating_event) {
    const Event* e = trace_.event(*activating_event);
    if (e == nullptr || !e->is_reception()) {
      throw KernelError("activating event must be a recorded reception");
    }
  }
  return enqueue(target, std::move(payload), customer, activating_event, kind);
}

MsgId Configuration::enqueue(Address target, Value payload, std::optional<Address> customer,
                             std::optional<EventId> activating_event, MessageKind kind) {
  const MsgId id = trace_.messages.size();
  const EventId tx{trace_.events.size()};
  trace_.messages.push_back(MessageRecord{id, target.id(), kind, to_json_text(payload),
                                          customer ? std::optional<ActorId>(customer->id())
                                                   : std::nullopt,
                                          ids_of(payload)});
  trace_.events.push_back(Event{tx, EventKind::Transmission, id, activating_event, 0, 0});
  in_transit_.push_back(Message{id, target, std::move(payload), customer, kind, tx});
  return id;
}

EventId Configuration::deliver_step(MsgId msg_id) {
  auto it = std::find_if(in_transit_.begin(), in_transit_.end(),
                         [&](const Message& m) { return m.msg_id == msg_id; });
  if (it == in_transit_.end()) throw UnknownMessage(msg_id);
  const Message message = *it;
  const ActorRecord& record = actors_[message.target.id()];

  BehaviorContext ctx(*registry_, record, message, actors_.size());
  std::optional<Value> thrown;
  if (!record.halted) {
    BehaviorFn fn = registry_->find(record.spec.behavior_name);
    if (fn == nullptr) throw UnknownBehavior(record.spec.behavior_name);
    try {
      fn(ctx);
    } catch (const ActorThrow& t) {
      thrown = t.value;
    }
  }

  Effect effect;
  if (thrown) {
    // The state is untouched; the exception becomes the reply.
    effect.next_state = record.spec.state;
    if (message.customer) {
      effect.sends.push_back(
          OutgoingSend{*message.customer, *thrown, std::nullopt, MessageKind::Threw});
    }
  } else {
    effect = ctx.effect();
  }

  std::vector<Address> created;
  for (const auto& c : effect.creations) created.push_back(c.address);
  const auto allowed = provenance_set(record, message, created);
  auto check = [&](const Value& v, const char* source) {
    for (const auto& a : addresses(v)) {
      if (!allowed.contains(a)) throw LocalityViolation(a.id(), source);
    }
  };
  for (const auto& s : effect.sends) {
    if (!allowed.contains(s.target)) throw LocalityViolation(s.target.id(), "target");
    check(s.payload, "payload");
    if (s.customer && !allowed.contains(*s.customer)) {
      throw LocalityViolation(s.customer->id(), "customer");
    }
    if (is_response(s.kind) && s.customer) throw KernelError("response messages carry no customer");
  }
  for (const auto& c : effect.creations) check(c.spec.state, "creation");
  check(effect.next_state, "next_state");

  // Commit.
  const ActorId target = message.target.id();
  const EventId rx{trace_.events.size()};
  trace_.events.push_back(Event{rx, EventKind::Reception, message.msg_id, message.transmission,
                                target, actors_[target].reception_count});
  in_transit_.erase(std::find_if(in_transit_.begin(), in_transit_.end(),
                                 [&](const Message& m) { return m.msg_id == msg_id; }));
  ++actors_[target].reception_count;
  ++steps_;

  for (auto& c : effect.creations) {
    trace_.creations.push_back(
        CreationRecord{c.address.id(), rx, c.spec.behavior_name, ids_of(c.spec.state)});
    history_.push_back({StateEntry{std::nullopt, c.spec.state}});
    actors_.push_back(ActorRecord{c.address, std::move(c.spec), 0, false});
  }
  for (auto& s : effect.sends) {
    enqueue(s.target, std::move(s.payload), s.customer, rx, s.kind);
  }
  if (thrown && !message.customer) {
    trace_.orphans.push_back(OrphanException{rx, to_json_text(*thrown)});
  }
  if (!actors_[target].halted) {
    history_[target].push_back(StateEntry{rx, effect.next_state});
    actors_[target].spec.state = std::move(effect.next_state);
    actors_[target].halted = effect.halted;
  }
  return rx;
}

std::string serialize(const Configuration& config) {
  using J = nlohmann::ordered_json;
  J actors = J::array();
  for (const auto& a : config.actors()) {
    actors.push_back(J{{"id", a.address.id()},
                       {"behavior", a.spec.behavior_name},
                       {"state", J::parse(to_json_text(a.spec.state))},
                       {"receptions", a.reception_count},
                       {"halted", a.halted}});
  }
  J transit = J::array();
  for (const auto& m : config.in_transit()) transit.push_back(m.msg_id);
  J events = J::array();
  for (const auto& e : config.trace().events) {
    events.push_back(J{{"id", e.id.value},
                       {"rx", e.is_reception()},
                       {"msg", e.msg},
                       {"by", e.activated_by ? J(e.activated_by->value) : J(nullptr)},
                       {"actor", e.actor},
                       {"seq", e.seq}});
  }
  J messages = J::array();
  for (const auto& m : config.trace().messages) {
    messages.push_back(J{{"id", m.id},
                         {"target", m.target},
                         {"kind", to_wire(m.kind)},
                         {"payload", J::parse(m.payload)},
                         {"customer", m.customer ? J(*m.customer) : J(nullptr)}});
  }
  J out{{"actors", actors}, {"in_transit", transit}, {"events", events}, {"messages", messages}};
  return out.dump();
}

}  // namespace actorsim
