#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace actorsim {

/// Ordinal of an actor as it appears in a recorded trace. Traces are
/// observations, so they carry plain ordinals rather than Addresses.
using ActorId = std::uint64_t;
using MsgId = std::uint64_t;

struct EventId {
  std::uint64_t value = 0;

  friend bool operator==(const EventId&, const EventId&) = default;
  friend auto operator<=>(const EventId&, const EventId&) = default;
};

enum class MessageKind { Request, Returned, Threw };

const char* to_wire(MessageKind kind) noexcept;
std::optional<MessageKind> message_kind_from_wire(const std::string& s) noexcept;
inline bool is_response(MessageKind k) noexcept { return k != MessageKind::Request; }

enum class EventKind { Transmission, Reception };

/// A transmission or reception. `activated_by` is the reception that caused a
/// transmission (absent for root sends), or the transmission a reception
/// delivers.
struct Event {
  EventId id;
  EventKind kind = EventKind::Transmission;
  MsgId msg = 0;
  std::optional<EventId> activated_by;
  ActorId actor = 0;    // reception only
  std::uint64_t seq = 0;  // reception only

  bool is_reception() const noexcept { return kind == EventKind::Reception; }
  bool is_transmission() const noexcept { return kind == EventKind::Transmission; }

  friend bool operator==(const Event&, const Event&) = default;
};

struct MessageRecord {
  MsgId id = 0;
  ActorId target = 0;
  MessageKind kind = MessageKind::Request;
  std::string payload;  // canonical JSON text
  std::optional<ActorId> customer;
  std::vector<ActorId> refs;  // addresses inside the payload

  friend bool operator==(const MessageRecord&, const MessageRecord&) = default;
};

struct CreationRecord {
  ActorId actor = 0;
  std::optional<EventId> by;  // reception that created it; absent at top level
  std::string behavior;
  std::vector<ActorId> refs;  // addresses inside the initial state

  friend bool operator==(const CreationRecord&, const CreationRecord&) = default;
};

/// Exception raised by a behavior while handling a message with no customer.
struct OrphanException {
  EventId by;
  std::string payload;

  friend bool operator==(const OrphanException&, const OrphanException&) = default;
};

struct Trace {
  std::string policy;
  std::vector<Event> events;
  std::vector<MessageRecord> messages;
  std::vector<CreationRecord> creations;
  std::vector<OrphanException> orphans;

  bool empty() const noexcept { return events.empty(); }

  /// Lookup by id; nullptr when absent.
  const Event* event(EventId id) const noexcept;
  const MessageRecord* message(MsgId id) const noexcept;

  std::vector<std::pair<EventId, EventId>> activation_edges() const;
  /// Receptions per actor, in recording order.
  std::map<ActorId, std::vector<EventId>> reception_seqs() const;
  std::vector<EventId> roots() const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

}  // namespace actorsim
