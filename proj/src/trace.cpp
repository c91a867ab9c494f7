#include "actorsim/trace.hpp"

namespace actorsim {

const char* to_wire(MessageKind kind) noexcept {
  switch (kind) {
    case MessageKind::Request:
      return "req";
    case MessageKind::Returned:
      return "ret";
    case MessageKind::Threw:
      return "threw";
  }
  return "req";
}

std::optional<MessageKind> message_kind_from_wire(const std::string& s) noexcept {
  if (s == "req") return MessageKind::Request;
  if (s == "ret") return MessageKind::Returned;
  if (s == "threw") return MessageKind::Threw;
  return std::nullopt;
}

const Event* Trace::event(EventId id) const noexcept {
  if (id.value < events.size() && events[id.value].id == id) return &events[id.value];
  for (const auto& e : events) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const MessageRecord* Trace::message(MsgId id) const noexcept {
  if (id < messages.size() && messages[id].id == id) return &messages[id];
  for (const auto& m : messages) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

std::vector<std::pair<EventId, EventId>> Trace::activation_edges() const {
  std::vector<std::pair<EventId, EventId>> edges;
  for (const auto& e : events) {
    if (e.activated_by) edges.emplace_back(*e.activated_by, e.id);
  }
  return edges;
}

std::map<ActorId, std::vector<EventId>> Trace::reception_seqs() const {
  std::map<ActorId, std::vector<EventId>> seqs;
  for (const auto& e : events) {
    if (e.is_reception()) seqs[e.actor].push_back(e.id);
  }
  return seqs;
}

std::vector<EventId> Trace::roots() const {
  std::vector<EventId> out;
  for (const auto& e : events) {
    if (!e.activated_by) out.push_back(e.id);
  }
  return out;
}

}  // namespace actorsim
