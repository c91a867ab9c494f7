#include "actorsim/trace_io.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <set>
#include <sstream>

namespace actorsim {

using Json = nlohmann::ordered_json;

namespace {

Json optional_id(const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_event(const std::optional<EventId>& e) { return e ? Json(e->value) : Json(nullptr); }

void line(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

}  // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  std::multimap<std::uint64_t, const CreationRecord*> created_by;
  std::multimap<std::uint64_t, const OrphanException*> orphans_by;
  for (const auto& c : trace.creations) {
    if (c.by) created_by.emplace(c.by->value, &c);
  }
  for (const auto& o : trace.orphans) orphans_by.emplace(o.by.value, &o);

  auto new_line = [&](const CreationRecord& c) {
    line(out, Json{{"t", "new"}, {"actor", c.actor}, {"by", optional_event(c.by)},
                   {"behavior", c.behavior}, {"refs", c.refs}});
  };

  line(out, Json{{"t", "meta"}, {"policy", trace.policy}});
  for (const auto& c : trace.creations) {
    if (!c.by) new_line(c);
  }
  for (const auto& e : trace.events) {
    if (e.is_transmission()) {
      if (const MessageRecord* m = trace.message(e.msg)) {
        line(out, Json{{"t", "m"},
                       {"id", m->id},
                       {"target", m->target},
                       {"kind", to_wire(m->kind)},
                       {"payload", Json::parse(m->payload)},
                       {"customer", optional_id(m->customer)}});
      }
      line(out, Json{{"t", "tx"}, {"id", e.id.value}, {"msg", e.msg}, {"by", optional_event(e.activated_by)}});
      continue;
    }
    line(out, Json{{"t", "rx"},
                   {"id", e.id.value},
                   {"actor", e.actor},
                   {"seq", e.seq},
                   {"msg", e.msg},
                   {"by", optional_event(e.activated_by)}});
    auto [cb, ce] = created_by.equal_range(e.id.value);
    for (auto it = cb; it != ce; ++it) new_line(*it->second);
    auto [ob, oe] = orphans_by.equal_range(e.id.value);
    for (auto it = ob; it != oe; ++it) {
      line(out, Json{{"t", "orphan"}, {"by", e.id.value}, {"payload", Json::parse(it->second->payload)}});
    }
  }
  line(out, Json{{"t", "end"}, {"events", trace.events.size()}, {"messages", trace.messages.size()}});
}

std::string write_trace(const Trace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

TraceParseError::TraceParseError(std::size_t l, const std::string& message)
    : std::runtime_error("trace line " + std::to_string(l) + ": " + message), line(l) {}

namespace {

class LineReader {
 public:
  LineReader(const Json& j, std::size_t number) : j_(j), number_(number) {}

  [[noreturn]] void fail(const std::string& why) const { throw TraceParseError(number_, why); }

  const Json& field(const char* name) const {
    auto it = j_.find(name);
    if (it == j_.end()) fail(std::string("missing field '") + name + "'");
    return *it;
  }

  std::uint64_t u64(const char* name) const {
    const Json& v = field(name);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(std::string("field '") + name + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::optional<std::uint64_t> opt_u64(const char* name) const {
    if (field(name).is_null()) return std::nullopt;
    return u64(name);
  }

  std::string str(const char* name) const {
    const Json& v = field(name);
    if (!v.is_string()) fail(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
  }

 private:
  const Json& j_;
  std::size_t number_;
};

// Validates the Value encoding and collects {"addr":N} references.
void check_payload(const Json& v, std::set<ActorId>& refs, const LineReader& r) {
  if (v.is_null() || v.is_boolean() || v.is_string() || v.is_number_integer()) return;
  if (v.is_array()) {
    for (const auto& item : v) check_payload(item, refs, r);
    return;
  }
  if (v.is_object() && v.size() == 1) {
    if (auto it = v.find("sym"); it != v.end() && it->is_string()) return;
    if (auto it = v.find("addr"); it != v.end() && it->is_number_unsigned()) {
      refs.insert(it->get<ActorId>());
      return;
    }
  }
  r.fail("payload is not a valid value encoding: " + v.dump());
}

}  // namespace

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string text;
  std::size_t number = 0;
  bool saw_meta = false;
  bool saw_end = false;
  while (std::getline(in, text)) {
    ++number;
    if (saw_end) {
      if (text.empty()) continue;
      throw TraceParseError(number, "content after end line");
    }
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw TraceParseError(number, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw TraceParseError(number, "line is not a JSON object");
    LineReader r(j, number);
    const std::string t = r.str("t");
    if (!saw_meta) {
      if (t != "meta") r.fail("first line must be meta");
      trace.policy = r.str("policy");
      saw_meta = true;
      continue;
    }
    if (t == "m") {
      MessageRecord m;
      m.id = r.u64("id");
      m.target = r.u64("target");
      auto kind = message_kind_from_wire(r.str("kind"));
      if (!kind) r.fail("unknown message kind");
      m.kind = *kind;
      const Json& payload = r.field("payload");
      std::set<ActorId> refs;
      check_payload(payload, refs, r);
      m.payload = payload.dump();
      m.refs.assign(refs.begin(), refs.end());
      m.customer = r.opt_u64("customer");
      trace.messages.push_back(std::move(m));
    } else if (t == "tx" || t == "rx") {
      Event e;
      e.id = EventId{r.u64("id")};
      e.msg = r.u64("msg");
      auto by = r.opt_u64("by");
      if (by) e.activated_by = EventId{*by};
      if (t == "rx") {
        e.kind = EventKind::Reception;
        e.actor = r.u64("actor");
        e.seq = r.u64("seq");
      }
      trace.events.push_back(e);
    } else if (t == "new") {
      CreationRecord c;
      c.actor = r.u64("actor");
      if (auto by = r.opt_u64("by")) c.by = EventId{*by};
      c.behavior = r.str("behavior");
      const Json& refs = r.field("refs");
      if (!refs.is_array()) r.fail("refs must be an array");
      for (const auto& ref : refs) {
        if (!ref.is_number_unsigned()) r.fail("refs must hold actor ordinals");
        c.refs.push_back(ref.get<ActorId>());
      }
      trace.creations.push_back(std::move(c));
    } else if (t == "orphan") {
      const Json& payload = r.field("payload");
      std::set<ActorId> refs;
      check_payload(payload, refs, r);
      trace.orphans.push_back(OrphanException{EventId{r.u64("by")}, payload.dump()});
    } else if (t == "end") {
      if (r.u64("events") != trace.events.size() || r.u64("messages") != trace.messages.size()) {
        r.fail("end line counts do not match the trace");
      }
      saw_end = true;
    } else {
      r.fail("unknown line type '" + t + "'");
    }
  }
  if (!saw_meta) throw TraceParseError(number, "empty trace file");
  if (!saw_end) throw TraceParseError(number, "truncated trace: no end line");
  return trace;
}

Trace parse_trace_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

}  // namespace actorsim
