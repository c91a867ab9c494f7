#include "actorsim/value.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace actorsim {

Value Value::integer(std::int64_t v) { return Value(Rep(std::in_place_index<1>, v)); }
Value Value::boolean(bool v) { return Value(Rep(std::in_place_index<2>, v)); }
Value Value::symbol(std::string name) { return Value(Rep(Symbol{std::move(name)})); }
Value Value::string(std::string s) { return Value(Rep(std::in_place_index<4>, std::move(s))); }
Value Value::list(List items) {
  return Value(Rep(std::make_shared<const List>(std::move(items))));
}
Value Value::list(std::initializer_list<Value> items) { return list(List(items)); }
Value Value::address(Address a) { return Value(Rep(a)); }

bool Value::is_symbol(std::string_view name) const noexcept {
  const auto* s = std::get_if<Symbol>(&rep_);
  return s != nullptr && s->name == name;
}

std::int64_t Value::as_integer() const { return std::get<std::int64_t>(rep_); }
bool Value::as_boolean() const { return std::get<bool>(rep_); }
const std::string& Value::as_symbol() const { return std::get<Symbol>(rep_).name; }
const std::string& Value::as_string() const { return std::get<std::string>(rep_); }
const Value::List& Value::as_list() const { return *std::get<ListPtr>(rep_); }
Address Value::as_address() const { return std::get<Address>(rep_); }

const Value& Value::at(std::size_t i) const { return as_list().at(i); }

std::size_t Value::size() const { return is_list() ? as_list().size() : 0; }

std::string_view Value::selector() const noexcept {
  if (const auto* s = std::get_if<Symbol>(&rep_)) return s->name;
  if (const auto* l = std::get_if<ListPtr>(&rep_)) {
    if (!(*l)->empty()) {
      if (const auto* s = std::get_if<Symbol>(&(*l)->front().rep_)) return s->name;
    }
  }
  return {};
}

bool operator==(const Value& a, const Value& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.rep_.index() != b.rep_.index()) return a.rep_.index() <=> b.rep_.index();
  switch (a.kind()) {
    case Value::Kind::Void:
      return std::strong_ordering::equal;
    case Value::Kind::Integer:
      return a.as_integer() <=> b.as_integer();
    case Value::Kind::Boolean:
      return a.as_boolean() <=> b.as_boolean();
    case Value::Kind::Symbol:
      return a.as_symbol() <=> b.as_symbol();
    case Value::Kind::Str:
      return a.as_string() <=> b.as_string();
    case Value::Kind::Addr:
      return a.as_address() <=> b.as_address();
    case Value::Kind::List: {
      const auto& x = a.as_list();
      const auto& y = b.as_list();
      if (&x == &y) return std::strong_ordering::equal;
      return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
    }
  }
  return std::strong_ordering::equal;
}

void collect_addresses(const Value& v, std::set<Address>& out) {
  if (v.is_address()) {
    out.insert(v.as_address());
  } else if (v.is_list()) {
    for (const auto& item : v.as_list()) collect_addresses(item, out);
  }
}

std::set<Address> addresses(const Value& v) {
  std::set<Address> out;
  collect_addresses(v, out);
  return out;
}

std::string to_string(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Void:
      return "void";
    case Value::Kind::Integer:
      return std::to_string(v.as_integer());
    case Value::Kind::Boolean:
      return v.as_boolean() ? "true" : "false";
    case Value::Kind::Symbol:
      return v.as_symbol();
    case Value::Kind::Str:
      return nlohmann::json(v.as_string()).dump();
    case Value::Kind::Addr:
      return "@" + std::to_string(v.as_address().id());
    case Value::Kind::List: {
      std::string out = "[";
      bool first = true;
      for (const auto& item : v.as_list()) {
        if (!first) out += ", ";
        first = false;
        out += to_string(item);
      }
      return out + "]";
    }
  }
  return {};
}

namespace {

nlohmann::ordered_json to_json(const Value& v) {
  using J = nlohmann::ordered_json;
  switch (v.kind()) {
    case Value::Kind::Void:
      return nullptr;
    case Value::Kind::Integer:
      return v.as_integer();
    case Value::Kind::Boolean:
      return v.as_boolean();
    case Value::Kind::Symbol:
      return J{{"sym", v.as_symbol()}};
    case Value::Kind::Str:
      return v.as_string();
    case Value::Kind::Addr:
      return J{{"addr", v.as_address().id()}};
    case Value::Kind::List: {
      J arr = J::array();
      for (const auto& item : v.as_list()) arr.push_back(to_json(item));
      return arr;
    }
  }
  return nullptr;
}

}  // namespace

std::string to_json_text(const Value& v) { return to_json(v).dump(); }

}  // namespace actorsim
