#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace actorsim {

class Configuration;
class BehaviorContext;

/// Handle that permits sending messages to one actor.
///
/// Addresses are minted only by the kernel (actor creation); there is no
/// public way to turn an integer into an Address. The ordinal is readable
/// for tracing and ordering.
class Address {
 public:
  std::uint64_t id() const noexcept { return id_; }

  friend bool operator==(const Address&, const Address&) = default;
  friend auto operator<=>(const Address&, const Address&) = default;

 private:
  explicit Address(std::uint64_t id) noexcept : id_(id) {}

  std::uint64_t id_;

  friend class Configuration;
  friend class BehaviorContext;
};

struct Symbol {
  std::string name;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Immutable message/state payload.
class Value {
 public:
  enum class Kind { Void, Integer, Boolean, Symbol, Str, List, Addr };
  using List = std::vector<Value>;

  Value() = default;

  static Value integer(std::int64_t v);
  static Value boolean(bool v);
  static Value symbol(std::string name);
  static Value string(std::string s);
  static Value list(List items);
  static Value list(std::initializer_list<Value> items);
  static Value address(Address a);

  Kind kind() const noexcept { return static_cast<Kind>(rep_.index()); }
  bool is_void() const noexcept { return kind() == Kind::Void; }
  bool is_integer() const noexcept { return kind() == Kind::Integer; }
  bool is_boolean() const noexcept { return kind() == Kind::Boolean; }
  bool is_symbol() const noexcept { return kind() == Kind::Symbol; }
  bool is_symbol(std::string_view name) const noexcept;
  bool is_string() const noexcept { return kind() == Kind::Str; }
  bool is_list() const noexcept { return kind() == Kind::List; }
  bool is_address() const noexcept { return kind() == Kind::Addr; }

  // Accessors throw std::bad_variant_access on a kind mismatch.
  std::int64_t as_integer() const;
  bool as_boolean() const;
  const std::string& as_symbol() const;
  const std::string& as_string() const;
  const List& as_list() const;
  Address as_address() const;

  /// List element access; throws std::out_of_range.
  const Value& at(std::size_t i) const;
  std::size_t size() const;

  /// First symbol of a message, e.g. `withdraw` in [withdraw, 7], or the
  /// bare symbol itself. Empty when the payload has no selector.
  std::string_view selector() const noexcept;

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  using ListPtr = std::shared_ptr<const List>;
  using Rep = std::variant<std::monostate, std::int64_t, bool, Symbol,
                           std::string, ListPtr, Address>;

  explicit Value(Rep rep) : rep_(std::move(rep)) {}

  Rep rep_;
};

/// Every address occurring anywhere inside `v`.
std::set<Address> addresses(const Value& v);
void collect_addresses(const Value& v, std::set<Address>& out);

std::string to_string(const Value& v);

/// Canonical JSON rendering used in trace files:
/// null, integers, booleans, strings, arrays, {"sym":..}, {"addr":N}.
std::string to_json_text(const Value& v);

}  // namespace actorsim
