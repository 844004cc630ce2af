#pragma once

#include <cstdint>
#include <string>

namespace cclab {

// Runtime value of the subject language: 64-bit integer or boolean.
struct Value {
  enum class Kind : std::uint8_t { Int, Bool };

  Kind kind = Kind::Int;
  std::int64_t i = 0;
  bool b = false;

  static Value integer(std::int64_t v) {
    Value out;
    out.kind = Kind::Int;
    out.i = v;
    return out;
  }
  static Value boolean(bool v) {
    Value out;
    out.kind = Kind::Bool;
    out.b = v;
    return out;
  }

  bool is_int() const { return kind == Kind::Int; }
  bool is_bool() const { return kind == Kind::Bool; }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.kind != b.kind) return false;
    return a.kind == Kind::Int ? a.i == b.i : a.b == b.b;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
};

inline std::string to_string(const Value& v) {
  return v.is_int() ? std::to_string(v.i) : (v.b ? "true" : "false");
}

}  // namespace cclab
