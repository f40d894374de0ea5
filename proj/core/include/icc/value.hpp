#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace icc {

// Tagged scalar: integer, real, or categorical label. Arithmetic is defined
// on integers and reals only; labels participate in ==, != and if().
class Value {
 public:
  Value() : v_(int64_t{0}) {}
  Value(int64_t i) : v_(i) {}
  Value(int i) : v_(int64_t{i}) {}
  Value(double d) : v_(d) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(const char* s) : v_(std::string(s)) {}

  bool is_int() const { return std::holds_alternative<int64_t>(v_); }
  bool is_real() const { return std::holds_alternative<double>(v_); }
  bool is_label() const { return std::holds_alternative<std::string>(v_); }
  bool is_numeric() const { return !is_label(); }

  int64_t as_int() const;
  // Numeric value widened to double; throws TypeError on labels.
  double as_real() const;
  const std::string& as_label() const;

  // Structural equality: same tag and same payload. Numeric cross-tag
  // comparison (1 == 1.0) is handled by the evaluator, not here.
  friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }
  friend bool operator<(const Value& a, const Value& b) { return a.v_ < b.v_; }

  std::string str() const;

 private:
  std::variant<int64_t, double, std::string> v_;
};

}  // namespace icc
