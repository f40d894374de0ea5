#include "icc/value.hpp"

#include <cmath>
#include <cstdio>

#include "icc/errors.hpp"

namespace icc {

int64_t Value::as_int() const {
  if (!is_int()) throw TypeError("expected integer, got " + str());
  return std::get<int64_t>(v_);
}

double Value::as_real() const {
  if (is_int()) return static_cast<double>(std::get<int64_t>(v_));
  if (is_real()) return std::get<double>(v_);
  throw TypeError("expected numeric value, got label '" + str() + "'");
}

const std::string& Value::as_label() const {
  if (!is_label()) throw TypeError("expected label, got " + str());
  return std::get<std::string>(v_);
}

std::string Value::str() const {
  if (is_int()) return std::to_string(std::get<int64_t>(v_));
  if (is_label()) return std::get<std::string>(v_);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(v_));
  return buf;
}

}  // namespace icc
