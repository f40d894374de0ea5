#pragma once

#include <stdexcept>
#include <string>

namespace icc {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class CycleError : public Error {
 public:
  explicit CycleError(const std::string& node)
      : Error("cycle detected through node '" + node + "'"), node_(node) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(const std::string& node)
      : Error("unknown node '" + node + "'") {}
};

class UnknownEdge : public Error {
 public:
  UnknownEdge(const std::string& tail, const std::string& head)
      : Error("no edge " + tail + " -> " + head) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class TypeError : public Error {
 public:
  explicit TypeError(const std::string& msg) : Error(msg) {}
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(const std::string& sym)
      : Error("unknown symbol '" + sym + "'") {}
};

class NotFinite : public Error {
 public:
  explicit NotFinite(const std::string& msg) : Error(msg) {}
};

class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& msg) : Error(msg) {}
};

class BadDistribution : public Error {
 public:
  explicit BadDistribution(const std::string& msg) : Error(msg) {}
};

class SupportMismatch : public Error {
 public:
  explicit SupportMismatch(const std::string& msg) : Error(msg) {}
};

class ContinuousEntropyUnsupported : public Error {
 public:
  ContinuousEntropyUnsupported()
      : Error("entropy is only defined for finite-support targets; "
              "use the variance measure for continuous models") {}
};

class TooManyPlayers : public Error {
 public:
  explicit TooManyPlayers(const std::string& msg) : Error(msg) {}
};

class PrefixMismatch : public Error {
 public:
  explicit PrefixMismatch(const std::string& msg) : Error(msg) {}
};

class InvalidAbstraction : public Error {
 public:
  explicit InvalidAbstraction(const std::string& msg) : Error(msg) {}
};

class InvalidBoundary : public Error {
 public:
  explicit InvalidBoundary(const std::string& msg) : Error(msg) {}
};

class PathCapExceeded : public Error {
 public:
  explicit PathCapExceeded(const std::string& msg) : Error(msg) {}
};

class OverlapError : public Error {
 public:
  explicit OverlapError(const std::string& msg) : Error(msg) {}
};

class NonNumericTarget : public Error {
 public:
  explicit NonNumericTarget(const std::string& msg) : Error(msg) {}
};

class ModelError : public Error {
 public:
  explicit ModelError(const std::string& msg) : Error(msg) {}
};

}  // namespace icc
