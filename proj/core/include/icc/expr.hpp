#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "icc/value.hpp"

namespace icc {

// AST for the structural-equation DSL. Symbols are either "n" (the node's
// own noise) or "pa.<name>" (a parent value).
//
// Precedence, loosest to tightest:
//   or < xor < and < not < comparisons < + - < * / mod < unary - < atoms
// Comparisons yield 0/1; and/or/not/xor/if-conditions require 0/1 operands
// (xor additionally accepts arbitrary integers, bitwise).

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinOp {
  Add, Sub, Mul, Div, Mod,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or, Xor,
};

enum class UnOp { Neg, Not };

enum class Builtin { Max, Min, Abs, Floor, If };

struct Literal { Value value; };
struct NoiseRef {};
struct ParentRef { std::string name; };
struct Unary { UnOp op; ExprPtr operand; };
struct Binary { BinOp op; ExprPtr lhs, rhs; };
struct Call { Builtin fn; std::vector<ExprPtr> args; };

struct Expr {
  std::variant<Literal, NoiseRef, ParentRef, Unary, Binary, Call> node;
};

// Throws ParseError with line/column on malformed input.
ExprPtr parse(const std::string& source);

// Deterministic evaluation; throws TypeError, DivisionByZero, UnknownSymbol.
Value eval(const ExprPtr& expr, const std::map<std::string, Value>& parents,
           const Value& noise);

// Symbol references occurring in the AST: "n" and/or "pa.<name>" strings.
std::set<std::string> free_symbols(const ExprPtr& expr);

// Precedence-aware pretty printer; print(parse(s)) re-parses to an equal AST.
std::string print(const ExprPtr& expr);

bool equal(const ExprPtr& a, const ExprPtr& b);

// Rewrites every pa.<from> reference to pa.<to>.
ExprPtr substitute_parent(const ExprPtr& expr, const std::string& from,
                          const std::string& to);

}  // namespace icc
