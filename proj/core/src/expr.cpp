#include "icc/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "icc/errors.hpp"

namespace icc {
namespace {

// ---------------------------------------------------------------- lexer

enum class Tok {
  Number, Noise, Parent, Ident,
  Plus, Minus, Star, Slash, Mod,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or, Not, Xor,
  LParen, RParen, Comma,
  End,
};

struct Token {
  Tok kind;
  std::string text;   // identifier / parent name
  Value number;       // for Tok::Number
  int line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      bump();
    cur_ = Token{};
    cur_.line = line_;
    cur_.column = col_;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::End;
      return;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      lex_word();
      return;
    }
    switch (c) {
      case '+': bump(); cur_.kind = Tok::Plus; return;
      case '-': bump(); cur_.kind = Tok::Minus; return;
      case '*': bump(); cur_.kind = Tok::Star; return;
      case '/': bump(); cur_.kind = Tok::Slash; return;
      case '(': bump(); cur_.kind = Tok::LParen; return;
      case ')': bump(); cur_.kind = Tok::RParen; return;
      case ',': bump(); cur_.kind = Tok::Comma; return;
      case '=':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          bump();
          cur_.kind = Tok::Eq;
          return;
        }
        throw ParseError("expected '==' ", cur_.line, cur_.column);
      case '!':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          bump();
          cur_.kind = Tok::Ne;
          return;
        }
        throw ParseError("expected '!='", cur_.line, cur_.column);
      case '<':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          bump();
          cur_.kind = Tok::Le;
        } else {
          cur_.kind = Tok::Lt;
        }
        return;
      case '>':
        bump();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          bump();
          cur_.kind = Tok::Ge;
        } else {
          cur_.kind = Tok::Gt;
        }
        return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         cur_.line, cur_.column);
    }
  }

  void lex_number() {
    size_t start = pos_;
    bool real = false;
    while (pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_])))
      bump();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      real = true;
      bump();
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        bump();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      real = true;
      bump();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
        bump();
      if (pos_ >= src_.size() ||
          !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        throw ParseError("malformed exponent", cur_.line, cur_.column);
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        bump();
    }
    std::string text = src_.substr(start, pos_ - start);
    cur_.kind = Tok::Number;
    if (real)
      cur_.number = Value(std::stod(text));
    else
      cur_.number = Value(static_cast<int64_t>(std::stoll(text)));
  }

  void lex_word() {
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
      bump();
    std::string word = src_.substr(start, pos_ - start);
    if (word == "pa" && pos_ < src_.size() && src_[pos_] == '.') {
      bump();
      size_t nstart = pos_;
      if (pos_ >= src_.size() ||
          !(std::isalpha(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
        throw ParseError("expected parent name after 'pa.'", cur_.line,
                         cur_.column);
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        bump();
      cur_.kind = Tok::Parent;
      cur_.text = src_.substr(nstart, pos_ - nstart);
      return;
    }
    if (word == "n") { cur_.kind = Tok::Noise; return; }
    if (word == "and") { cur_.kind = Tok::And; return; }
    if (word == "or") { cur_.kind = Tok::Or; return; }
    if (word == "not") { cur_.kind = Tok::Not; return; }
    if (word == "xor") { cur_.kind = Tok::Xor; return; }
    if (word == "mod") { cur_.kind = Tok::Mod; return; }
    cur_.kind = Tok::Ident;
    cur_.text = word;
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
};

// --------------------------------------------------------------- parser

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  ExprPtr parse_full() {
    ExprPtr e = parse_or();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End)
      throw ParseError("unexpected trailing input", t.line, t.column);
    return e;
  }

 private:
  ExprPtr parse_or() {
    ExprPtr lhs = parse_xor();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      lhs = make({Binary{BinOp::Or, lhs, parse_xor()}});
    }
    return lhs;
  }

  ExprPtr parse_xor() {
    ExprPtr lhs = parse_and();
    while (lex_.peek().kind == Tok::Xor) {
      lex_.take();
      lhs = make({Binary{BinOp::Xor, lhs, parse_and()}});
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      lhs = make({Binary{BinOp::And, lhs, parse_not()}});
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (lex_.peek().kind == Tok::Not) {
      lex_.take();
      return make({Unary{UnOp::Not, parse_not()}});
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_add();
    BinOp op;
    switch (lex_.peek().kind) {
      case Tok::Eq: op = BinOp::Eq; break;
      case Tok::Ne: op = BinOp::Ne; break;
      case Tok::Lt: op = BinOp::Lt; break;
      case Tok::Le: op = BinOp::Le; break;
      case Tok::Gt: op = BinOp::Gt; break;
      case Tok::Ge: op = BinOp::Ge; break;
      default: return lhs;
    }
    lex_.take();
    return make({Binary{op, lhs, parse_add()}});
  }

  ExprPtr parse_add() {
    ExprPtr lhs = parse_mul();
    for (;;) {
      Tok k = lex_.peek().kind;
      if (k == Tok::Plus) {
        lex_.take();
        lhs = make({Binary{BinOp::Add, lhs, parse_mul()}});
      } else if (k == Tok::Minus) {
        lex_.take();
        lhs = make({Binary{BinOp::Sub, lhs, parse_mul()}});
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      Tok k = lex_.peek().kind;
      BinOp op;
      if (k == Tok::Star) op = BinOp::Mul;
      else if (k == Tok::Slash) op = BinOp::Div;
      else if (k == Tok::Mod) op = BinOp::Mod;
      else return lhs;
      lex_.take();
      lhs = make({Binary{op, lhs, parse_unary()}});
    }
  }

  ExprPtr parse_unary() {
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      return make({Unary{UnOp::Neg, parse_unary()}});
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::Number:
        return make({Literal{t.number}});
      case Tok::Noise:
        return make({NoiseRef{}});
      case Tok::Parent:
        return make({ParentRef{t.text}});
      case Tok::LParen: {
        ExprPtr e = parse_or();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        Builtin fn;
        size_t min_args, max_args;
        if (t.text == "max") { fn = Builtin::Max; min_args = 1; max_args = 64; }
        else if (t.text == "min") { fn = Builtin::Min; min_args = 1; max_args = 64; }
        else if (t.text == "abs") { fn = Builtin::Abs; min_args = 1; max_args = 1; }
        else if (t.text == "floor") { fn = Builtin::Floor; min_args = 1; max_args = 1; }
        else if (t.text == "if") { fn = Builtin::If; min_args = 3; max_args = 3; }
        else
          throw ParseError("unknown identifier '" + t.text +
                               "' (expected n, pa.<name>, or a builtin)",
                           t.line, t.column);
        expect(Tok::LParen, "'('");
        std::vector<ExprPtr> args;
        if (lex_.peek().kind != Tok::RParen) {
          args.push_back(parse_or());
          while (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            args.push_back(parse_or());
          }
        }
        expect(Tok::RParen, "')'");
        if (args.size() < min_args || args.size() > max_args)
          throw ParseError("wrong number of arguments to " + t.text, t.line,
                           t.column);
        return make({Call{fn, std::move(args)}});
      }
      case Tok::End:
        throw ParseError("unexpected end of input (expected an expression)",
                         t.line, t.column);
      default:
        throw ParseError("unexpected token (expected an expression)", t.line,
                         t.column);
    }
  }

  void expect(Tok kind, const std::string& what) {
    Token t = lex_.take();
    if (t.kind != kind)
      throw ParseError("expected " + what, t.line, t.column);
  }

  Lexer lex_;
};

// ------------------------------------------------------------ evaluator

int64_t require_bool(const Value& v, const char* ctx) {
  if (!v.is_int() || (v.as_int() != 0 && v.as_int() != 1))
    throw TypeError(std::string(ctx) + " requires a 0/1 operand, got " +
                    v.str());
  return v.as_int();
}

Value numeric_binary(BinOp op, const Value& a, const Value& b) {
  if (!a.is_numeric() || !b.is_numeric())
    throw TypeError("arithmetic on categorical label");
  bool both_int = a.is_int() && b.is_int();
  switch (op) {
    case BinOp::Add:
      return both_int ? Value(a.as_int() + b.as_int())
                      : Value(a.as_real() + b.as_real());
    case BinOp::Sub:
      return both_int ? Value(a.as_int() - b.as_int())
                      : Value(a.as_real() - b.as_real());
    case BinOp::Mul:
      return both_int ? Value(a.as_int() * b.as_int())
                      : Value(a.as_real() * b.as_real());
    case BinOp::Div: {
      // Division always promotes to real.
      double d = b.as_real();
      if (d == 0.0) throw DivisionByZero();
      return Value(a.as_real() / d);
    }
    case BinOp::Mod: {
      if (!both_int) throw TypeError("mod requires integer operands");
      int64_t d = b.as_int();
      if (d == 0) throw DivisionByZero();
      int64_t r = a.as_int() % d;
      if (r != 0 && ((r < 0) != (d < 0))) r += d;  // floored modulo
      return Value(r);
    }
    default:
      throw TypeError("not an arithmetic operator");
  }
}

Value compare(BinOp op, const Value& a, const Value& b) {
  if (op == BinOp::Eq || op == BinOp::Ne) {
    bool eq;
    if (a.is_label() || b.is_label())
      eq = a.is_label() && b.is_label() && a.as_label() == b.as_label();
    else
      eq = a.as_real() == b.as_real();
    return Value(int64_t{(op == BinOp::Eq) == eq});
  }
  if (!a.is_numeric() || !b.is_numeric())
    throw TypeError("ordering comparison on categorical label");
  double x = a.as_real(), y = b.as_real();
  bool r;
  switch (op) {
    case BinOp::Lt: r = x < y; break;
    case BinOp::Le: r = x <= y; break;
    case BinOp::Gt: r = x > y; break;
    case BinOp::Ge: r = x >= y; break;
    default: throw TypeError("not a comparison");
  }
  return Value(int64_t{r});
}

struct Evaluator {
  const std::map<std::string, Value>& parents;
  const Value& noise;

  Value operator()(const Literal& l) const { return l.value; }
  Value operator()(const NoiseRef&) const { return noise; }
  Value operator()(const ParentRef& p) const {
    auto it = parents.find(p.name);
    if (it == parents.end()) throw UnknownSymbol("pa." + p.name);
    return it->second;
  }
  Value operator()(const Unary& u) const {
    Value v = run(u.operand);
    if (u.op == UnOp::Not) return Value(int64_t{1 - require_bool(v, "not")});
    if (v.is_int()) return Value(-v.as_int());
    return Value(-v.as_real());
  }
  Value operator()(const Binary& b) const {
    switch (b.op) {
      case BinOp::And: {
        int64_t l = require_bool(run(b.lhs), "and");
        int64_t r = require_bool(run(b.rhs), "and");
        return Value(l & r);
      }
      case BinOp::Or: {
        int64_t l = require_bool(run(b.lhs), "or");
        int64_t r = require_bool(run(b.rhs), "or");
        return Value(l | r);
      }
      case BinOp::Xor: {
        Value l = run(b.lhs), r = run(b.rhs);
        if (!l.is_int() || !r.is_int())
          throw TypeError("xor requires integer operands");
        return Value(l.as_int() ^ r.as_int());
      }
      case BinOp::Eq: case BinOp::Ne: case BinOp::Lt:
      case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
        return compare(b.op, run(b.lhs), run(b.rhs));
      default:
        return numeric_binary(b.op, run(b.lhs), run(b.rhs));
    }
  }
  Value operator()(const Call& c) const {
    switch (c.fn) {
      case Builtin::If: {
        int64_t cond = require_bool(run(c.args[0]), "if condition");
        return run(cond ? c.args[1] : c.args[2]);
      }
      case Builtin::Abs: {
        Value v = run(c.args[0]);
        if (v.is_int()) return Value(v.as_int() < 0 ? -v.as_int() : v.as_int());
        return Value(std::fabs(v.as_real()));
      }
      case Builtin::Floor: {
        Value v = run(c.args[0]);
        if (v.is_int()) return v;
        return Value(static_cast<int64_t>(std::floor(v.as_real())));
      }
      case Builtin::Max:
      case Builtin::Min: {
        Value best = run(c.args[0]);
        if (!best.is_numeric()) throw TypeError("max/min on categorical label");
        for (size_t i = 1; i < c.args.size(); ++i) {
          Value v = run(c.args[i]);
          if (!v.is_numeric()) throw TypeError("max/min on categorical label");
          bool take = c.fn == Builtin::Max ? v.as_real() > best.as_real()
                                           : v.as_real() < best.as_real();
          if (take) best = v;
          else if (v.as_real() == best.as_real() && best.is_int() && v.is_real())
            best = v;  // promote on mixed-type tie
        }
        return best;
      }
    }
    throw TypeError("unknown builtin");
  }

  Value run(const ExprPtr& e) const { return std::visit(*this, e->node); }
};

// -------------------------------------------------------------- printer

int precedence(const Expr& e) {
  struct V {
    int operator()(const Literal&) const { return 9; }
    int operator()(const NoiseRef&) const { return 9; }
    int operator()(const ParentRef&) const { return 9; }
    int operator()(const Call&) const { return 9; }
    int operator()(const Unary& u) const { return u.op == UnOp::Not ? 4 : 8; }
    int operator()(const Binary& b) const {
      switch (b.op) {
        case BinOp::Or: return 1;
        case BinOp::Xor: return 2;
        case BinOp::And: return 3;
        case BinOp::Eq: case BinOp::Ne: case BinOp::Lt:
        case BinOp::Le: case BinOp::Gt: case BinOp::Ge: return 5;
        case BinOp::Add: case BinOp::Sub: return 6;
        default: return 7;
      }
    }
  };
  return std::visit(V{}, e.node);
}

const char* op_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "mod";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
    case BinOp::Xor: return "xor";
  }
  return "?";
}

std::string print_prec(const ExprPtr& e, int min_prec);

struct Printer {
  int self;

  std::string operator()(const Literal& l) const { return l.value.str(); }
  std::string operator()(const NoiseRef&) const { return "n"; }
  std::string operator()(const ParentRef& p) const { return "pa." + p.name; }
  std::string operator()(const Unary& u) const {
    std::string op = u.op == UnOp::Not ? "not " : "-";
    return op + print_prec(u.operand, self);
  }
  std::string operator()(const Binary& b) const {
    return print_prec(b.lhs, self) + " " + op_text(b.op) + " " +
           print_prec(b.rhs, self + 1);
  }
  std::string operator()(const Call& c) const {
    const char* name = "";
    switch (c.fn) {
      case Builtin::Max: name = "max"; break;
      case Builtin::Min: name = "min"; break;
      case Builtin::Abs: name = "abs"; break;
      case Builtin::Floor: name = "floor"; break;
      case Builtin::If: name = "if"; break;
    }
    std::string out = std::string(name) + "(";
    for (size_t i = 0; i < c.args.size(); ++i) {
      if (i) out += ", ";
      out += print_prec(c.args[i], 0);
    }
    return out + ")";
  }
};

std::string print_prec(const ExprPtr& e, int min_prec) {
  int p = precedence(*e);
  std::string body = std::visit(Printer{p}, e->node);
  if (p < min_prec) return "(" + body + ")";
  return body;
}

}  // namespace

ExprPtr parse(const std::string& source) {
  return Parser(source).parse_full();
}

Value eval(const ExprPtr& expr, const std::map<std::string, Value>& parents,
           const Value& noise) {
  return Evaluator{parents, noise}.run(expr);
}

std::set<std::string> free_symbols(const ExprPtr& expr) {
  std::set<std::string> out;
  struct V {
    std::set<std::string>& out;
    void run(const ExprPtr& e) {
      std::visit(
          [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NoiseRef>) {
              out.insert("n");
            } else if constexpr (std::is_same_v<T, ParentRef>) {
              out.insert("pa." + node.name);
            } else if constexpr (std::is_same_v<T, Unary>) {
              run(node.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
              run(node.lhs);
              run(node.rhs);
            } else if constexpr (std::is_same_v<T, Call>) {
              for (const auto& a : node.args) run(a);
            }
          },
          e->node);
    }
  } v{out};
  v.run(expr);
  return out;
}

std::string print(const ExprPtr& expr) { return print_prec(expr, 0); }

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  struct V {
    const Expr& other;
    bool operator()(const Literal& l) const {
      return l.value == std::get<Literal>(other.node).value;
    }
    bool operator()(const NoiseRef&) const { return true; }
    bool operator()(const ParentRef& p) const {
      return p.name == std::get<ParentRef>(other.node).name;
    }
    bool operator()(const Unary& u) const {
      const auto& o = std::get<Unary>(other.node);
      return u.op == o.op && equal(u.operand, o.operand);
    }
    bool operator()(const Binary& b) const {
      const auto& o = std::get<Binary>(other.node);
      return b.op == o.op && equal(b.lhs, o.lhs) && equal(b.rhs, o.rhs);
    }
    bool operator()(const Call& c) const {
      const auto& o = std::get<Call>(other.node);
      if (c.fn != o.fn || c.args.size() != o.args.size()) return false;
      for (size_t i = 0; i < c.args.size(); ++i)
        if (!equal(c.args[i], o.args[i])) return false;
      return true;
    }
  };
  return std::visit(V{*b}, a->node);
}

ExprPtr substitute_parent(const ExprPtr& expr, const std::string& from,
                          const std::string& to) {
  struct V {
    const std::string& from;
    const std::string& to;
    ExprPtr run(const ExprPtr& e) const {
      return std::visit(
          [&](const auto& node) -> ExprPtr {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, ParentRef>) {
              if (node.name == from)
                return std::make_shared<const Expr>(Expr{ParentRef{to}});
              return e;
            } else if constexpr (std::is_same_v<T, Unary>) {
              return std::make_shared<const Expr>(
                  Expr{Unary{node.op, run(node.operand)}});
            } else if constexpr (std::is_same_v<T, Binary>) {
              return std::make_shared<const Expr>(
                  Expr{Binary{node.op, run(node.lhs), run(node.rhs)}});
            } else if constexpr (std::is_same_v<T, Call>) {
              std::vector<ExprPtr> args;
              args.reserve(node.args.size());
              for (const auto& a : node.args) args.push_back(run(a));
              return std::make_shared<const Expr>(
                  Expr{Call{node.fn, std::move(args)}});
            } else {
              return e;
            }
          },
          e->node);
    }
  } v{from, to};
  return v.run(expr);
}

}  // namespace icc
