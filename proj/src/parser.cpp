#include "bvtrace/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <variant>

#include "bvtrace/errors.hpp"

namespace bvtrace {
namespace {

struct Token {
  enum class Kind { number, ident, op, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(std::string_view s) {
  if (s.size() > kMaxInputBytes) throw ParseError("input exceeds " + std::to_string(kMaxInputBytes) + " bytes", 1, 1);
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      auto is_op = [&](std::size_t back, char op) {
        return out.size() >= back && out[out.size() - back].kind == Token::Kind::op && out[out.size() - back].text[0] == op;
      };
      // exponents are integers, so "x^2/3" divides x^2 by 3
      bool exponent = is_op(1, '^') || (is_op(1, '-') && is_op(2, '^'));
      if (!exponent && j + 1 < s.size() && s[j] == '/' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      t.kind = Token::Kind::number;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Token::Kind::ident;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (std::string_view("+-*/^|():").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::op;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Node parse() {
    Node n = chain();
    if (peek().kind != Token::Kind::end) fail("unexpected '" + peek().text + "'");
    return n;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool is_op(const char* op, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::op && peek(ahead).text == op;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.kind == Token::Kind::end ? msg + " (end of input)" : msg, t.line, t.column);
  }
  Node make(Node::Kind k, const Token& at) const {
    Node n;
    n.kind = k;
    n.line = at.line;
    n.column = at.column;
    return n;
  }
  void expect(const char* op) {
    if (!is_op(op)) fail(std::string("expected '") + op + "'");
    ++pos_;
  }

  Node chain() {
    const Token& start = peek();
    Node first = sum();
    if (!is_op("|")) return first;
    Node c = make(Node::Kind::chain, start);
    c.kids.push_back(std::move(first));
    while (is_op("|")) {
      ++pos_;
      c.kids.push_back(sum());
    }
    return c;
  }

  Node sum() {
    Node left = unary();
    while (is_op("+") || is_op("-")) {
      Node n = make(is_op("+") ? Node::Kind::add : Node::Kind::sub, peek());
      ++pos_;
      n.kids.push_back(std::move(left));
      n.kids.push_back(unary());
      left = std::move(n);
    }
    return left;
  }

  Node unary() {
    if (is_op("-")) {
      Node n = make(Node::Kind::neg, peek());
      ++pos_;
      n.kids.push_back(unary());
      return n;
    }
    return product();
  }

  Node product() {
    Node left = power();
    while (is_op("*") || is_op("/")) {
      bool divide = is_op("/");
      Node n = make(Node::Kind::mul, peek());
      ++pos_;
      n.kids.push_back(std::move(left));
      if (divide) {
        // only division by a rational literal
        const Token& t = peek();
        if (t.kind != Token::Kind::number) fail("expected a number after '/'");
        Rational d = Rational::parse(t.text);
        if (d.is_zero()) fail("division by zero");
        Node k = make(Node::Kind::number, t);
        k.value = d.inverse();
        ++pos_;
        n.kids.push_back(std::move(k));
      } else {
        n.kids.push_back(power());
      }
      left = std::move(n);
    }
    return left;
  }

  int integer_after_caret() {
    bool neg = false;
    if (is_op("-")) {
      neg = true;
      ++pos_;
    }
    const Token& t = peek();
    if (t.kind != Token::Kind::number || t.text.find('/') != std::string::npos) fail("expected integer exponent");
    if (t.text.size() > 6) fail("exponent too large");
    ++pos_;
    int v = std::stoi(t.text);
    return neg ? -v : v;
  }

  Node power() {
    Node left = atom();
    while (is_op("^")) {
      const Token& at = peek();
      ++pos_;
      if (peek().kind == Token::Kind::number || (is_op("-") && peek(1).kind == Token::Kind::number)) {
        Node n = make(Node::Kind::pow, at);
        n.exponent = integer_after_caret();
        n.kids.push_back(std::move(left));
        left = std::move(n);
      } else {
        Node n = make(Node::Kind::wedge, at);
        n.kids.push_back(std::move(left));
        n.kids.push_back(atom());
        left = std::move(n);
      }
    }
    return left;
  }

  // "D^k name", "D name" or "name"
  LegSyntax leg() {
    const Token& t = peek();
    if (t.kind != Token::Kind::ident) fail("expected field name");
    LegSyntax l{t.text, 0, t.line, t.column};
    if (t.text == "D" && (is_op("^", 1) || peek(1).kind == Token::Kind::ident)) {
      ++pos_;
      l.k = 1;
      if (is_op("^")) {
        ++pos_;
        l.k = integer_after_caret();
        if (l.k < 0 || l.k > 255) fail("derivative order out of range");
      }
      if (peek().kind != Token::Kind::ident) fail("expected field name after D");
      l.name = peek().text;
      l.line = peek().line;
      l.column = peek().column;
    }
    ++pos_;
    return l;
  }

  Node atom() {
    const Token& t = peek();
    if (t.kind == Token::Kind::number) {
      Node n = make(Node::Kind::number, t);
      if (auto slash = t.text.find('/');
          slash != std::string::npos && t.text.find_first_not_of('0', slash + 1) == std::string::npos)
        fail("zero denominator");
      n.value = Rational::parse(t.text);
      ++pos_;
      return n;
    }
    if (t.kind == Token::Kind::ident) {
      if (t.text == "D" && ((is_op("^", 1) && peek(2).kind == Token::Kind::number && peek(3).kind == Token::Kind::ident) ||
                            peek(1).kind == Token::Kind::ident)) {
        Node n = make(Node::Kind::normal, t);
        n.legs.push_back(leg());
        return n;
      }
      Node n = make(Node::Kind::symbol, t);
      n.name = t.text;
      ++pos_;
      return n;
    }
    if (is_op("(")) {
      ++pos_;
      Node inner = chain();
      expect(")");
      return inner;
    }
    if (is_op(":")) {
      Node n = make(Node::Kind::normal, t);
      ++pos_;
      while (!is_op(":")) {
        if (peek().kind == Token::Kind::end) fail("unterminated ': ... :' product");
        n.legs.push_back(leg());
      }
      ++pos_;
      return n;
    }
    fail(t.kind == Token::Kind::end ? "expected an operand" : "unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail_at(const Node& n, const std::string& msg) { throw ParseError(msg, n.line, n.column); }

[[noreturn]] void unknown(const Node& n, const std::vector<std::string>& table) {
  std::string known;
  for (const auto& s : table) known += (known.empty() ? "" : ", ") + s;
  fail_at(n, "unknown identifier '" + n.name + "' (known: " + known + ")");
}

// Generic tree walk; Alg supplies the value type and the operations.
template <class Alg>
typename Alg::Value eval(const Node& n, Alg& alg) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::number:
      return alg.number(n.value);
    case K::symbol:
      return alg.symbol(n);
    case K::add:
      return alg.add(eval(n.kids[0], alg), eval(n.kids[1], alg), n);
    case K::sub:
      return alg.add(eval(n.kids[0], alg), alg.neg(eval(n.kids[1], alg)), n);
    case K::neg:
      return alg.neg(eval(n.kids[0], alg));
    case K::mul:
      return alg.mul(eval(n.kids[0], alg), eval(n.kids[1], alg), n);
    case K::pow:
      return alg.pow(eval(n.kids[0], alg), n.exponent, n);
    case K::wedge:
      return alg.wedge(eval(n.kids[0], alg), eval(n.kids[1], alg), n);
    case K::chain: {
      std::vector<typename Alg::Value> slots;
      for (const auto& k : n.kids) slots.push_back(eval(k, alg));
      return alg.chain(std::move(slots), n);
    }
    case K::normal:
      return alg.normal(n);
  }
  fail_at(n, "bad expression");
}

// Shared defaults: no wedges, chains or fields.
struct NoExtras {
  template <class V>
  [[noreturn]] V wedge_unsupported(const Node& n) const {
    fail_at(n, "wedge '^' is not available here");
  }
};

template <class V>
V repeated_power(const V& x, int k, const V& one, const Node& n) {
  if (k < 0) fail_at(n, "negative powers are only allowed for h and u");
  if (k > 64) fail_at(n, "exponent too large");
  V r = one;
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

std::optional<int> weyl_index(const std::string& name, int n, std::string_view prefix_p, std::string_view prefix_q) {
  auto num = [&](std::string_view prefix) -> std::optional<int> {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
    std::string digits = name.substr(prefix.size());
    if (digits.size() > 3 || digits[0] == '0') return std::nullopt;
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    return std::stoi(digits);
  };
  if (auto i = num(prefix_p); i && *i >= 1 && *i <= n) return *i - 1;
  if (auto i = num(prefix_q); i && *i >= 1 && *i <= n) return n + *i - 1;
  return std::nullopt;
}

std::vector<std::string> weyl_table(int n, bool forms) {
  auto names = weyl_variable_names(n);
  if (forms)
    for (int a = 0; a < 2 * n; ++a) names.push_back("d" + weyl_variable_names(n)[a]);
  names.push_back("h");
  return names;
}

// A pure h^a monomial with coefficient 1, if w is one.
std::optional<int> pure_h_power(const WeylElement& w) {
  if (w.terms().size() != 1) return std::nullopt;
  const auto& t = w.terms().front();
  if (!t.m.is_one() || !t.c.is_one()) return std::nullopt;
  return t.h;
}

struct WeylAlg {
  using Value = WeylElement;
  int n, order;
  Value number(const Rational& r) const { return WeylElement::constant(n, order, r); }
  Value symbol(const Node& s) const {
    if (s.name == "h") return WeylElement::monomial(n, order, Monomial{}, Rational(1), 1);
    if (auto i = weyl_index(s.name, n, "p", "q")) return WeylElement::variable(n, order, *i);
    unknown(s, weyl_table(n, false));
  }
  Value add(const Value& a, const Value& b, const Node&) const { return a + b; }
  Value neg(const Value& a) const { return -a; }
  Value mul(const Value& a, const Value& b, const Node&) const { return a.pointwise(b); }
  Value pow(const Value& a, int k, const Node& nd) const {
    if (auto h = pure_h_power(a)) return WeylElement::monomial(n, order, Monomial{}, Rational(1), *h * k);
    if (k < 0) fail_at(nd, "negative powers are only allowed for h");
    if (k > 255) fail_at(nd, "exponent too large");
    Value r = number(Rational(1));
    for (int i = 0; i < k; ++i) r = r.pointwise(a);
    return r;
  }
  Value wedge(const Value&, const Value&, const Node& nd) const { fail_at(nd, "wedge '^' needs form inputs"); }
  Value chain(std::vector<Value>, const Node& nd) const { fail_at(nd, "'|' is only valid in chain inputs"); }
  Value normal(const Node& nd) const { fail_at(nd, "': ... :' is only valid for vertex fields"); }
};

struct FormAlg {
  using Value = FormalForm;
  int n, order;
  Value lift(const WeylElement& w) const { return FormalForm::from_function(w); }
  Value number(const Rational& r) const { return lift(WeylElement::constant(n, order, r)); }
  Value symbol(const Node& s) const {
    if (auto i = weyl_index(s.name, n, "dp", "dq")) return FormalForm::differential(n, order, *i);
    if (s.name == "h" || weyl_index(s.name, n, "p", "q")) return lift(WeylAlg{n, order}.symbol(s));
    unknown(s, weyl_table(n, true));
  }
  Value add(const Value& a, const Value& b, const Node&) const { return a + b; }
  Value neg(const Value& a) const { return -a; }
  Value mul(const Value& a, const Value& b, const Node&) const { return a.wedge(b); }
  Value pow(const Value& a, int k, const Node& nd) const {
    if (a.terms().size() == 1 && a.terms().front().mask == 0 && a.terms().front().m.is_one() && a.terms().front().c.is_one())
      return lift(WeylElement::monomial(n, order, Monomial{}, Rational(1), a.terms().front().h * k));
    if (k < 0) fail_at(nd, "negative powers are only allowed for h");
    if (k > 255) fail_at(nd, "exponent too large");
    Value r = number(Rational(1));
    for (int i = 0; i < k; ++i) r = r.wedge(a);
    return r;
  }
  Value wedge(const Value& a, const Value& b, const Node&) const { return a.wedge(b); }
  Value chain(std::vector<Value>, const Node& nd) const { fail_at(nd, "'|' is only valid in chain inputs"); }
  Value normal(const Node& nd) const { fail_at(nd, "': ... :' is only valid for vertex fields"); }
};

// Chain inputs: Weyl elements carrying a u-power, or periodic chain sums.
struct ChainAlg {
  struct Scalar {
    WeylElement w;
    int u = 0;
  };
  using Value = std::variant<Scalar, PeriodicChain>;
  int n, order;
  bool allow_u;

  PeriodicChain as_chain(const Value& v) const {
    if (auto* p = std::get_if<PeriodicChain>(&v)) return *p;
    const auto& s = std::get<Scalar>(v);
    PeriodicChain out(n, order);
    out.add(s.u, ChainSum::from_entries({s.w}));
    return out;
  }
  Value number(const Rational& r) const { return Scalar{WeylElement::constant(n, order, r), 0}; }
  Value symbol(const Node& s) const {
    if (s.name == "u" && allow_u) return Scalar{WeylElement::constant(n, order, Rational(1)), 1};
    if (s.name == "h" || weyl_index(s.name, n, "p", "q")) return Scalar{WeylAlg{n, order}.symbol(s), 0};
    auto table = weyl_table(n, false);
    if (allow_u) table.push_back("u");
    unknown(s, table);
  }
  Value add(const Value& a, const Value& b, const Node& nd) const {
    auto* sa = std::get_if<Scalar>(&a);
    auto* sb = std::get_if<Scalar>(&b);
    if (sa && sb && sa->u == sb->u) return Scalar{sa->w + sb->w, sa->u};
    (void)nd;
    PeriodicChain out = as_chain(a);
    out += as_chain(b);
    return out;
  }
  Value neg(const Value& a) const {
    if (auto* s = std::get_if<Scalar>(&a)) return Scalar{-s->w, s->u};
    PeriodicChain out(n, order);
    for (const auto& [k, c] : std::get<PeriodicChain>(a).terms()) out.add(k, -c);
    return out;
  }
  Value mul(const Value& a, const Value& b, const Node& nd) const {
    auto* sa = std::get_if<Scalar>(&a);
    auto* sb = std::get_if<Scalar>(&b);
    if (sa && sb) return Scalar{sa->w.pointwise(sb->w), sa->u + sb->u};
    if (!sa && !sb) fail_at(nd, "cannot multiply two chains");
    const Scalar& s = sa ? *sa : *sb;
    const PeriodicChain& c = std::get<PeriodicChain>(sa ? b : a);
    if (s.w.max_y_degree() > 0) fail_at(nd, "chains can only be scaled by constants in h and u");
    HbarSeries f = s.w.constant_part();
    PeriodicChain out(n, order);
    for (const auto& [k, ch] : c.terms()) out.add(k + s.u, ch.scaled(f));
    return out;
  }
  Value pow(const Value& a, int k, const Node& nd) const {
    auto* s = std::get_if<Scalar>(&a);
    if (!s) fail_at(nd, "cannot raise a chain to a power");
    if (s->u != 0) {
      if (!pure_h_power(s->w) || *pure_h_power(s->w) != 0) fail_at(nd, "powers of u must stand alone");
      return Scalar{s->w, s->u * k};
    }
    return Scalar{WeylAlg{n, order}.pow(s->w, k, nd), 0};
  }
  Value wedge(const Value&, const Value&, const Node& nd) const { fail_at(nd, "wedge '^' is not valid in chains"); }
  Value chain(std::vector<Value> slots, const Node& nd) const {
    std::vector<WeylElement> entries;
    for (const auto& v : slots) {
      auto* s = std::get_if<Scalar>(&v);
      if (!s || s->u != 0) fail_at(nd, "chain slots must be Weyl elements");
      entries.push_back(s->w);
    }
    PeriodicChain out(n, order);
    out.add(0, ChainSum::from_entries(entries));
    return out;
  }
  Value normal(const Node& nd) const { fail_at(nd, "': ... :' is only valid for vertex fields"); }
};

struct VertexAlg {
  using Value = VertexPolynomial;
  GeneratorSetPtr gens;
  int order;
  std::vector<std::string> table() const {
    auto t = gens->names;
    t.push_back("h");
    return t;
  }
  Value number(const Rational& r) const { return VertexPolynomial::one(gens, order).scaled(r); }
  Value symbol(const Node& s) const {
    if (s.name == "h") return VertexPolynomial::from_terms(gens, order, {{1, {}, Rational(1)}});
    for (int i = 0; i < gens->size(); ++i)
      if (gens->names[i] == s.name) return VertexPolynomial::generator(gens, order, i);
    unknown(s, table());
  }
  Value add(const Value& a, const Value& b, const Node&) const { return a + b; }
  Value neg(const Value& a) const { return -a; }
  Value mul(const Value& a, const Value& b, const Node&) const { return a * b; }
  Value pow(const Value& a, int k, const Node& nd) const {
    if (a.terms().size() == 1 && a.terms().front().legs.empty() && a.terms().front().c.is_one())
      return VertexPolynomial::from_terms(gens, order, {{a.terms().front().h * k, {}, Rational(1)}});
    return repeated_power(a, k, number(Rational(1)), nd);
  }
  Value wedge(const Value&, const Value&, const Node& nd) const { fail_at(nd, "wedge '^' is not valid for fields"); }
  Value chain(std::vector<Value>, const Node& nd) const { fail_at(nd, "'|' is not valid for fields"); }
  Value normal(const Node& nd) const {
    Value r = number(Rational(1));
    for (const auto& l : nd.legs) {
      int g = -1;
      for (int i = 0; i < gens->size(); ++i)
        if (gens->names[i] == l.name) g = i;
      if (g < 0) {
        Node at;
        at.name = l.name;
        at.line = l.line;
        at.column = l.column;
        unknown(at, table());
      }
      r = r * VertexPolynomial::generator(gens, order, g, l.k);
    }
    return r;
  }
};

struct QAlg {
  using Value = QSeries;
  int n;
  Value number(const Rational& r) const { return QSeries::constant(n, r); }
  Value symbol(const Node& s) const {
    if (s.name == "q") {
      QSeries q(n);
      if (n >= 1) q[1] = 1;
      return q;
    }
    if (s.name == "E2") return eisenstein(2, n);
    if (s.name == "E4") return eisenstein(4, n);
    if (s.name == "E6") return eisenstein(6, n);
    unknown(s, {"q", "E2", "E4", "E6"});
  }
  Value add(const Value& a, const Value& b, const Node&) const { return a + b; }
  Value neg(const Value& a) const { return -a; }
  Value mul(const Value& a, const Value& b, const Node&) const { return a * b; }
  Value pow(const Value& a, int k, const Node& nd) const { return repeated_power(a, k, number(Rational(1)), nd); }
  Value wedge(const Value&, const Value&, const Node& nd) const { fail_at(nd, "wedge '^' is not valid for q-series"); }
  Value chain(std::vector<Value>, const Node& nd) const { fail_at(nd, "'|' is not valid for q-series"); }
  Value normal(const Node& nd) const { fail_at(nd, "': ... :' is not valid for q-series"); }
};

struct FunctionalAlg {
  using Value = Functional;
  const DgSymplecticSpace& space;
  int order;
  std::vector<std::string> table() const {
    auto t = space.names;
    t.push_back("h");
    return t;
  }
  Value number(const Rational& r) const { return Functional::constant(space.dim(), space.odd_mask(), order, r); }
  Value symbol(const Node& s) const {
    if (s.name == "h") return Functional::from_terms(space.dim(), space.odd_mask(), order, {{1, Monomial{}, Rational(1)}});
    for (int i = 0; i < space.dim(); ++i)
      if (space.names[i] == s.name) return Functional::coordinate(space.dim(), space.odd_mask(), order, i);
    unknown(s, table());
  }
  Value add(const Value& a, const Value& b, const Node&) const { return a + b; }
  Value neg(const Value& a) const { return -a; }
  Value mul(const Value& a, const Value& b, const Node&) const { return a * b; }
  Value pow(const Value& a, int k, const Node& nd) const {
    if (a.terms().size() == 1 && a.terms().front().m.is_one() && a.terms().front().c.is_one())
      return Functional::from_terms(space.dim(), space.odd_mask(), order, {{a.terms().front().h * k, Monomial{}, Rational(1)}});
    return repeated_power(a, k, number(Rational(1)), nd);
  }
  Value wedge(const Value&, const Value&, const Node& nd) const { fail_at(nd, "wedge '^' is not valid here"); }
  Value chain(std::vector<Value>, const Node& nd) const { fail_at(nd, "'|' is not valid here"); }
  Value normal(const Node& nd) const { fail_at(nd, "': ... :' is not valid here"); }
};

void check_n(int n) {
  if (n < 1 || n > kMaxVars / 2) throw DomainError("n must be between 1 and " + std::to_string(kMaxVars / 2));
}

}  // namespace

Node parse_expression(std::string_view text) { return Parser(lex(text)).parse(); }

bool mentions_identifier(std::string_view text, std::string_view name) {
  auto toks = lex(text);
  return std::any_of(toks.begin(), toks.end(), [&](const Token& t) { return t.kind == Token::Kind::ident && t.text == name; });
}

int infer_weyl_n(std::string_view text) {
  int n = 1;
  for (const auto& t : lex(text)) {
    if (t.kind != Token::Kind::ident) continue;
    std::string_view s = t.text;
    if (s.starts_with("d")) s.remove_prefix(1);
    if (s.size() < 2 || (s[0] != 'p' && s[0] != 'q')) continue;
    auto digits = s.substr(1);
    if (digits.size() > 3 || digits[0] == '0' || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      continue;
    n = std::max(n, std::stoi(std::string(digits)));
  }
  return n;
}

WeylElement parse_weyl(std::string_view text, int n, int order) {
  check_n(n);
  WeylAlg alg{n, order};
  return eval(parse_expression(text), alg);
}

FormalForm parse_form(std::string_view text, int n, int order) {
  check_n(n);
  FormAlg alg{n, order};
  return eval(parse_expression(text), alg);
}

PeriodicChain parse_periodic(std::string_view text, int n, int order) {
  check_n(n);
  ChainAlg alg{n, order, true};
  return alg.as_chain(eval(parse_expression(text), alg));
}

ChainSum parse_chain(std::string_view text, int n, int order) {
  check_n(n);
  ChainAlg alg{n, order, false};
  PeriodicChain pc = alg.as_chain(eval(parse_expression(text), alg));
  ChainSum out(n, order);
  for (const auto& [k, c] : pc.terms()) out += c;
  return out;
}

VertexPolynomial parse_vertex(std::string_view text, const GeneratorSetPtr& gens, int order) {
  VertexAlg alg{gens, order};
  return eval(parse_expression(text), alg);
}

QSeries parse_qseries(std::string_view text, int n) {
  if (n < 0) throw DomainError("negative q-order");
  QAlg alg{n};
  return eval(parse_expression(text), alg);
}

Functional parse_functional(std::string_view text, const DgSymplecticSpace& space, int order) {
  FunctionalAlg alg{space, order};
  return eval(parse_expression(text), alg);
}

}  // namespace bvtrace
