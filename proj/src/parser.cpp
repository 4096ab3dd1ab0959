#include "meromat/frontio.hpp"

#include <cctype>

namespace meromat {

namespace {

constexpr unsigned kMaxPower = 64;

class Parser {
public:
  explicit Parser(const std::string &s) : s_(s) {}

  Ast parse() {
    Ast e = expr();
    skip();
    if (pos_ < s_.size())
      fail(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

private:
  [[noreturn]] void fail(std::size_t at, const std::string &msg) { throw ParseError(at, msg); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c))
      return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c))
      fail(pos_, pos_ < s_.size() ? std::string("expected '") + c + "', found '" + s_[pos_] + "'"
                                  : std::string("expected '") + c + "' at end of input");
  }
  bool peek_digit() {
    skip();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }
  mpz_class uint() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_)
      fail(pos_, "expected an unsigned integer");
    return mpz_class(s_.substr(start, pos_ - start));
  }
  // uint ['/' uint], the slash only when a digit follows it
  mpq_class rational() {
    mpz_class n = uint();
    mpz_class d = 1;
    std::size_t save = pos_;
    if (accept('/')) {
      if (peek_digit()) {
        std::size_t at = pos_;
        d = uint();
        if (d == 0)
          fail(at, "zero denominator");
      } else {
        pos_ = save;
      }
    }
    mpq_class q(n, d);
    q.canonicalize();
    return q;
  }

  Ast node(Ast::Op op, std::size_t at, std::vector<Ast> kids = {}) {
    Ast a;
    a.op = op;
    a.offset = at;
    a.kids = std::move(kids);
    return a;
  }

  Ast expr() {
    skip();
    std::size_t at = pos_;
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    Ast left = term();
    if (neg)
      left = node(Ast::Op::Neg, at, {std::move(left)});
    for (;;) {
      skip();
      std::size_t op_at = pos_;
      if (accept('+'))
        left = node(Ast::Op::Add, op_at, {std::move(left), term()});
      else if (accept('-'))
        left = node(Ast::Op::Sub, op_at, {std::move(left), term()});
      else
        return left;
    }
  }

  Ast term() {
    Ast left = factor();
    for (;;) {
      skip();
      std::size_t op_at = pos_;
      if (accept('*'))
        left = node(Ast::Op::Mul, op_at, {std::move(left), factor()});
      else if (accept('/'))
        left = node(Ast::Op::Div, op_at, {std::move(left), factor()});
      else
        return left;
    }
  }

  Ast factor() {
    Ast b = base();
    skip();
    std::size_t at = pos_;
    if (accept('^')) {
      skip();
      std::size_t k_at = pos_;
      mpz_class k = uint();
      if (k > kMaxPower)
        fail(k_at, "exponent larger than " + std::to_string(kMaxPower));
      Ast p = node(Ast::Op::Pow, at, {std::move(b)});
      p.power = static_cast<unsigned>(k.get_ui());
      return p;
    }
    return b;
  }

  bool keyword(const char *w) {
    skip();
    std::size_t n = std::char_traits<char>::length(w);
    if (s_.compare(pos_, n, w) != 0)
      return false;
    if (pos_ + n < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_ + n])))
      return false;
    pos_ += n;
    return true;
  }

  Ast base() {
    skip();
    std::size_t at = pos_;
    if (pos_ >= s_.size())
      fail(pos_, "unexpected end of input");
    if (peek_digit()) {
      Ast a = node(Ast::Op::Num, at);
      a.value = rational();
      return a;
    }
    if (keyword("z"))
      return node(Ast::Op::Var, at);
    if (keyword("i"))
      return node(Ast::Op::Imag, at);
    if (keyword("exp")) {
      expect('(');
      skip();
      std::size_t coef_at = pos_;
      bool neg = accept('-');
      mpq_class c = 1;
      if (peek_digit()) {
        c = rational();
        expect('*');
      }
      skip();
      if (!keyword("z"))
        fail(pos_, "exp argument must have the form -tau*z");
      expect(')');
      if (!neg && sgn(c) > 0)
        fail(coef_at, "positive growth coefficient in exp; only exp(-tau*z) with tau >= 0 is allowed");
      Ast a = node(Ast::Op::Exp, at);
      a.value = c;
      return a;
    }
    if (accept('(')) {
      Ast e = expr();
      expect(')');
      return e;
    }
    fail(pos_, std::string("unexpected '") + s_[pos_] + "'");
  }

  const std::string &s_;
  std::size_t pos_ = 0;
};

int precedence(const Ast &a) {
  switch (a.op) {
  case Ast::Op::Add:
  case Ast::Op::Sub:
  case Ast::Op::Neg:
    return 1;
  case Ast::Op::Mul:
  case Ast::Op::Div:
    return 2;
  case Ast::Op::Pow:
    return 3;
  default:
    return 4;
  }
}

std::string wrap(const Ast &a, bool parens) { return parens ? "(" + a.str() + ")" : a.str(); }

// ---- values ----

struct Fraction {
  QuasiPoly num, den;
};

QuasiPoly shift_delays(const QuasiPoly &q, const mpq_class &by) {
  std::vector<QuasiPoly::Term> t = q.terms();
  for (auto &x : t)
    x.delay -= by;
  return QuasiPoly(std::move(t));
}

QuasiPoly scale(const QuasiPoly &q, const GaussRat &c) {
  std::vector<QuasiPoly::Term> t = q.terms();
  for (auto &x : t)
    x.poly *= c;
  return QuasiPoly(std::move(t));
}

QuasiPoly divide_poly(const QuasiPoly &q, const Poly &g) {
  std::vector<QuasiPoly::Term> t = q.terms();
  for (auto &x : t)
    x.poly = exact_div(x.poly, g);
  return QuasiPoly(std::move(t));
}

Fraction normalize(Fraction f) {
  if (f.num.is_zero())
    return {QuasiPoly(0), QuasiPoly(1)};
  if (f.num.is_polynomial() && f.den.is_polynomial()) {
    RatFn r(f.num.as_poly(), f.den.as_poly());
    return {QuasiPoly(r.num()), QuasiPoly(r.den())};
  }
  mpq_class m = std::min(f.num.terms().front().delay, f.den.terms().front().delay);
  if (sgn(m) > 0) {
    f.num = shift_delays(f.num, m);
    f.den = shift_delays(f.den, m);
  }
  Poly g;
  for (auto *q : {&f.num, &f.den})
    for (auto &t : q->terms())
      g = gcd(g, t.poly);
  if (g.degree() > 0) {
    f.num = divide_poly(f.num, g);
    f.den = divide_poly(f.den, g);
  }
  GaussRat lead = f.den.terms().front().poly.lead();
  if (!lead.is_one()) {
    GaussRat inv = lead.inverse();
    f.num = scale(f.num, inv);
    f.den = scale(f.den, inv);
  }
  return f;
}

Fraction evaluate(const Ast &a) {
  using Op = Ast::Op;
  switch (a.op) {
  case Op::Num:
    return {QuasiPoly(GaussRat(a.value)), QuasiPoly(1)};
  case Op::Imag:
    return {QuasiPoly(GaussRat::i()), QuasiPoly(1)};
  case Op::Var:
    return {QuasiPoly(Poly::z()), QuasiPoly(1)};
  case Op::Exp:
    return {QuasiPoly::exp_delay(abs(a.value)), QuasiPoly(1)};
  case Op::Neg: {
    Fraction x = evaluate(a.kids[0]);
    return {-x.num, x.den};
  }
  case Op::Add:
  case Op::Sub: {
    Fraction x = evaluate(a.kids[0]), y = evaluate(a.kids[1]);
    if (a.op == Op::Sub)
      y.num = -y.num;
    if (x.den == y.den)
      return normalize({x.num + y.num, x.den});
    return normalize({x.num * y.den + y.num * x.den, x.den * y.den});
  }
  case Op::Mul: {
    Fraction x = evaluate(a.kids[0]), y = evaluate(a.kids[1]);
    return normalize({x.num * y.num, x.den * y.den});
  }
  case Op::Div: {
    Fraction x = evaluate(a.kids[0]), y = evaluate(a.kids[1]);
    if (y.num.is_zero())
      throw ParseError(a.offset, "division by zero");
    return normalize({x.num * y.den, x.den * y.num});
  }
  case Op::Pow: {
    Fraction x = evaluate(a.kids[0]);
    Fraction out{QuasiPoly(1), QuasiPoly(1)};
    for (unsigned k = 0; k < a.power; ++k)
      out = normalize({out.num * x.num, out.den * x.den});
    return out;
  }
  }
  throw ParseError(a.offset, "unknown node");
}

EntryKind classify(const QuasiPoly &num, const QuasiPoly &den) {
  bool poly_num = num.is_polynomial(), poly_den = den.is_polynomial();
  bool unit_den = den == QuasiPoly(1);
  if (poly_num && unit_den)
    return EntryKind::Polynomial;
  if (poly_num && poly_den)
    return EntryKind::Rational;
  return unit_den ? EntryKind::QuasiPolynomial : EntryKind::QuasiRational;
}

EntryExpr make_entry(const QuasiPoly &num, const QuasiPoly &den) {
  Fraction f = normalize({num, den});
  EntryExpr e;
  e.num = f.num;
  e.den = f.den;
  e.kind = classify(e.num, e.den);
  e.source = e.normalized();
  e.ast = Parser(e.source).parse();
  return e;
}

} // namespace

std::string Ast::str() const {
  switch (op) {
  case Op::Num:
    return value.get_str();
  case Op::Imag:
    return "i";
  case Op::Var:
    return "z";
  case Op::Exp:
    return "exp(-" + mpq_class(abs(value)).get_str() + "*z)";
  case Op::Neg:
    return "-" + wrap(kids[0], precedence(kids[0]) <= 1);
  case Op::Add:
  case Op::Sub:
  case Op::Mul:
  case Op::Div: {
    int p = precedence(*this);
    const char *sym = op == Op::Add ? " + " : op == Op::Sub ? " - " : op == Op::Mul ? "*" : "/";
    // a literal right of '/' would merge with a preceding integer into one rational
    std::string right = kids[1].str();
    bool right_parens = precedence(kids[1]) <= p || (op == Op::Div && std::isdigit(static_cast<unsigned char>(right[0])));
    return wrap(kids[0], precedence(kids[0]) < p) + sym + (right_parens ? "(" + right + ")" : right);
  }
  case Op::Pow:
    return wrap(kids[0], precedence(kids[0]) < 4) + "^" + std::to_string(power);
  }
  return "?";
}

bool same_tree(const Ast &a, const Ast &b) {
  if (a.op != b.op || a.kids.size() != b.kids.size())
    return false;
  if (a.op == Ast::Op::Num && a.value != b.value)
    return false;
  if (a.op == Ast::Op::Exp && abs(a.value) != abs(b.value))
    return false;
  if (a.op == Ast::Op::Pow && a.power != b.power)
    return false;
  for (std::size_t k = 0; k < a.kids.size(); ++k)
    if (!same_tree(a.kids[k], b.kids[k]))
      return false;
  return true;
}

const char *kind_name(EntryKind k) {
  switch (k) {
  case EntryKind::Polynomial:
    return "polynomial";
  case EntryKind::Rational:
    return "rational";
  case EntryKind::QuasiPolynomial:
    return "quasipolynomial";
  case EntryKind::QuasiRational:
    return "quasirational";
  }
  return "?";
}

std::string EntryExpr::normalized() const {
  switch (kind) {
  case EntryKind::Polynomial:
    return num.as_poly().str();
  case EntryKind::Rational:
    return RatFn(num.as_poly(), den.as_poly()).str();
  case EntryKind::QuasiPolynomial:
    return num.str();
  case EntryKind::QuasiRational:
    return "(" + num.str() + ")/(" + den.str() + ")";
  }
  return "";
}

Poly EntryExpr::as_poly() const {
  if (kind != EntryKind::Polynomial)
    throw InputError("entry '" + normalized() + "' is not a polynomial");
  return num.as_poly();
}

RatFn EntryExpr::as_ratfn() const {
  if (kind != EntryKind::Polynomial && kind != EntryKind::Rational)
    throw InputError("entry '" + normalized() + "' is not a rational function");
  return RatFn(num.as_poly(), den.as_poly());
}

QuasiPoly EntryExpr::as_quasipoly() const {
  if (kind != EntryKind::Polynomial && kind != EntryKind::QuasiPolynomial)
    throw InputError("entry '" + normalized() + "' has a denominator");
  return num;
}

cplx EntryExpr::eval(cplx z) const { return num.eval(z) / den.eval(z); }

EntryExpr parse_entry(const std::string &text) {
  EntryExpr e;
  e.source = text;
  e.ast = Parser(text).parse();
  Fraction f = normalize(evaluate(e.ast));
  e.num = f.num;
  e.den = f.den;
  e.kind = classify(e.num, e.den);
  return e;
}

EntryExpr entry_of(const Poly &p) { return make_entry(QuasiPoly(p), QuasiPoly(1)); }
EntryExpr entry_of(const RatFn &f) { return make_entry(QuasiPoly(f.num()), QuasiPoly(f.den())); }
EntryExpr entry_of(const QuasiPoly &q) { return make_entry(q, QuasiPoly(1)); }

} // namespace meromat
