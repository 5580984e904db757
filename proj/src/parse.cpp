#include "parse.hpp"

#include <cctype>

namespace ltpg {

namespace {

using LP = LaurentPoly;

void clean(LP& a) {
  for (auto it = a.c.begin(); it != a.c.end();) {
    if (it->second.is_exact_zero() || it->first >= a.hi || it->first < a.lo)
      it = a.c.erase(it);
    else
      ++it;
  }
}

LP add(const LP& a, const LP& b) {
  LP r = a;
  r.hi = std::min(a.hi, b.hi);
  r.lo = std::max(a.lo, b.lo);
  for (auto& [k, v] : b.c) {
    auto it = r.c.find(k);
    if (it == r.c.end())
      r.c[k] = v;
    else
      it->second = it->second + v;
  }
  clean(r);
  return r;
}

LP neg(const LP& a) {
  LP r = a;
  for (auto& [k, v] : r.c) v = -v;
  return r;
}

int min_exp(const LP& a) { return a.c.empty() ? kInf : a.c.begin()->first; }
int max_exp(const LP& a) { return a.c.empty() ? -kInf : a.c.rbegin()->first; }

LP mul(const LP& a, const LP& b) {
  LP r;
  for (auto& [i, x] : a.c)
    for (auto& [j, y] : b.c) {
      auto it = r.c.find(i + j);
      if (it == r.c.end())
        r.c[i + j] = x * y;
      else
        it->second = it->second + x * y;
    }
  r.hi = kInf;
  if (a.hi < kInf) r.hi = std::min(r.hi, a.hi + (b.lo > -kInf ? b.lo : min_exp(b)));
  if (b.hi < kInf) r.hi = std::min(r.hi, b.hi + (a.lo > -kInf ? a.lo : min_exp(a)));
  r.lo = -kInf;
  if (a.lo > -kInf) r.lo = std::max(r.lo, a.lo + (b.hi < kInf ? b.hi : max_exp(b) + 1));
  if (b.lo > -kInf) r.lo = std::max(r.lo, b.lo + (a.hi < kInf ? a.hi : max_exp(a) + 1));
  if (r.hi < -kInf / 2) r.hi = -kInf / 2;
  clean(r);
  return r;
}

bool is_monomial(const LP& a) { return a.c.size() == 1 && a.hi >= kInf && a.lo <= -kInf; }

LP invert_monomial(const LP& a) {
  if (!is_monomial(a)) fail(Err::ParseError, "division by a non-monomial");
  LP r;
  auto [k, v] = *a.c.begin();
  r.c[-k] = v.inv();
  return r;
}

class Parser {
 public:
  Parser(const Field* F, const std::string& s, const std::string& var) : F_(F), s_(s), var_(var) {}

  LP parse() {
    LP r = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing input");
    return r;
  }

  bool saw_mod() const { return saw_mod_; }

 private:
  [[noreturn]] void error(const std::string& m) {
    fail(Err::ParseError, m + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
  }
  bool peek(const std::string& t) {
    skip();
    return s_.compare(pos_, t.size(), t) == 0;
  }
  bool accept(const std::string& t) {
    if (peek(t)) {
      pos_ += t.size();
      return true;
    }
    return false;
  }
  bool ident_at(const std::string& t) {
    skip();
    if (s_.compare(pos_, t.size(), t) != 0) return false;
    size_t e = pos_ + t.size();
    return e >= s_.size() || !(std::isalnum((unsigned char)s_[e]) || s_[e] == '_');
  }
  int64_t integer() {
    skip();
    bool negv = false;
    if (accept("-")) negv = true;
    skip();
    if (pos_ >= s_.size() || !std::isdigit((unsigned char)s_[pos_])) error("integer expected");
    int64_t v = 0;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > (int64_t)1e15) error("exponent too large");
      ++pos_;
    }
    return negv ? -v : v;
  }

  LP constant(const FieldElem& x) {
    LP r;
    if (!x.is_exact_zero()) r.c[0] = x;
    return r;
  }

  LP expr() {
    LP r;
    bool first = true;
    for (;;) {
      skip();
      bool negate = false;
      if (accept("+")) {
      } else if (accept("-")) {
        negate = true;
      } else if (!first) {
        break;
      }
      LP t = term();
      if (negate) t = neg(t);
      r = first ? t : add(r, t);
      first = false;
    }
    if (ident_at("mod")) {
      pos_ += 3;
      if (!(ident_at("pi") || ident_at("p"))) error("mod expects pi^N");
      accept("pi") || accept("p");
      int64_t N = 1;
      if (accept("^")) N = integer();
      for (auto& [k, v] : r.c) v = v.with_prec((int)N);
      saw_mod_ = true;
      clean(r);
    }
    return r;
  }

  LP term() {
    LP r = power();
    for (;;) {
      if (accept("*")) {
        r = mul(r, power());
      } else if (peek("/") ) {
        ++pos_;
        r = mul(r, invert_monomial(power()));
      } else {
        break;
      }
    }
    return r;
  }

  LP power() {
    LP base = atom();
    if (accept("^")) {
      int64_t e = integer();
      if (e < 0) {
        base = invert_monomial(base);
        e = -e;
      }
      LP r = constant(F_->one());
      for (int64_t i = 0; i < e; ++i) r = mul(r, base);
      return r;
    }
    return base;
  }

  LP atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      LP r = expr();
      if (!accept(")")) error("')' expected");
      return r;
    }
    if (ch == '-') {
      ++pos_;
      return neg(power());
    }
    if (std::isdigit((unsigned char)ch)) {
      FieldElem x = F_->zero();
      FieldElem ten = F_->integer(10);
      int64_t small = 0;
      bool big = false;
      while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
        int d = s_[pos_] - '0';
        if (!big && small < (int64_t)1e17) {
          small = small * 10 + d;
        } else {
          if (!big) x = F_->integer(small);
          big = true;
          x = x * ten + F_->integer(d);
        }
        ++pos_;
      }
      return constant(big ? x : F_->integer(small));
    }
    if (ident_at("O")) {
      ++pos_;
      if (!accept("(")) error("'(' expected after O");
      LP r;
      if (accept("1")) {
        if (!accept("/")) error("O(1/...) expected");
        if (!accept(var_)) error("variable expected in O(1/...)");
        int64_t k = 1;
        if (accept("^")) k = integer();
        r.lo = (int)(1 - k);
      } else {
        if (!accept(var_)) error("variable expected in O(...)");
        int64_t k = 1;
        if (accept("^")) k = integer();
        r.hi = (int)k;
      }
      if (!accept(")")) error("')' expected");
      return r;
    }
    if (ident_at(var_)) {
      pos_ += var_.size();
      LP r;
      r.c[1] = F_->one();
      return r;
    }
    if (ident_at("pi")) {
      pos_ += 2;
      return constant(F_->pi());
    }
    if (ident_at("w")) {
      pos_ += 1;
      return constant(FieldElem::gen(F_));
    }
    if (ident_at("p")) {
      pos_ += 1;
      return constant(F_->integer(F_->p()));
    }
    if (ident_at("q")) {
      pos_ += 1;
      return constant(F_->q_elem());
    }
    error("unexpected character");
  }

  const Field* F_;
  std::string s_;
  std::string var_;
  size_t pos_ = 0;
  bool saw_mod_ = false;
};

}  // namespace

LaurentPoly parse_literal(const Field* F, const std::string& s, const std::string& var, int default_prec) {
  Parser P(F, s, var);
  LaurentPoly r = P.parse();
  if (!P.saw_mod())
    for (auto& [k, v] : r.c) v = v.with_prec(default_prec);
  clean(r);
  return r;
}

FieldElem Field::parse(const std::string& s, int default_prec) const {
  LaurentPoly r = parse_literal(this, s, "T", default_prec < 0 ? N_ : default_prec);
  if (r.hi < kInf || r.lo > -kInf) fail(Err::ParseError, "field element literal cannot contain O(...)");
  for (auto& [k, v] : r.c)
    if (k != 0) fail(Err::ParseError, "field element literal cannot contain T");
  auto it = r.c.find(0);
  return it == r.c.end() ? zero(N_) : it->second;
}

}  // namespace ltpg
