#include "adic/seq_expr.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace adic {

namespace {

// Dominance order: larger base wins, then larger degree.
bool key_less(const ExpMonomial& a, const ExpMonomial& b) {
  if (a.base != b.base) return a.base < b.base;
  return a.degree < b.degree;
}

Rat binomial(unsigned n, unsigned k) {
  Int out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return Rat(out);
}

}  // namespace

ExpPoly::ExpPoly(std::vector<ExpMonomial> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const ExpMonomial& a, const ExpMonomial& b) { return key_less(b, a); });
  for (auto& t : terms) {
    if (t.base <= 0) throw Error("bad-exp-base", "exponential base must be positive");
    if (!terms_.empty() && terms_.back().base == t.base && terms_.back().degree == t.degree) {
      terms_.back().coeff += t.coeff;
      if (terms_.back().coeff == 0) terms_.pop_back();
    } else if (t.coeff != 0) {
      terms_.push_back(t);
    }
  }
}

ExpPoly ExpPoly::constant(const Rat& c) { return ExpPoly({{c, 0, Rat(1)}}); }
ExpPoly ExpPoly::variable() { return ExpPoly({{Rat(1), 1, Rat(1)}}); }
ExpPoly ExpPoly::geometric(const Rat& base) { return ExpPoly({{Rat(1), 0, base}}); }

Rat ExpPoly::eval(long n) const {
  Rat out(0);
  for (const auto& t : terms_) {
    Rat v = t.coeff;
    if (t.degree > 0) {
      Rat np = rat_pow(Rat(Int(n)), static_cast<long>(t.degree));
      v *= np;
    }
    if (t.base != 1) v *= rat_pow(t.base, n);
    out += v;
  }
  return out;
}

ExpPoly ExpPoly::operator-() const {
  std::vector<ExpMonomial> out = terms_;
  for (auto& t : out) t.coeff = -t.coeff;
  return ExpPoly(std::move(out));
}

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b) {
  std::vector<ExpMonomial> out = a.terms_;
  out.insert(out.end(), b.terms_.begin(), b.terms_.end());
  return ExpPoly(std::move(out));
}

ExpPoly operator-(const ExpPoly& a, const ExpPoly& b) { return a + (-b); }

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  std::vector<ExpMonomial> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_)
      out.push_back({x.coeff * y.coeff, x.degree + y.degree, x.base * y.base});
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::substitute_affine(long scale, long offset) const {
  if (scale < 1) throw Error("bad-substitution", "affine scale must be >= 1");
  std::vector<ExpMonomial> out;
  for (const auto& t : terms_) {
    // base^(scale*m + offset) = (base^scale)^m * base^offset
    Rat base_m = rat_pow(t.base, scale);
    Rat c0 = t.coeff * rat_pow(t.base, offset);
    // (scale*m + offset)^degree expanded binomially
    for (unsigned j = 0; j <= t.degree; ++j) {
      Rat c = c0 * binomial(t.degree, j) * rat_pow(Rat(Int(scale)), static_cast<long>(j)) *
              rat_pow(Rat(Int(offset)), static_cast<long>(t.degree - j));
      if (c != 0) out.push_back({c, j, base_m});
    }
  }
  return ExpPoly(std::move(out));
}

std::optional<long> ExpPoly::sign_stable_from() const {
  if (terms_.size() <= 1) return 1;
  const ExpMonomial& d = terms_.front();
  const size_t k = terms_.size() - 1;
  long overall = 1;
  for (size_t i = 1; i < terms_.size(); ++i) {
    const ExpMonomial& t = terms_[i];
    const Rat beta = t.base / d.base;  // <= 1; == 1 only with smaller degree
    const long ddeg = static_cast<long>(t.degree) - static_cast<long>(d.degree);
    // ratio r(n) = |c_t/c_d| n^ddeg beta^n must fall below 1/(2k) and stay there.
    // Find where r is decreasing: (1+1/n)^ddeg * beta < 1.
    long mono = 1;
    if (ddeg > 0) {
      while (true) {
        Rat growth = rat_pow(Rat(Int(mono + 1), Int(mono)), ddeg) * beta;
        if (growth < 1) break;
        if (mono > (1L << 40)) return std::nullopt;
        mono *= 2;
      }
    }
    const Rat target = Rat(1, Int(2 * k));
    const Rat cr = abs(t.coeff / d.coeff);
    auto ratio_small = [&](long n) {
      Rat r = cr * rat_pow(beta, n);
      if (ddeg != 0) r *= rat_pow(Rat(Int(n)), ddeg);
      return r < target;
    };
    long n = std::max<long>(mono, 1);
    long guard = 0;
    while (!ratio_small(n)) {
      n *= 2;
      if (++guard > 64) return std::nullopt;
    }
    overall = std::max(overall, n);
  }
  return overall;
}

std::string ExpPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << rat_to_string(t.coeff);
    if (t.degree > 0) os << "*n^" << t.degree;
    if (t.base != 1) os << "*(" << rat_to_string(t.base) << ")^n";
  }
  return os.str();
}

SeqExpr::SeqExpr(ExpPoly num, ExpPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error("seq-zero-den", "sequence expression with zero denominator");
  if (num_.is_zero()) den_ = ExpPoly::constant(Rat(1));
}

SeqExpr SeqExpr::constant(const Rat& c) { return SeqExpr(ExpPoly::constant(c), ExpPoly::constant(Rat(1))); }
SeqExpr SeqExpr::variable() { return SeqExpr(ExpPoly::variable(), ExpPoly::constant(Rat(1))); }
SeqExpr SeqExpr::geometric(const Rat& base) {
  return SeqExpr(ExpPoly::geometric(base), ExpPoly::constant(Rat(1)));
}

Rat SeqExpr::eval(long n) const {
  Rat d = den_.eval(n);
  if (d == 0) throw Error("seq-eval", "denominator vanishes at n=" + std::to_string(n));
  return num_.eval(n) / d;
}

SeqExpr SeqExpr::operator-() const { return SeqExpr(-num_, den_); }

SeqExpr operator+(const SeqExpr& a, const SeqExpr& b) {
  return SeqExpr(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
SeqExpr operator-(const SeqExpr& a, const SeqExpr& b) { return a + (-b); }
SeqExpr operator*(const SeqExpr& a, const SeqExpr& b) {
  return SeqExpr(a.num_ * b.num_, a.den_ * b.den_);
}
SeqExpr operator/(const SeqExpr& a, const SeqExpr& b) {
  if (b.is_zero()) throw Error("division-by-zero", "dividing sequence expression by zero");
  return SeqExpr(a.num_ * b.den_, a.den_ * b.num_);
}

SeqExpr::Limit SeqExpr::limit() const {
  if (num_.is_zero()) return {Limit::Kind::Finite, Rat(0)};
  const ExpMonomial& n = *num_.dominant();
  const ExpMonomial& d = *den_.dominant();
  const int s = sign(n.coeff) * sign(d.coeff);
  if (n.base == d.base && n.degree == d.degree) return {Limit::Kind::Finite, n.coeff / d.coeff};
  const bool num_wins = (n.base > d.base) || (n.base == d.base && n.degree > d.degree);
  if (num_wins)
    return {s > 0 ? Limit::Kind::PlusInfinity : Limit::Kind::MinusInfinity, Rat(0)};
  return {Limit::Kind::Finite, Rat(0)};
}

int SeqExpr::eventual_sign() const {
  if (num_.is_zero()) return 0;
  return sign(num_.dominant()->coeff) * sign(den_.dominant()->coeff);
}

std::optional<long> SeqExpr::eventual_from() const {
  auto a = num_.sign_stable_from();
  auto b = den_.sign_stable_from();
  if (!a || !b) return std::nullopt;
  return std::max(*a, *b);
}

SeqExpr SeqExpr::substitute_affine(long scale, long offset) const {
  return SeqExpr(num_.substitute_affine(scale, offset), den_.substitute_affine(scale, offset));
}

std::string SeqExpr::to_string() const {
  if (den_.terms().size() == 1 && den_.terms()[0].coeff == 1 && den_.terms()[0].degree == 0 &&
      den_.terms()[0].base == 1)
    return num_.to_string();
  return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
}

SymbolicSeq::SymbolicSeq(SeqExpr e, long valid_from)
    : period_(1), cases_{std::move(e)}, valid_from_(valid_from) {}

SymbolicSeq::SymbolicSeq(unsigned period, std::vector<SeqExpr> cases, long valid_from)
    : period_(period), cases_(std::move(cases)), valid_from_(valid_from) {
  if (period_ == 0 || cases_.size() != period_)
    throw Error("bad-symbolic-seq", "period must equal the number of cases");
}

SymbolicSeq SymbolicSeq::constant(const Rat& c) { return SymbolicSeq(SeqExpr::constant(c)); }

bool SymbolicSeq::is_zero() const {
  return std::all_of(cases_.begin(), cases_.end(), [](const SeqExpr& e) { return e.is_zero(); });
}

bool SymbolicSeq::is_constant_one() const {
  return std::all_of(cases_.begin(), cases_.end(), [](const SeqExpr& e) {
    return (e - SeqExpr::constant(Rat(1))).is_zero();
  });
}

Rat SymbolicSeq::eval(long n) const {
  const long r = ((n % period_) + period_) % period_;
  const long m = (n - r) / period_;
  return cases_[static_cast<size_t>(r)].eval(m);
}

SymbolicSeq SymbolicSeq::with_period(unsigned p) const {
  if (p == period_) return *this;
  if (p % period_ != 0) throw Error("bad-symbolic-seq", "new period must be a multiple");
  const unsigned f = p / period_;
  std::vector<SeqExpr> cases(p, SeqExpr());
  for (unsigned r = 0; r < p; ++r) {
    // n = p*m + r = period_*(f*m + (r - r0)/period_) + r0
    const unsigned r0 = r % period_;
    const long off = static_cast<long>((r - r0) / period_);
    cases[r] = cases_[r0].substitute_affine(f, off);
  }
  return SymbolicSeq(p, std::move(cases), valid_from_);
}

SymbolicSeq SymbolicSeq::shift(long delta) const {
  std::vector<SeqExpr> cases(period_, SeqExpr());
  for (unsigned r = 0; r < period_; ++r) {
    long rr = (static_cast<long>(r) + delta) % static_cast<long>(period_);
    if (rr < 0) rr += period_;
    // n = period*m + r maps to n + delta = period*(m + carry) + rr
    const long carry = (static_cast<long>(r) + delta - rr) / static_cast<long>(period_);
    cases[r] = cases_[static_cast<size_t>(rr)].substitute_affine(1, carry);
  }
  return SymbolicSeq(period_, std::move(cases), std::max<long>(1, valid_from_ - delta));
}

namespace {
template <typename Op>
SymbolicSeq zip(const SymbolicSeq& a, const SymbolicSeq& b, Op op) {
  const unsigned p = std::lcm(a.period(), b.period());
  SymbolicSeq aa = a.with_period(p), bb = b.with_period(p);
  std::vector<SeqExpr> cases;
  cases.reserve(p);
  for (unsigned r = 0; r < p; ++r) cases.push_back(op(aa.cases()[r], bb.cases()[r]));
  return SymbolicSeq(p, std::move(cases), std::max(a.valid_from(), b.valid_from()));
}
}  // namespace

SymbolicSeq operator+(const SymbolicSeq& a, const SymbolicSeq& b) {
  return zip(a, b, [](const SeqExpr& x, const SeqExpr& y) { return x + y; });
}
SymbolicSeq operator-(const SymbolicSeq& a, const SymbolicSeq& b) {
  return zip(a, b, [](const SeqExpr& x, const SeqExpr& y) { return x - y; });
}
SymbolicSeq operator*(const SymbolicSeq& a, const SymbolicSeq& b) {
  return zip(a, b, [](const SeqExpr& x, const SeqExpr& y) { return x * y; });
}
SymbolicSeq operator/(const SymbolicSeq& a, const SymbolicSeq& b) {
  return zip(a, b, [](const SeqExpr& x, const SeqExpr& y) { return x / y; });
}

std::string SymbolicSeq::to_string() const {
  if (period_ == 1) return cases_[0].to_string();
  std::ostringstream os;
  os << "{period " << period_ << ": ";
  for (unsigned r = 0; r < period_; ++r) {
    if (r) os << " | ";
    os << "n=" << period_ << "m+" << r << ": " << cases_[r].to_string();
  }
  os << "}";
  return os.str();
}

// ---------------------------------------------------------------------------
// Expression parser for family parameters.

namespace {

struct Parser {
  std::string_view s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw Error("bad-expression",
                msg + " at position " + std::to_string(pos) + " in '" + std::string(s) + "'");
  }

  // expr := term (('+'|'-') term)*
  SeqExpr parse_expr() {
    SeqExpr v = parse_term();
    while (true) {
      skip_ws();
      if (eat('+'))
        v = v + parse_term();
      else if (eat('-'))
        v = v - parse_term();
      else
        return v;
    }
  }
  // term := factor (('*'|'/') factor)*
  SeqExpr parse_term() {
    SeqExpr v = parse_factor();
    while (true) {
      skip_ws();
      if (eat('*'))
        v = v * parse_factor();
      else if (eat('/'))
        v = v / parse_factor();
      else
        return v;
    }
  }
  // factor := ['-'] atom ['^' exponent]
  SeqExpr parse_factor() {
    skip_ws();
    if (eat('-')) return -parse_factor();
    SeqExpr base = parse_atom();
    skip_ws();
    if (!eat('^')) return base;
    skip_ws();
    // exponent: 'n' (constant base only) or an integer
    if (pos < s.size() && s[pos] == 'n') {
      ++pos;
      Rat c = constant_value(base);
      if (c <= 0) fail("exponential base must be a positive constant");
      return SeqExpr::geometric(c);
    }
    bool negexp = eat('-');
    long e = parse_integer();
    if (negexp) e = -e;
    SeqExpr out = SeqExpr::constant(Rat(1));
    for (long i = 0; i < (e < 0 ? -e : e); ++i) out = out * base;
    if (e < 0) out = SeqExpr::constant(Rat(1)) / out;
    return out;
  }
  SeqExpr parse_atom() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of expression");
    if (s[pos] == '(') {
      ++pos;
      SeqExpr v = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (s[pos] == 'n') {
      ++pos;
      return SeqExpr::variable();
    }
    if (std::isdigit(static_cast<unsigned char>(s[pos]))) return SeqExpr::constant(Rat(Int(parse_integer())));
    fail("expected number, 'n' or '('");
  }
  long parse_integer() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected integer");
    return std::stol(std::string(s.substr(start, pos - start)));
  }
  Rat constant_value(const SeqExpr& e) {
    // must be constant: num and den degree 0, base 1
    auto is_const = [](const ExpPoly& p) {
      return p.is_zero() ||
             (p.terms().size() == 1 && p.terms()[0].degree == 0 && p.terms()[0].base == 1);
    };
    if (!is_const(e.num()) || !is_const(e.den())) fail("base of ^n must be constant");
    return e.eval(0);
  }
};

}  // namespace

SeqExpr parse_seq_expr(std::string_view text) {
  Parser p{text};
  SeqExpr v = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters");
  return v;
}

}  // namespace adic
