#include "adic/rational.hpp"

#include <cmath>
#include <sstream>

namespace adic {

Rat rat(long num, long den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Rat rat_pow(const Rat& base, long exp) {
  if (exp == 0) return Rat(1);
  if (base == 0) {
    if (exp < 0) throw Error("division-by-zero", "0 raised to a negative power");
    return Rat(0);
  }
  const unsigned long e = static_cast<unsigned long>(exp < 0 ? -exp : exp);
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
  out.canonicalize();
  if (exp < 0) out = 1 / out;
  return out;
}

std::string rat_to_string(const Rat& q) { return q.get_str(); }

Rat rat_from_string(std::string_view s) {
  Rat q;
  if (q.set_str(std::string(s), 10) != 0)
    throw Error("bad-rational", "cannot parse rational: '" + std::string(s) + "'");
  if (q.get_den() == 0) throw Error("bad-rational", "zero denominator: '" + std::string(s) + "'");
  q.canonicalize();
  return q;
}

std::string rat_to_decimal(const Rat& q, int significant_digits) {
  if (significant_digits < 1) significant_digits = 1;
  if (q == 0) return "0";
  const bool neg = q < 0;
  Rat a = neg ? Rat(-q) : q;

  // exponent e with 10^e <= a < 10^(e+1)
  long e = static_cast<long>(mpz_sizeinbase(a.get_num().get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(a.get_den().get_mpz_t(), 10));
  auto pow10 = [](long k) {
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
    return k < 0 ? Rat(1, p) : Rat(p);
  };
  while (a >= pow10(e + 1)) ++e;
  while (a < pow10(e)) --e;

  // round a / 10^(e+1-digits) half away from zero
  Rat scaled = a * pow10(significant_digits - 1 - e);
  Int digits = scaled.get_num() / scaled.get_den();
  Rat rem = scaled - Rat(digits);
  if (2 * rem >= 1) digits += 1;
  std::string ds = digits.get_str();
  if (static_cast<int>(ds.size()) > significant_digits) {  // rounding overflowed, e.g. 999.. -> 1000..
    ds = ds.substr(0, significant_digits);
    ++e;
  }

  std::string out;
  if (e >= significant_digits || e < -4) {
    out = ds.substr(0, 1);
    std::string frac = ds.substr(1);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) out += "." + frac;
    out += "e" + std::to_string(e);
  } else if (e >= 0) {
    std::string ip = ds.substr(0, e + 1);
    std::string frac = ds.substr(e + 1);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    out = ip;
    if (!frac.empty()) out += "." + frac;
  } else {
    std::string frac(static_cast<size_t>(-e - 1), '0');
    frac += ds;
    while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
    out = "0." + frac;
  }
  return neg ? "-" + out : out;
}

double rat_to_double(const Rat& q) { return q.get_d(); }

std::optional<Rat> rationalize(double x, double tol) {
  if (!std::isfinite(x) || !(tol > 0)) return std::nullopt;
  const bool neg = x < 0;
  double a = neg ? -x : x;
  // continued-fraction convergents p/q of a until |a - p/q| <= tol
  Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = a;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(frac);
    if (fl > 9e15) break;
    Int ai(static_cast<long>(fl));
    Int p2 = ai * p1 + p0;
    Int q2 = ai * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Rat approx(p1, q1);
    approx.canonicalize();
    if (std::abs(approx.get_d() - a) <= tol) return neg ? Rat(-approx) : approx;
    const double rest = frac - fl;
    if (rest < 1e-18) break;
    frac = 1.0 / rest;
  }
  return std::nullopt;
}

int sign(const Rat& q) { return mpq_sgn(q.get_mpq_t()); }

}  // namespace adic
