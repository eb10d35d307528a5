#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adic/rational.hpp"

namespace adic {

/// One term of an exponential polynomial: coeff * n^degree * base^n,
/// with base a positive rational. base == 1 gives an ordinary monomial.
struct ExpMonomial {
  Rat coeff;
  unsigned degree = 0;
  Rat base = Rat(1);
};

/// Normalized sum of ExpMonomials, ordered by (base, degree) descending so
/// that the front term dominates as n -> infinity.
class ExpPoly {
 public:
  ExpPoly() = default;  // zero
  explicit ExpPoly(std::vector<ExpMonomial> terms);
  static ExpPoly constant(const Rat& c);
  static ExpPoly variable();                 // n
  static ExpPoly geometric(const Rat& base); // base^n

  bool is_zero() const { return terms_.empty(); }
  const std::vector<ExpMonomial>& terms() const { return terms_; }
  const ExpMonomial* dominant() const { return terms_.empty() ? nullptr : &terms_.front(); }

  Rat eval(long n) const;

  ExpPoly operator-() const;
  friend ExpPoly operator+(const ExpPoly& a, const ExpPoly& b);
  friend ExpPoly operator-(const ExpPoly& a, const ExpPoly& b);
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);

  /// Substitute n <- scale*m + offset and return the result as an
  /// exponential polynomial in m. scale >= 1.
  ExpPoly substitute_affine(long scale, long offset) const;

  /// Certified threshold N >= 1: for every n >= N the sign of eval(n)
  /// equals the sign of the dominant coefficient. Returns nullopt when the
  /// search exceeds its budget (never for zero/monomial inputs).
  std::optional<long> sign_stable_from() const;

  std::string to_string() const;

 private:
  std::vector<ExpMonomial> terms_;
};

/// Quotient of two exponential polynomials; the term language of the
/// symbolic series classifier. Closed under +, -, *, /.
class SeqExpr {
 public:
  SeqExpr() : num_(), den_(ExpPoly::constant(Rat(1))) {}  // zero
  SeqExpr(ExpPoly num, ExpPoly den);
  static SeqExpr constant(const Rat& c);
  static SeqExpr variable();
  static SeqExpr geometric(const Rat& base);

  const ExpPoly& num() const { return num_; }
  const ExpPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  /// Exact value at integer n; throws Error("seq-eval") when the
  /// denominator vanishes there.
  Rat eval(long n) const;

  SeqExpr operator-() const;
  friend SeqExpr operator+(const SeqExpr& a, const SeqExpr& b);
  friend SeqExpr operator-(const SeqExpr& a, const SeqExpr& b);
  friend SeqExpr operator*(const SeqExpr& a, const SeqExpr& b);
  friend SeqExpr operator/(const SeqExpr& a, const SeqExpr& b);

  struct Limit {
    enum class Kind { Finite, PlusInfinity, MinusInfinity };
    Kind kind = Kind::Finite;
    Rat value;  // meaningful for Finite
  };
  Limit limit() const;

  /// Sign of eval(n) for all large n: -1, 0 (identically zero), +1.
  int eventual_sign() const;

  /// Certified level from which the eventual sign (and dominance data)
  /// holds. nullopt when certification exceeded its budget.
  std::optional<long> eventual_from() const;

  SeqExpr substitute_affine(long scale, long offset) const;

  std::string to_string() const;

 private:
  ExpPoly num_, den_;
};

/// A level-indexed sequence with finitely many interleaved SeqExpr branches:
/// term(n) = cases[n mod period] evaluated at the block index m = n / period.
/// Models level-periodic families (alternating incidence matrices, periodic
/// vertex tracks). valid_from records the first level at which the symbolic
/// form is asserted to equal the modeled quantity.
class SymbolicSeq {
 public:
  SymbolicSeq() : cases_{SeqExpr()} {}
  /*implicit*/ SymbolicSeq(SeqExpr e, long valid_from = 1);
  SymbolicSeq(unsigned period, std::vector<SeqExpr> cases, long valid_from = 1);
  static SymbolicSeq constant(const Rat& c);

  unsigned period() const { return period_; }
  const std::vector<SeqExpr>& cases() const { return cases_; }
  long valid_from() const { return valid_from_; }
  bool is_zero() const;
  bool is_constant_one() const;

  Rat eval(long n) const;

  /// Same sequence re-expressed with a period that is a positive multiple
  /// of the current one.
  SymbolicSeq with_period(unsigned p) const;

  /// term'(n) = term(n + delta).
  SymbolicSeq shift(long delta) const;

  friend SymbolicSeq operator+(const SymbolicSeq& a, const SymbolicSeq& b);
  friend SymbolicSeq operator-(const SymbolicSeq& a, const SymbolicSeq& b);
  friend SymbolicSeq operator*(const SymbolicSeq& a, const SymbolicSeq& b);
  friend SymbolicSeq operator/(const SymbolicSeq& a, const SymbolicSeq& b);

  std::string to_string() const;

 private:
  unsigned period_ = 1;
  std::vector<SeqExpr> cases_;
  long valid_from_ = 1;
};

/// Parse the expression grammar used for family parameters in JSON specs:
/// integers, rationals, 'n', + - * / ^, parentheses. 'c^n' (constant base)
/// yields a geometric term; 'n^k' a monomial. Example: "(1/2)*2^n + 1".
SeqExpr parse_seq_expr(std::string_view text);

}  // namespace adic
