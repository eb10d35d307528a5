#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adic {

/// Arbitrary-precision integer. Tower heights grow exponentially with the
/// level, so every integer in the library is a big integer.
using Int = mpz_class;

/// Exact rational, always kept in canonical (reduced, positive-denominator)
/// form by GMP.
using Rat = mpq_class;

/// Library-wide error with a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

Rat rat(long num, long den = 1);

/// base^exp for integer exp (negative allowed when base != 0).
Rat rat_pow(const Rat& base, long exp);

/// "p/q" when q != 1, else "p". Inverse of rat_from_string.
std::string rat_to_string(const Rat& q);
Rat rat_from_string(std::string_view s);

/// Decimal rendering with the given number of significant digits, suitable
/// for plotting pipelines. Deterministic: round half away from zero, plain
/// notation for moderate magnitudes, otherwise dEe scientific form.
std::string rat_to_decimal(const Rat& q, int significant_digits = 17);

double rat_to_double(const Rat& q);

/// Best rational approximation with |x - p/q| <= tol, via continued
/// fractions. Returns nullopt for non-finite input.
std::optional<Rat> rationalize(double x, double tol);

int sign(const Rat& q);

}  // namespace adic
