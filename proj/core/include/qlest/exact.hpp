#pragma once

#include <compare>
#include <string>

#include <gmpxx.h>

namespace qlest {

/// Arbitrary-precision signed integer. Every binomial in the library lives here.
using ExactInteger = mpz_class;

/// Arbitrary-precision rational, always kept in canonical (reduced) form.
using Rational = mpq_class;

/// Makes a canonical rational num/den. den must be nonzero.
Rational make_rational(const ExactInteger& num, const ExactInteger& den);

/// A probability held exactly as a rational in [0, 1].
///
/// Comparison is by value, so 2/4 and 1/2 compare equal even if a caller
/// builds one without canonicalizing.
class ExactProbability {
 public:
  ExactProbability() = default;
  explicit ExactProbability(Rational value);
  ExactProbability(const ExactInteger& num, const ExactInteger& den);

  const Rational& value() const { return value_; }
  double to_double() const { return value_.get_d(); }
  std::string to_string() const { return value_.get_str(); }

  bool is_zero() const { return sgn(value_) == 0; }

  friend bool operator==(const ExactProbability& a, const ExactProbability& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const ExactProbability& a,
                                          const ExactProbability& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Rational value_{0};
};

}  // namespace qlest
