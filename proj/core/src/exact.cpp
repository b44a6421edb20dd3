#include "qlest/exact.hpp"

#include <stdexcept>
#include <utility>

namespace qlest {

Rational make_rational(const ExactInteger& num, const ExactInteger& den) {
  if (sgn(den) == 0) {
    throw std::domain_error("rational with zero denominator");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

ExactProbability::ExactProbability(Rational value) : value_(std::move(value)) {
  value_.canonicalize();
  if (sgn(value_) < 0 || cmp(value_, 1) > 0) {
    throw std::domain_error("probability outside [0, 1]: " + value_.get_str());
  }
}

ExactProbability::ExactProbability(const ExactInteger& num, const ExactInteger& den)
    : ExactProbability(make_rational(num, den)) {}

}  // namespace qlest
