#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qlest/exact.hpp"

namespace qlest {

/// n choose k, exact. Zero outside 0 <= k <= n. Throws std::domain_error
/// for negative n: negative upper indices are never a runtime domain here.
ExactInteger binom(std::int64_t n, std::int64_t k);

// Identity sums. Each evaluates its left-hand side term by term; the
// matching closed form is returned by the *_closed_form helpers so callers
// can compare the two routes. All throw std::invalid_argument on a
// precondition violation.

/// Sum over n = l .. 2R-2t+l of C(n-m, l-m) C(2R+m-n, 2t+m-l).
/// Requires 0 <= m <= l <= 2t and 0 <= t <= R.
ExactInteger theorem1_sum(std::int64_t l, std::int64_t m, std::int64_t t, std::int64_t R);

/// C(2R+1, 2t+1), the value theorem1_sum and corollary7_sum both reach.
ExactInteger theorem1_closed_form(std::int64_t t, std::int64_t R);

/// Vandermonde-Chu: sum over k = 0 .. y of C(x, k) C(z, y-k).
ExactInteger vandermonde_chu(std::int64_t x, std::int64_t y, std::int64_t z);

/// The truncated sum over n = l .. 2R-2t. Same domain as theorem1_sum plus
/// l <= 2R-2t.
ExactInteger short_sum(std::int64_t l, std::int64_t m, std::int64_t t, std::int64_t R);

/// True iff short_sum(l+1) - short_sum(l) == -C(2R-2t-m+1, l-m+1) C(2t+m, l).
/// Both l and l+1 must satisfy the short_sum domain.
bool theorem2_recurrence_check(std::int64_t l, std::int64_t m, std::int64_t t, std::int64_t R);

/// Sum over l = 0 .. 2R-2t of C(2R-2t-m+1, l-m+1) C(2t+m, l).
/// Requires 0 <= t <= R and 0 <= m <= 2R-2t+1.
ExactInteger corollary7_sum(std::int64_t m, std::int64_t t, std::int64_t R);

/// Sum over m = l .. R-t+l of C(m, l) C(R-m, t-l). Requires 0 <= l <= t <= R.
ExactInteger theorem3_sum(std::int64_t l, std::int64_t t, std::int64_t R);

/// Outcome of sweeping one identity over a parameter grid.
struct IdentityResult {
  std::string name;
  std::int64_t r_max = 0;
  std::int64_t points = 0;
  std::int64_t failures = 0;
  std::string first_failure;  // empty when failures == 0
  double seconds = 0.0;

  bool passed() const { return failures == 0 && points > 0; }
};

/// Exhaustive sweeps of every valid grid point with R <= r_max.
IdentityResult verify_theorem1(std::int64_t r_max);
IdentityResult verify_theorem1_independence(std::int64_t r_max);
IdentityResult verify_vandermonde(std::int64_t xz_max, std::int64_t y_max);
IdentityResult verify_theorem2(std::int64_t r_max);
IdentityResult verify_corollary7(std::int64_t r_max);
IdentityResult verify_theorem3(std::int64_t r_max);

/// Runs every identity sweep at one bound. Vandermonde uses x, z <= 20 and
/// y <= 40 regardless of r_max.
std::vector<IdentityResult> verify_all_identities(std::int64_t r_max);

}  // namespace qlest
