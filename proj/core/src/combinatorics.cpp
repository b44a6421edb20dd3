#include "qlest/combinatorics.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

namespace qlest {

ExactInteger binom(std::int64_t n, std::int64_t k) {
  if (n < 0) {
    throw std::domain_error("binom: negative upper index " + std::to_string(n));
  }
  if (k < 0 || k > n) return 0;
  ExactInteger result;
  mpz_bin_uiui(result.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return result;
}

namespace {

// Lower-index-only zero convention for the summands: the identities below
// can reach a negative upper index only outside their support, where the
// term is zero anyway.
ExactInteger term(std::int64_t n, std::int64_t k) {
  if (n < 0) return 0;
  return binom(n, k);
}

[[noreturn]] void precondition(const std::string& what) {
  throw std::invalid_argument(what);
}

void check_queue_domain(const char* op, std::int64_t l, std::int64_t m, std::int64_t t,
                        std::int64_t R) {
  if (m < 0 || l < m || t < 0 || t > R || l > 2 * t) {
    std::ostringstream os;
    os << op << ": need 0 <= m <= l <= 2t and 0 <= t <= R, got l=" << l << " m=" << m
       << " t=" << t << " R=" << R;
    precondition(os.str());
  }
}

ExactInteger queue_summand(std::int64_t n, std::int64_t l, std::int64_t m, std::int64_t t,
                           std::int64_t R) {
  return term(n - m, l - m) * term(2 * R + m - n, 2 * t + m - l);
}

using Clock = std::chrono::steady_clock;

IdentityResult start_result(std::string name, std::int64_t r_max) {
  IdentityResult res;
  res.name = std::move(name);
  res.r_max = r_max;
  return res;
}

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename... Args>
std::string describe(Args... args) {
  std::ostringstream os;
  ((os << args << ' '), ...);
  return os.str();
}

}  // namespace

ExactInteger theorem1_sum(std::int64_t l, std::int64_t m, std::int64_t t, std::int64_t R) {
  check_queue_domain("theorem1_sum", l, m, t, R);
  ExactInteger sum = 0;
  for (std::int64_t n = l; n <= 2 * R - 2 * t + l; ++n) {
    sum += queue_summand(n, l, m, t, R);
  }
  return sum;
}

ExactInteger theorem1_closed_form(std::int64_t t, std::int64_t R) {
  return binom(2 * R + 1, 2 * t + 1);
}

ExactInteger vandermonde_chu(std::int64_t x, std::int64_t y, std::int64_t z) {
  if (x < 0 || y < 0 || z < 0) {
    precondition("vandermonde_chu: arguments must be nonnegative");
  }
  ExactInteger sum = 0;
  for (std::int64_t k = 0; k <= y; ++k) {
    sum += binom(x, k) * binom(z, y - k);
  }
  return sum;
}

ExactInteger short_sum(std::int64_t l, std::int64_t m, std::int64_t t, std::int64_t R) {
  check_queue_domain("short_sum", l, m, t, R);
  if (l > 2 * R - 2 * t) {
    precondition("short_sum: need l <= 2R-2t");
  }
  ExactInteger sum = 0;
  for (std::int64_t n = l; n <= 2 * R - 2 * t; ++n) {
    sum += queue_summand(n, l, m, t, R);
  }
  return sum;
}

bool theorem2_recurrence_check(std::int64_t l, std::int64_t m, std::int64_t t,
                               std::int64_t R) {
  const ExactInteger step = short_sum(l + 1, m, t, R) - short_sum(l, m, t, R);
  const ExactInteger expected =
      -(term(2 * R - 2 * t - m + 1, l - m + 1) * term(2 * t + m, l));
  return step == expected;
}

ExactInteger corollary7_sum(std::int64_t m, std::int64_t t, std::int64_t R) {
  if (t < 0 || t > R || m < 0 || m > 2 * R - 2 * t + 1) {
    precondition("corollary7_sum: need 0 <= t <= R and 0 <= m <= 2R-2t+1");
  }
  ExactInteger sum = 0;
  for (std::int64_t l = 0; l <= 2 * R - 2 * t; ++l) {
    sum += term(2 * R - 2 * t - m + 1, l - m + 1) * term(2 * t + m, l);
  }
  return sum;
}

ExactInteger theorem3_sum(std::int64_t l, std::int64_t t, std::int64_t R) {
  if (l < 0 || l > t || t > R) {
    precondition("theorem3_sum: need 0 <= l <= t <= R");
  }
  ExactInteger sum = 0;
  for (std::int64_t m = l; m <= R - t + l; ++m) {
    sum += binom(m, l) * binom(R - m, t - l);
  }
  return sum;
}

IdentityResult verify_theorem1(std::int64_t r_max) {
  const auto start = Clock::now();
  IdentityResult res = start_result("theorem1", r_max);
  for (std::int64_t R = 0; R <= r_max; ++R) {
    for (std::int64_t t = 0; t <= R; ++t) {
      const ExactInteger expected = theorem1_closed_form(t, R);
      for (std::int64_t l = 0; l <= 2 * t; ++l) {
        for (std::int64_t m = 0; m <= l; ++m) {
          ++res.points;
          if (theorem1_sum(l, m, t, R) != expected) {
            if (res.failures++ == 0) res.first_failure = describe("l", l, "m", m, "t", t, "R", R);
          }
        }
      }
    }
  }
  res.seconds = elapsed(start);
  return res;
}

IdentityResult verify_theorem1_independence(std::int64_t r_max) {
  const auto start = Clock::now();
  IdentityResult res = start_result("theorem1-independence", r_max);
  for (std::int64_t R = 0; R <= r_max; ++R) {
    for (std::int64_t t = 0; t <= R; ++t) {
      const ExactInteger reference = theorem1_sum(0, 0, t, R);
      for (std::int64_t l = 0; l <= 2 * t; ++l) {
        for (std::int64_t m = 0; m <= l; ++m) {
          ++res.points;
          if (theorem1_sum(l, m, t, R) != reference) {
            if (res.failures++ == 0) res.first_failure = describe("l", l, "m", m, "t", t, "R", R);
          }
        }
      }
    }
  }
  res.seconds = elapsed(start);
  return res;
}

IdentityResult verify_vandermonde(std::int64_t xz_max, std::int64_t y_max) {
  const auto start = Clock::now();
  IdentityResult res = start_result("vandermonde-chu", xz_max);
  for (std::int64_t x = 0; x <= xz_max; ++x) {
    for (std::int64_t z = 0; z <= xz_max; ++z) {
      for (std::int64_t y = 0; y <= y_max; ++y) {
        ++res.points;
        if (vandermonde_chu(x, y, z) != binom(x + z, y)) {
          if (res.failures++ == 0) res.first_failure = describe("x", x, "y", y, "z", z);
        }
      }
    }
  }
  res.seconds = elapsed(start);
  return res;
}

IdentityResult verify_theorem2(std::int64_t r_max) {
  const auto start = Clock::now();
  IdentityResult res = start_result("theorem2-recurrence", r_max);
  for (std::int64_t R = 0; R <= r_max; ++R) {
    for (std::int64_t t = 0; t <= R; ++t) {
      // l and l+1 must both lie in the short-sum domain.
      const std::int64_t l_top = std::min(2 * t, 2 * R - 2 * t) - 1;
      for (std::int64_t l = 0; l <= l_top; ++l) {
        for (std::int64_t m = 0; m <= l; ++m) {
          ++res.points;
          if (!theorem2_recurrence_check(l, m, t, R)) {
            if (res.failures++ == 0) res.first_failure = describe("l", l, "m", m, "t", t, "R", R);
          }
        }
      }
    }
  }
  res.seconds = elapsed(start);
  return res;
}

IdentityResult verify_corollary7(std::int64_t r_max) {
  const auto start = Clock::now();
  IdentityResult res = start_result("corollary7", r_max);
  for (std::int64_t R = 0; R <= r_max; ++R) {
    for (std::int64_t t = 0; t <= R; ++t) {
      const ExactInteger expected = theorem1_closed_form(t, R);
      for (std::int64_t m = 0; m <= 2 * R - 2 * t + 1; ++m) {
        ++res.points;
        if (corollary7_sum(m, t, R) != expected) {
          if (res.failures++ == 0) res.first_failure = describe("m", m, "t", t, "R", R);
        }
      }
    }
  }
  res.seconds = elapsed(start);
  return res;
}

IdentityResult verify_theorem3(std::int64_t r_max) {
  const auto start = Clock::now();
  IdentityResult res = start_result("theorem3", r_max);
  for (std::int64_t R = 0; R <= r_max; ++R) {
    for (std::int64_t t = 0; t <= R; ++t) {
      const ExactInteger expected = binom(R + 1, t + 1);
      for (std::int64_t l = 0; l <= t; ++l) {
        ++res.points;
        if (theorem3_sum(l, t, R) != expected) {
          if (res.failures++ == 0) res.first_failure = describe("l", l, "t", t, "R", R);
        }
      }
    }
  }
  res.seconds = elapsed(start);
  return res;
}

std::vector<IdentityResult> verify_all_identities(std::int64_t r_max) {
  return {
      verify_theorem1(r_max),   verify_theorem1_independence(r_max),
      verify_vandermonde(20, 40), verify_theorem2(r_max),
      verify_corollary7(r_max), verify_theorem3(r_max),
  };
}

}  // namespace qlest
