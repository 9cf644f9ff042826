#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmzv {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

// Exact binomial coefficient via the multiplicative formula; each step divides
// exactly, no factorials are formed.  Out-of-range k yields 0.
Int binomial(long n, long k);

// Generalized harmonic number H_m^(r) = sum_{j=1}^m 1/j^r, H_0 = 0.
Rat harmonic(long m, int r = 1);

// Central coefficient quotient B_k = C(2k,k) / (C(3k,k) C(6k,3k)), B_0 = 1.
Rat central_coeff(long k);

// One-step ratio B_{k+1}/B_k as an exact rational function of k.  Decreases
// monotonically to 1/108, which makes geometric tail certification possible.
Rat central_coeff_ratio(long k);

// Verifies 2(2k+1) C(2k,k) | C(3k,k) C(6k,3k) and returns the quotient.
// Throws std::runtime_error if divisibility fails.
Int check_divisibility(long k);

struct TelescopingResult {
  bool ok = false;
  long n_checked = 0;   // largest n verified
  long first_bad = -1;  // -1 when all partial sums matched
  Rat lhs;              // values at n_checked (or at first_bad)
  Rat rhs;
};

// Exact partial-sum identities for weighted central-coefficient sums at z=8:
//   variant 'A':  sum_{k=1}^n (100k^2-112k+15) B_k 8^k / k        == 4 - 4(2n+1) B_n 8^n
//   variant 'B':  sum_{k=1}^n (100k^2-104k+15) B_k 8^k / (k(2k-1)) == 4 - 4 B_n 8^n
// Every n <= n_max is compared exactly.
TelescopingResult telescoping_check(char variant, long n_max);

// Bernoulli number B_n (B_1 = -1/2), cached, exact recurrence.
const Rat& bernoulli(unsigned n);

// Small closed-form value  c1 + clog*log2 + clog2*log2^2 + cpi2*pi^2  with
// exact rational coefficients.  Covers every exact side appearing in the
// kernel-integral identities and the series engine output.
struct ExactValue {
  Rat c1, clog, clog2, cpi2;

  ExactValue() = default;
  explicit ExactValue(const Rat& r) : c1(r) {}

  ExactValue& operator+=(const ExactValue& o) {
    c1 += o.c1; clog += o.clog; clog2 += o.clog2; cpi2 += o.cpi2;
    return *this;
  }
  ExactValue& operator-=(const ExactValue& o) {
    c1 -= o.c1; clog -= o.clog; clog2 -= o.clog2; cpi2 -= o.cpi2;
    return *this;
  }
  ExactValue& scale(const Rat& r) {
    c1 *= r; clog *= r; clog2 *= r; cpi2 *= r;
    return *this;
  }
  bool is_zero() const {
    return c1 == 0 && clog == 0 && clog2 == 0 && cpi2 == 0;
  }
  std::string str() const;
};

ExactValue operator+(ExactValue a, const ExactValue& b);
ExactValue operator-(ExactValue a, const ExactValue& b);

// Parses "p" or "p/q" into an exact rational; throws on malformed input.
Rat parse_rational(const std::string& s);

}  // namespace cmzv
