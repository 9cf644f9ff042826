#include "cmzv/exact.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace cmzv {

Int binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  Int r = 1;
  for (long j = 1; j <= k; ++j) {
    r *= (n - k + j);
    r /= j;  // exact at every step: r is C(n-k+j, j)
  }
  return r;
}

Rat harmonic(long m, int r) {
  Rat h = 0;
  Int p;
  for (long j = 1; j <= m; ++j) {
    p = j;
    for (int t = 1; t < r; ++t) p *= j;
    h += Rat(Int(1), p);
  }
  return h;
}

Rat central_coeff(long k) {
  if (k == 0) return Rat(1);
  return Rat(binomial(2 * k, k), binomial(3 * k, k) * binomial(6 * k, 3 * k));
}

Rat central_coeff_ratio(long k) {
  Int num = 2;
  num *= (2 * k + 1); num *= (2 * k + 1); num *= (2 * k + 2);
  num *= (3 * k + 1); num *= (3 * k + 2); num *= (3 * k + 3);
  Int den = 1;
  for (int i = 1; i <= 6; ++i) den *= (6 * k + i);
  return Rat(num, den);
}

Int check_divisibility(long k) {
  Int prod = binomial(3 * k, k) * binomial(6 * k, 3 * k);
  Int div = 2 * Int(2 * k + 1) * binomial(2 * k, k);
  Int q = prod / div;
  if (q * div != prod)
    throw std::runtime_error("divisibility failed at k=" + std::to_string(k));
  return q;
}

TelescopingResult telescoping_check(char variant, long n_max) {
  TelescopingResult res;
  Rat sum = 0;
  Rat bk = central_coeff(0);  // B_k, advanced via the exact one-step ratio
  Int pow8 = 1;
  for (long n = 1; n <= n_max; ++n) {
    bk *= central_coeff_ratio(n - 1);
    pow8 *= 8;
    Rat term;
    if (variant == 'A') {
      term = Rat(Int(100) * n * n - Int(112) * n + 15, n) * bk * pow8;
    } else if (variant == 'B') {
      term = Rat(Int(100) * n * n - Int(104) * n + 15, Int(n) * (2 * n - 1)) * bk * pow8;
    } else {
      throw std::invalid_argument("telescoping variant must be 'A' or 'B'");
    }
    sum += term;
    Rat closed;
    if (variant == 'A')
      closed = 4 - 4 * Rat(2 * n + 1) * bk * pow8;
    else
      closed = 4 - 4 * bk * pow8;
    if (sum != closed) {
      res.ok = false;
      res.first_bad = n;
      res.lhs = sum;
      res.rhs = closed;
      return res;
    }
    res.lhs = sum;
    res.rhs = closed;
  }
  res.ok = true;
  res.n_checked = n_max;
  return res;
}

const Rat& bernoulli(unsigned n) {
  static std::vector<Rat> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (cache.empty()) {
    cache.push_back(Rat(1));
    cache.push_back(Rat(-1, 2));
  }
  while (cache.size() <= n) {
    // sum_{j=0}^{m} C(m+1, j) B_j = 0  solved for B_m
    unsigned m = static_cast<unsigned>(cache.size());
    Rat s = 0;
    for (unsigned j = 0; j < m; ++j)
      s += Rat(binomial(m + 1, j)) * cache[j];
    cache.push_back(-s / Rat(binomial(m + 1, m)));
  }
  return cache[n];
}

std::string ExactValue::str() const {
  std::ostringstream os;
  os << c1;
  if (clog != 0) os << " + (" << clog << ")*log2";
  if (clog2 != 0) os << " + (" << clog2 << ")*log2^2";
  if (cpi2 != 0) os << " + (" << cpi2 << ")*pi^2";
  return os.str();
}

ExactValue operator+(ExactValue a, const ExactValue& b) { return a += b; }
ExactValue operator-(ExactValue a, const ExactValue& b) { return a -= b; }

Rat parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  try {
    return Rat(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

}  // namespace cmzv
