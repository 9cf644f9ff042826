#include "cmzv/polylog.hpp"

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cmzv/exact.hpp"

namespace cmzv {

namespace {

Int ipow(long k, long r) {
  Int p = 1;
  for (long i = 0; i < r; ++i) p *= k;
  return p;
}

// Euler-Maclaurin tail sum_{n>=0} (X+n)^{-s}, s >= 2, X >> s.
Real em_tail(long s, const Real& X, const Real& eps) {
  Real res = pow(X, 1 - s) / Real(s - 1) + pow(X, -s) / 2;
  Real inv2 = 1 / (X * X);
  Real xpow = pow(X, -s - 1);  // X^{-(s+2j-1)} at j=1
  Int rising = s;              // (s)_{2j-1} at j=1
  Int fact = 2;                // (2j)! at j=1
  for (long j = 1; j <= 400; ++j) {
    Rat coef = bernoulli(2 * static_cast<unsigned>(j)) * Rat(rising, fact);
    Real term = Real(coef) * xpow;
    res += term;
    if (abs(term) < eps) return res;
    rising *= (s + 2 * j - 1);
    rising *= (s + 2 * j);
    fact *= (2 * j + 1);
    fact *= (2 * j + 2);
    xpow *= inv2;
  }
  throw std::runtime_error("euler-maclaurin tail did not converge");
}

Real zeta_uncached(long s, int work_digits) {
  long N = 2L * work_digits + 10;
  Real eps = pow10(-(work_digits + 4));
  Real head(0l);
  for (long n = 1; n < N; ++n) head += Real(Rat(Int(1), ipow(n, s)));
  return head + em_tail(s, Real(N), eps);
}

// ---- classical polylog routes ----

// direct series, valid for |z| <= 1/2 (and used for sub-unit |z| with the
// geometric tail bound |z|^{k+1} / ((k+1)^r (1-|z|)))
Cplx li_series(long r, const Cplx& z, int work_digits) {
  Real az = abs(z);
  Real eps = pow10(-(work_digits + 4));
  Real gap = 1 - az;
  Cplx zp = z, sum = z;
  Real azp = az;
  for (long k = 2; k <= 1000000; ++k) {
    zp *= z;
    sum += zp / Real(ipow(k, r));
    azp *= az;
    Real bound = azp * az / (Real(ipow(k + 1, r)) * gap);
    if (bound < eps) return sum;
  }
  throw std::runtime_error("polylog series did not converge");
}

// Eulerian-number row for Li_{-n}
std::vector<Int> eulerian_row(long n) {
  std::vector<Int> row{Int(1)};  // n = 1
  for (long m = 2; m <= n; ++m) {
    std::vector<Int> next(m, Int(0));
    for (long k = 0; k < m; ++k) {
      Int v = 0;
      if (k < m - 1) v += (k + 1) * row[k];
      if (k >= 1) v += (m - k) * row[k - 1];
      next[k] = v;
    }
    row = std::move(next);
  }
  return row;
}

Cplx li_nonpos(long r, const Cplx& z) {
  Cplx omz = Cplx(1l) - z;
  if (is_zero(omz)) throw std::domain_error("polylog pole at z = 1");
  long n = -r;
  if (n == 0) return z / omz;
  std::vector<Int> row = eulerian_row(n);
  Cplx p;  // Horner over descending powers z^n .. z^1, constant term 0
  for (long k = 0; k < n; ++k) p = p * z + Cplx(Real(row[k]));
  p *= z;
  return p / pow(omz, n + 1);
}

// expansion in mu = log z around z = 1, |mu| < 2 pi:
// Li_r(e^mu) = sum_{k>=0, k != r-1} zeta(r-k) mu^k/k!
//              + (H_{r-1} - log(-mu)) mu^{r-1}/(r-1)!
Cplx li_mu(long r, const Cplx& mu, const PrecisionCtx& ctx) {
  Real eps = pow10(-(ctx.working_digits() + 4));
  Cplx mupow(Real(1l));  // mu^k / k!
  Cplx sum;
  int small_run = 0;
  for (long k = 0; k <= 100000; ++k) {
    if (k > 0) mupow = mupow * mu / k;
    long rk = r - k;
    Cplx term;
    bool skip = false;
    if (rk >= 2) {
      term = mupow * zeta_real(rk, ctx);
    } else if (rk == 1) {
      term = mupow * (Cplx(Real(harmonic(r - 1))) - log(-mu));
    } else {
      long m = -rk;
      if (m == 0) {
        term = mupow * Real(Rat(-1, 2));
      } else if (m % 2 == 1) {
        term = mupow * Real(-bernoulli(static_cast<unsigned>(m) + 1) / (m + 1));
      } else {
        skip = true;  // zeta(-even) = 0
      }
    }
    if (!skip) sum += term;
    if (k >= r + 2) {
      if (!skip && abs(term) < eps) {
        if (++small_run >= 3) return sum;
      } else if (!skip) {
        small_run = 0;
      }
    }
  }
  throw std::runtime_error("polylog mu-expansion did not converge");
}

// head of 40*digits terms plus iterated Abel summation-by-parts tail against
// the geometric kernel; valid on 1/2 < |z| <= 1 with z away from 1
Cplx li_sbp(long r, const Cplx& z, const PrecisionCtx& ctx) {
  int D = ctx.working_digits();
  long N = 40L * ctx.digits;
  long jmax = static_cast<long>(1.6 * D) + 24;
  int ext_digits = D + static_cast<int>(0.302 * jmax) + 10;
  PrecGuard pg(static_cast<mpfr_prec_t>(ext_digits * 3.3219280948873623) + 16);
  Real eps = pow10(-(D + 6));

  Cplx sum, zp(Real(1l));
  for (long k = 1; k <= N; ++k) {
    zp *= z;
    sum += zp / Real(ipow(k, r));
  }
  // difference table of a_i = (M+i)^{-r}, M = N+1; complete monotonicity
  // gives the residual bound |f|^{j+1} |Delta^j a_M| after term j
  long M = N + 1;
  std::vector<Real> d;
  d.reserve(jmax + 1);
  for (long i = 0; i <= jmax; ++i) d.push_back(Real(Rat(Int(1), ipow(M + i, r))));

  Cplx omz = Cplx(1l) - z;
  Cplx f = z / omz;
  Real af = abs(f);
  Cplx pref = zp * z / omz;  // z^M / (1-z)
  Real afpow = af;
  Cplx tail;
  bool done = false;
  for (long j = 0; j <= jmax; ++j) {
    tail += pref * d[0];
    Real bound = afpow * abs(d[0]);
    if (bound < eps) {
      done = true;
      break;
    }
    afpow *= af;
    pref *= f;
    for (long i = 0; i + j + 1 <= jmax; ++i) d[i] = d[i + 1] - d[i];
  }
  if (!done) throw std::runtime_error("summation-by-parts tail did not converge");
  return sum + tail;
}

}  // namespace

Real zeta_real(long s, const PrecisionCtx& ctx) {
  if (s < 2) throw std::domain_error("zeta requires s >= 2");
  thread_local std::map<std::pair<long, int>, Real> cache;
  auto key = std::make_pair(s, ctx.working_digits());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  PrecGuard pg(ctx.prec_bits() + 32);
  Real v = zeta_uncached(s, ctx.working_digits() + 8);
  PrecGuard pg2(ctx.prec_bits());
  return cache.emplace(key, round_here(v)).first->second;
}

Real hurwitz_zeta(long s, const Rat& a, const PrecisionCtx& ctx) {
  if (s < 2) throw std::domain_error("hurwitz zeta requires s >= 2");
  if (a <= 0 || a > 1) throw std::domain_error("hurwitz zeta requires 0 < a <= 1");
  PrecGuard pg(ctx.prec_bits() + 32);
  int wd = ctx.working_digits() + 8;
  long N = 2L * wd + 10;
  Real eps = pow10(-(wd + 4));
  Real head(0l);
  for (long n = 0; n < N; ++n) head += pow(Real(Rat(n) + a), -s);
  Real v = head + em_tail(s, Real(Rat(N) + a), eps);
  PrecGuard pg2(ctx.prec_bits());
  return round_here(v);
}

Real l_chi8(const PrecisionCtx& ctx) {
  PrecGuard pg(ctx.prec_bits());
  Real v = hurwitz_zeta(2, Rat(1, 8), ctx) + hurwitz_zeta(2, Rat(3, 8), ctx) -
           hurwitz_zeta(2, Rat(5, 8), ctx) - hurwitz_zeta(2, Rat(7, 8), ctx);
  return v / 64;
}

Cplx li(long r, const Cplx& z, const PrecisionCtx& ctx) {
  PrecGuard pg(ctx.prec_bits());
  Cplx zz = round_here(z);
  if (r <= 0) return li_nonpos(r, zz);
  bool on_real_axis = sign(zz.im) == 0;
  if (r == 1) {
    if (on_real_axis && zz.re >= 1)
      throw std::domain_error("Li_1 on the cut [1, inf)");
    return -log1p(-zz);
  }
  Real az = abs(zz);
  if (az <= Real(Rat(1, 2)))
    return li_series(r, zz, ctx.working_digits());
  if (az <= 1 + pow10(-8)) {
    Cplx omz = Cplx(1l) - zz;
    if (is_zero(omz)) {
      if (r >= 2) return Cplx(zeta_real(r, ctx));
      throw std::domain_error("polylog pole at z = 1");
    }
    if (abs(omz) >= Real(Rat(3, 5)))
      return round_here(li_sbp(r, zz, ctx));
    return li_mu(r, log1p(-omz), ctx);
  }
  if (r != 2)
    throw std::domain_error("Li_r outside the closed unit disk only for r = 2");
  if (on_real_axis && zz.re > 1)
    throw std::domain_error("Li_2 on the cut (1, inf)");
  // inversion: Li2(z) = -pi^2/6 - log^2(-z)/2 - Li2(1/z)
  Real pi = const_pi();
  Cplx lm = log(-zz);
  return -Cplx(pi * pi / 6) - lm * lm * Real(Rat(1, 2)) - li(2, inv(zz), ctx);
}

Cplx li_near_one(long r, const Cplx& omz, const PrecisionCtx& ctx) {
  PrecGuard pg(ctx.prec_bits());
  if (r < 2) throw std::domain_error("li_near_one requires r >= 2");
  if (is_zero(omz)) return Cplx(zeta_real(r, ctx));
  return li_mu(r, log1p(-omz), ctx);
}

}  // namespace cmzv
