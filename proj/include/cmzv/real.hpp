#pragma once

#include <mpfr.h>

#include <ostream>
#include <string>

#include "cmzv/exact.hpp"

namespace cmzv {

// Working precision (bits) used for newly constructed Real values, per thread.
mpfr_prec_t real_prec();
void set_real_prec(mpfr_prec_t bits);

// Scoped precision change; restores the previous precision on destruction.
struct PrecGuard {
  mpfr_prec_t saved;
  explicit PrecGuard(mpfr_prec_t bits);
  ~PrecGuard();
  PrecGuard(const PrecGuard&) = delete;
  PrecGuard& operator=(const PrecGuard&) = delete;
};

// Value-semantic mpfr wrapper.  New values adopt the thread's working
// precision; copies keep the source's precision.
class Real {
 public:
  mpfr_t v;

  Real() { mpfr_init2(v, real_prec()); mpfr_set_zero(v, 1); }
  Real(long n) { mpfr_init2(v, real_prec()); mpfr_set_si(v, n, MPFR_RNDN); }
  Real(int n) : Real(static_cast<long>(n)) {}
  explicit Real(double d) { mpfr_init2(v, real_prec()); mpfr_set_d(v, d, MPFR_RNDN); }
  Real(const Rat& q) { mpfr_init2(v, real_prec()); mpfr_set_q(v, q.backend().data(), MPFR_RNDN); }
  Real(const Int& z) { mpfr_init2(v, real_prec()); mpfr_set_z(v, z.backend().data(), MPFR_RNDN); }
  Real(const Real& o) { mpfr_init2(v, mpfr_get_prec(o.v)); mpfr_set(v, o.v, MPFR_RNDN); }
  Real(Real&& o) noexcept {
    mpfr_init2(v, MPFR_PREC_MIN);
    mpfr_swap(v, o.v);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v, mpfr_get_prec(o.v));
      mpfr_set(v, o.v, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v, o.v);
    return *this;
  }
  ~Real() { mpfr_clear(v); }

  Real& operator+=(const Real& o) { mpfr_add(v, v, o.v, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v, v, o.v, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v, v, o.v, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v, v, o.v, MPFR_RNDN); return *this; }
  Real& operator+=(long n) { mpfr_add_si(v, v, n, MPFR_RNDN); return *this; }
  Real& operator-=(long n) { mpfr_sub_si(v, v, n, MPFR_RNDN); return *this; }
  Real& operator*=(long n) { mpfr_mul_si(v, v, n, MPFR_RNDN); return *this; }
  Real& operator/=(long n) { mpfr_div_si(v, v, n, MPFR_RNDN); return *this; }

  friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v, a.v, b.v, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v, a.v, b.v, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v, a.v, b.v, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v, a.v, b.v, MPFR_RNDN); return r; }
  friend Real operator+(const Real& a, long b) { Real r; mpfr_add_si(r.v, a.v, b, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, long b) { Real r; mpfr_sub_si(r.v, a.v, b, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, long b) { Real r; mpfr_mul_si(r.v, a.v, b, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, long b) { Real r; mpfr_div_si(r.v, a.v, b, MPFR_RNDN); return r; }
  friend Real operator+(long a, const Real& b) { return b + a; }
  friend Real operator-(long a, const Real& b) { Real r; mpfr_si_sub(r.v, a, b.v, MPFR_RNDN); return r; }
  friend Real operator*(long a, const Real& b) { return b * a; }
  friend Real operator/(long a, const Real& b) { Real r; mpfr_si_div(r.v, a, b.v, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a) { Real r; mpfr_neg(r.v, a.v, MPFR_RNDN); return r; }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v, b.v) == 0; }
  friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.v, b.v) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v, b.v) < 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v, b.v) <= 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v, b.v) > 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v, b.v) >= 0; }
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v, b) == 0; }
  friend bool operator!=(const Real& a, long b) { return mpfr_cmp_si(a.v, b) != 0; }
  friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v, b) < 0; }
  friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v, b) <= 0; }
  friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v, b) > 0; }
  friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v, b) >= 0; }
};

inline Real abs(const Real& a) { Real r; mpfr_abs(r.v, a.v, MPFR_RNDN); return r; }
inline Real sqrt(const Real& a) { Real r; mpfr_sqrt(r.v, a.v, MPFR_RNDN); return r; }
inline Real cbrt(const Real& a) { Real r; mpfr_cbrt(r.v, a.v, MPFR_RNDN); return r; }
inline Real log(const Real& a) { Real r; mpfr_log(r.v, a.v, MPFR_RNDN); return r; }
inline Real log1p(const Real& a) { Real r; mpfr_log1p(r.v, a.v, MPFR_RNDN); return r; }
inline Real exp(const Real& a) { Real r; mpfr_exp(r.v, a.v, MPFR_RNDN); return r; }
inline Real expm1(const Real& a) { Real r; mpfr_expm1(r.v, a.v, MPFR_RNDN); return r; }
inline Real sin(const Real& a) { Real r; mpfr_sin(r.v, a.v, MPFR_RNDN); return r; }
inline Real cos(const Real& a) { Real r; mpfr_cos(r.v, a.v, MPFR_RNDN); return r; }
inline Real tan(const Real& a) { Real r; mpfr_tan(r.v, a.v, MPFR_RNDN); return r; }
inline Real atan(const Real& a) { Real r; mpfr_atan(r.v, a.v, MPFR_RNDN); return r; }
inline Real asin(const Real& a) { Real r; mpfr_asin(r.v, a.v, MPFR_RNDN); return r; }
inline Real acos(const Real& a) { Real r; mpfr_acos(r.v, a.v, MPFR_RNDN); return r; }
inline Real atan2(const Real& y, const Real& x) { Real r; mpfr_atan2(r.v, y.v, x.v, MPFR_RNDN); return r; }
inline Real sinh(const Real& a) { Real r; mpfr_sinh(r.v, a.v, MPFR_RNDN); return r; }
inline Real cosh(const Real& a) { Real r; mpfr_cosh(r.v, a.v, MPFR_RNDN); return r; }
inline Real tanh(const Real& a) { Real r; mpfr_tanh(r.v, a.v, MPFR_RNDN); return r; }
inline Real asinh(const Real& a) { Real r; mpfr_asinh(r.v, a.v, MPFR_RNDN); return r; }
inline Real atanh(const Real& a) { Real r; mpfr_atanh(r.v, a.v, MPFR_RNDN); return r; }
inline Real pow(const Real& b, long e) { Real r; mpfr_pow_si(r.v, b.v, e, MPFR_RNDN); return r; }
inline Real pow(const Real& b, const Real& e) { Real r; mpfr_pow(r.v, b.v, e.v, MPFR_RNDN); return r; }
inline Real hypot(const Real& x, const Real& y) { Real r; mpfr_hypot(r.v, x.v, y.v, MPFR_RNDN); return r; }
inline Real floor(const Real& a) { Real r; mpfr_floor(r.v, a.v); return r; }
inline Real ldexp2(const Real& a, long e) { Real r; mpfr_mul_2si(r.v, a.v, e, MPFR_RNDN); return r; }

// Re-round a value into the current working precision.
inline Real round_here(const Real& x) {
  Real r;
  mpfr_set(r.v, x.v, MPFR_RNDN);
  return r;
}

inline bool is_nan(const Real& a) { return mpfr_nan_p(a.v) != 0; }
inline bool is_inf(const Real& a) { return mpfr_inf_p(a.v) != 0; }
inline bool is_finite(const Real& a) { return mpfr_number_p(a.v) != 0; }
inline int sign(const Real& a) { return mpfr_sgn(a.v); }
inline double to_double(const Real& a) { return mpfr_get_d(a.v, MPFR_RNDN); }
inline long to_long(const Real& a) { return mpfr_get_si(a.v, MPFR_RNDN); }

// Constants at the current working precision.
Real const_pi();
Real const_log2();
Real const_catalan();

// 10^k at current precision.
Real pow10(long k);

// Scientific string with the given significant digits; round-trips via
// real_from_string at equal or higher precision.
std::string to_string(const Real& a, int sig_digits);
Real real_from_string(const std::string& s);

std::ostream& operator<<(std::ostream& os, const Real& a);

}  // namespace cmzv
