#pragma once

#include <ostream>

#include "cmzv/real.hpp"

namespace cmzv {

// Complex value on top of Real.  log/sqrt/arg use principal branches with the
// cut on the negative real axis, arg in (-pi, pi].
struct Cplx {
  Real re, im;

  Cplx() = default;
  Cplx(Real r) : re(std::move(r)) {}
  Cplx(long r) : re(r) {}
  Cplx(int r) : re(long(r)) {}
  Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Cplx& operator+=(const Cplx& o) { re += o.re; im += o.im; return *this; }
  Cplx& operator-=(const Cplx& o) { re -= o.re; im -= o.im; return *this; }
  Cplx& operator*=(const Cplx& o) {
    Real t = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(t);
    return *this;
  }
  Cplx& operator*=(const Real& s) { re *= s; im *= s; return *this; }
  Cplx& operator/=(const Real& s) { re /= s; im /= s; return *this; }
  Cplx& operator*=(long s) { re *= s; im *= s; return *this; }
  Cplx& operator/=(long s) { re /= s; im /= s; return *this; }
};

inline Cplx operator+(Cplx a, const Cplx& b) { return a += b; }
inline Cplx operator-(Cplx a, const Cplx& b) { return a -= b; }
inline Cplx operator-(const Cplx& a) { return Cplx(-a.re, -a.im); }
inline Cplx operator*(Cplx a, const Cplx& b) { return a *= b; }
inline Cplx operator*(Cplx a, const Real& s) { return a *= s; }
inline Cplx operator*(const Real& s, Cplx a) { return a *= s; }
inline Cplx operator*(Cplx a, long s) { return a *= s; }
inline Cplx operator*(long s, Cplx a) { return a *= s; }

inline Real norm(const Cplx& a) { return a.re * a.re + a.im * a.im; }
inline Real abs(const Cplx& a) { return hypot(a.re, a.im); }
inline Cplx conj(const Cplx& a) { return Cplx(a.re, -a.im); }

inline Cplx inv(const Cplx& a) {
  Real n = norm(a);
  return Cplx(a.re / n, -a.im / n);
}

inline Cplx operator/(const Cplx& a, const Cplx& b) { return a * inv(b); }
inline Cplx operator/(Cplx a, const Real& s) { return a /= s; }
inline Cplx operator/(Cplx a, long s) { return a /= s; }
inline Cplx operator/(long s, const Cplx& b) { return Real(s) * inv(b); }

inline bool is_zero(const Cplx& a) { return sign(a.re) == 0 && sign(a.im) == 0; }

inline Real arg(const Cplx& a) { return atan2(a.im, a.re); }

inline Cplx log(const Cplx& a) { return Cplx(log(abs(a)), arg(a)); }

// log(1 + w), accurate for small |w|: |1+w|^2 = 1 + (2 Re w + |w|^2)
inline Cplx log1p(const Cplx& w) {
  Real u = 2 * w.re + norm(w);
  return Cplx(log1p(u) / 2, atan2(w.im, 1 + w.re));
}

inline Cplx exp(const Cplx& a) {
  Real m = exp(a.re);
  return Cplx(m * cos(a.im), m * sin(a.im));
}

inline Cplx sqrt(const Cplx& a) {
  // principal branch via half-angle, stable for all quadrants
  Real m = abs(a);
  if (sign(m) == 0) return Cplx();
  Real t = sqrt((m + abs(a.re)) / 2);
  if (sign(a.re) >= 0) {
    Real i = a.im / (2 * t);
    return Cplx(t, i);
  }
  Real r = abs(a.im) / (2 * t);
  return sign(a.im) >= 0 ? Cplx(r, t) : Cplx(r, -t);
}

inline Cplx pow(const Cplx& b, long e) {
  if (e < 0) return inv(pow(b, -e));
  Cplx r(1), base = b;
  long n = e;
  while (n > 0) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

// e^{i t}
inline Cplx unit(const Real& t) { return Cplx(cos(t), sin(t)); }

inline Cplx round_here(const Cplx& z) { return Cplx(round_here(z.re), round_here(z.im)); }

inline std::ostream& operator<<(std::ostream& os, const Cplx& a) {
  return os << "(" << a.re << ", " << a.im << ")";
}

}  // namespace cmzv
