#include "cmzv/real.hpp"

#include <cstdio>
#include <vector>

namespace cmzv {

namespace {
thread_local mpfr_prec_t g_prec = 256;
}

mpfr_prec_t real_prec() { return g_prec; }

void set_real_prec(mpfr_prec_t bits) {
  g_prec = bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : bits;
}

PrecGuard::PrecGuard(mpfr_prec_t bits) : saved(real_prec()) { set_real_prec(bits); }
PrecGuard::~PrecGuard() { set_real_prec(saved); }

Real const_pi() {
  Real r;
  mpfr_const_pi(r.v, MPFR_RNDN);
  return r;
}

Real const_log2() {
  Real r;
  mpfr_const_log2(r.v, MPFR_RNDN);
  return r;
}

Real const_catalan() {
  Real r;
  mpfr_const_catalan(r.v, MPFR_RNDN);
  return r;
}

Real pow10(long k) {
  Real r;
  if (k >= 0) {
    mpfr_ui_pow_ui(r.v, 10u, static_cast<unsigned long>(k), MPFR_RNDN);
  } else {
    mpfr_ui_pow_ui(r.v, 10u, static_cast<unsigned long>(-k), MPFR_RNDN);
    mpfr_si_div(r.v, 1, r.v, MPFR_RNDN);
  }
  return r;
}

std::string to_string(const Real& a, int sig_digits) {
  if (sig_digits < 2) sig_digits = 2;
  std::vector<char> buf(static_cast<size_t>(sig_digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", sig_digits - 1, a.v);
  return std::string(buf.data());
}

Real real_from_string(const std::string& s) {
  Real r;
  if (mpfr_set_str(r.v, s.c_str(), 10, MPFR_RNDN) != 0)
    throw std::invalid_argument("malformed real literal: " + s);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& a) {
  int d = static_cast<int>(mpfr_get_prec(a.v) / 3.33) - 2;
  if (d < 6) d = 6;
  if (d > 50) d = 50;
  return os << to_string(a, d);
}

}  // namespace cmzv
