#pragma once

#include <vector>

#include "cmzv/cplx.hpp"
#include "cmzv/ctx.hpp"
#include "cmzv/exact.hpp"
#include "cmzv/gpl.hpp"

namespace cmzv {

// Parameter x > 0 held through its exact square.  Admissible iff x^2 > 4/3:
// that single condition keeps |x(1-x^2)| above 2/(3 sqrt 3), makes
// sqrt(3x^2-4) real, and separates the six roots of w(1-w^2) = +-x(1-x^2).
// The series argument z = [4/(x(1-x^2))]^2 is then rational and < 108.
struct CubicParam {
  Rat x2;          // exact x^2
  Rat z;           // exact 16 / (x^2 (1-x^2)^2)
  Real x;          // positive square root at working precision
  Real disc_root;  // sqrt(3 x^2 - 4), real positive
  bool admissible = false;
};

// Builds the parameter from the exact square of x; throws unless x^2 > 4/3.
CubicParam cubic_param(const Rat& x2, const PrecisionCtx& ctx);

// sigma_{l,m} = ((-1)^l x + i (-1)^m sqrt(3x^2-4)) / 2.
Cplx sigma(int l, int m, const CubicParam& p);

// Signed partition of the six roots: plus = {x, sigma_10, sigma_11} solves
// w(1-w^2) = x(1-x^2), minus = {-x, sigma_00, sigma_01} the negated
// equation.  Each half sums to zero, as does log(1-1/w) over each half.
struct RootSet {
  std::vector<Cplx> plus;
  std::vector<Cplx> minus;

  std::vector<Cplx> all() const;
};

RootSet root_set(const CubicParam& p);

enum class SpecialFn { frakL, frakM, frakl, frakm };

// The four dilogarithmic combinations over the sigma values.  For real
// admissible x the first and third are real, the other two purely imaginary.
Cplx special_fn(SpecialFn which, const CubicParam& p, const PrecisionCtx& ctx);

// Same values through an independent grouping: the root-set form for the
// real pair, Schwarz-reflected conjugate pairs for the imaginary pair.
Cplx special_fn_alt(SpecialFn which, const CubicParam& p, const PrecisionCtx& ctx);

// log((x^2-2 + i s)/(x^2-2 - i s)) with s = sqrt(3x^2-4); purely imaginary,
// always paired with i/s coefficients in the closed forms.
Cplx disc_log(const CubicParam& p);

// artanh(1/x) = log((x+1)/(x-1)) / 2.
Real artanh_inv(const CubicParam& p);

// A3(w) = int_0^1 log^2(t^2/(1-t^2))/(t-w) dt through its weight-3 GPL
// closed form; w must avoid [0,1].
Cplx a3(const Cplx& w, const PrecisionCtx& ctx);

// Direct tanh-sinh quadrature of the defining integral (oracle).
Cplx a3_integral(const Cplx& w, const PrecisionCtx& ctx);

// AA3(a,b) = -int_0^1 log(1-t/a)/(t-b) log(t^2/(1-t^2)) dt
//          = 2 G(0,b,a;1) + sum_{tau=+-1} [G(b,a,tau;1) + G(b,tau,a;1)].
// b = 0 goes through leading-zero words; b = 1 through the divergent-word
// rewrite, which assigns the finite part of the then-divergent integral.
Cplx aa3(const Cplx& a, const Cplx& b, const PrecisionCtx& ctx);

// Quadrature oracle for aa3; the defining integral converges for b off
// [0,1) union {1}, and for b = 0.
Cplx aa3_integral(const Cplx& a, const Cplx& b, const PrecisionCtx& ctx);

enum class LiExpansion { squared, plus, minus };

// Word expansion of Li_{r+1} of q^2, q, or -q for q = t(1-t^2)/(x(1-x^2)):
//   squared:    Li_{r+1}(q^2) = -2^r sum_{alpha in {-1,0,1}^r} sum_{w in S_x}
//               G(alpha_1..alpha_r, w; t)
//   plus/minus: Li_{r+1}(+-q) = -sum_{alpha} sum_{w in S_x^{+-}} G(..., w; t)
// Words carry argument t in (0,1); r <= 2 supported.
GplCombination lemma22_words(int r, LiExpansion variant, const CubicParam& p,
                             const Real& t);

}  // namespace cmzv
