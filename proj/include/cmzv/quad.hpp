#pragma once

#include <functional>
#include <vector>

#include "cmzv/cplx.hpp"
#include "cmzv/ctx.hpp"

namespace cmzv {

// Integrand on (0,1).  Both t and 1-t are supplied so endpoint-singular
// factors can be formed without cancellation.
using Integrand01 = std::function<Cplx(const Real& t, const Real& omt)>;

struct QuadResult {
  Cplx value;
  Real err;        // heuristic: |S_l - S_{l-1}| * 10 at the last level
  int levels = 0;  // finest level used (h = 2^-levels)
  long evals = 0;
  bool converged = false;
};

// Adaptive tanh-sinh quadrature over (0,1).  Doubles the node density until
// successive sums agree to ~10^-(digits+guard-2) relative, or level 12.
QuadResult integrate_01(const Integrand01& f, const PrecisionCtx& ctx);

// Fixed Gauss-Legendre rule on [0,1]; nodes ascending.  Cached per thread by
// (order, precision).
struct GLRule {
  std::vector<Real> x, w;
};
const GLRule& gauss_legendre(int order, mpfr_prec_t prec);

// The tanh-sinh map t(u) = 1/(1+exp(-pi sinh u)) with complement and
// derivative, usable for any real u.
struct TSPoint {
  Real t, omt, dt;  // t, 1-t, dt/du
};
TSPoint ts_point(const Real& u);

// Truncation bound: |u| <= ts_umax(prec) keeps t(1-t) above the target
// accuracy floor for the given precision.
double ts_umax(mpfr_prec_t prec);

}  // namespace cmzv
