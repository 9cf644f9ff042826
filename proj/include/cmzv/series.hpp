#pragma once

#include <memory>
#include <string>

#include "cmzv/cplx.hpp"
#include "cmzv/ctx.hpp"
#include "cmzv/exact.hpp"

namespace cmzv {

// Weight expression in the summation index k, parsed from an infix source
// string.  Grammar: integers, k, log2, pi2 (= pi^2), harmonic atoms H(a*k+b)
// and H2(a*k+b) with integer linear arguments, operators + - * / ^, and
// parentheses.  A digit run directly before k, an identifier, or ( denotes
// multiplication, so 2k-1 and 3(6k-1) parse as written.
struct WNode;
using WExpr = std::shared_ptr<const WNode>;

WExpr parse_weight(const std::string& src);
const std::string& weight_source(const WExpr& w);

// Exact value of the weight at index k over the basis {1, log2, log2^2, pi^2}.
// Harmonic atoms with nonpositive index are empty sums.  Throws on division
// by zero and on products leaving the basis.
ExactValue weight_value(const WExpr& w, long k);

// Numeric embedding of an exact basis value.
Real exact_embed(const ExactValue& v, const PrecisionCtx& ctx);

// One weighted central-coefficient series  sum_{k>=k0} weight(k) B_k z^k.
// z is an exact rational inside the convergence disk |z| < 108; records whose
// argument is determined by a cubic parameter bind it before summation.
struct SeriesSpec {
  int k0 = 1;
  bool z_param = false;
  Rat z{0};
  WExpr weight;
  std::string via;  // optional integral-route tag consumed by the catalog
};

// Parses "k0=1 z=8 weight=(350*k-17)/k [via=int-plain-1]"; z=param defers the
// argument.  series_source reproduces the parsed fields verbatim.
SeriesSpec parse_series(const std::string& src);
std::string series_source(const SeriesSpec& spec);

// Exact term weight(k) * B_k * z^k.
ExactValue term_exact(const SeriesSpec& spec, long k);

struct SeriesResult {
  Cplx value;
  long terms_used = 0;
  Real tail_bound;
};

// Partial sum with a certified geometric tail.  Terms accumulate exactly
// through k = 200, numerically with guard precision beyond.  The stopping
// certificate bounds every later term by a decreasing envelope: structural
// ratio bounds for polynomial, harmonic, and divisor factors multiply the
// exact one-step ratio B_{k+1}/B_k, giving |term_j| <= env(K) rho^{j-K} with
// rho < 1 for all j > K, whence tail <= env(K) rho/(1-rho) <= 10^-(digits+2).
// Throws std::domain_error for |z| >= 108 and std::logic_error when z is
// still parametric.
SeriesResult sum_series(const SeriesSpec& spec, const PrecisionCtx& ctx);

// Integral representations of the weighted sums over the kernel
// f(t) = z [t(1-t^2)/4]^2, usable on the full closed disk |z| <= 108 where
// direct summation at the boundary converges only polynomially.  With
// s >= 1 the families are
//   plain:  sum B_k z^k / k^{s+1}              = 4 int Li_s(f) dt/(1-t^2)
//   log_t:  sum (-H_k+2H_{2k}+H_{3k}-2H_{6k}) B_k z^k / k^{s+1}
//                                              = 8 int Li_s(f) log(t) dt/(1-t^2)
//   log_a:  sum (H_{2k-1}+H_{3k}-2H_{6k}) B_k z^k / k^{s+1}
//                                              = 4 int Li_s(f) log((1-t^2)/4) dt/(1-t^2)
//   hk:     sum H_k B_k z^k / k^2 (s fixed at 1)
//                                              = 4 int [Li_2(f) + log^2(1-f)/2] dt/(1-t^2)
// At z = 108 the kernel touches 1 at t = 1/sqrt(3); the integral is split
// there and 1 - f is evaluated through its factored form, so the logarithmic
// singularity costs no accuracy.
enum class IntKernel { plain, log_t, log_a, hk };
Cplx series_by_integral(IntKernel kern, long s, const Rat& z,
                        const PrecisionCtx& ctx);

// Decodes a via tag ("int-plain-2", "int-logt-1", "int-loga-1", "int-hk").
struct IntRoute {
  IntKernel kern;
  long s;
};
IntRoute parse_via(const std::string& tag);

}  // namespace cmzv
