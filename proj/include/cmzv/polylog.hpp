#pragma once

#include "cmzv/cplx.hpp"
#include "cmzv/ctx.hpp"

namespace cmzv {

// Riemann zeta at integer s >= 2, Euler-Maclaurin with Bernoulli tail,
// cached per (s, precision).  Result carries ctx working precision.
Real zeta_real(long s, const PrecisionCtx& ctx);

// Hurwitz zeta(s, a) for integer s >= 2, a in (0, 1]; same method.
Real hurwitz_zeta(long s, const Rat& a, const PrecisionCtx& ctx);

// L(2, chi) for the even-minus-odd character mod 8 on residues 1,3,5,7
// (signs +,+,-,-): sum_{k>=0} (-1)^{k(k-1)/2} (2k+1)^{-2}.
Real l_chi8(const PrecisionCtx& ctx);

// Classical polylogarithm Li_r(z), integer r of any sign.
//  r <= 0: rational closed form (z != 1);
//  r == 1: -log(1-z) off the cut [1, inf);
//  r >= 2: series for |z| <= 1/2; on 1/2 < |z| <= 1 a 40*digits-term head
//          plus an iterated Abel summation-by-parts tail against the
//          geometric kernel; near z = 1 the Hurwitz-style expansion in
//          mu = log z; |z| > 1 only for r = 2 via inversion (off the cut).
Cplx li(long r, const Cplx& z, const PrecisionCtx& ctx);

// Li_r(1 - omz) for r >= 2 and small |omz|, with the complement supplied
// directly so kernel integrands near z = 1 lose no accuracy.
Cplx li_near_one(long r, const Cplx& omz, const PrecisionCtx& ctx);

}  // namespace cmzv
