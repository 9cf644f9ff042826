#include "doctest.h"

#include <cmath>
#include <complex>

#include "cmzv/exact.hpp"
#include "cmzv/polylog.hpp"
#include "cmzv/quad.hpp"

using namespace cmzv;

namespace {

// Oracle: Li_2(z) = -int_0^1 log(1 - z t)/t dt, any z off the cut.
Cplx li2_integral_oracle(const Cplx& z, const PrecisionCtx& ctx) {
  auto r = integrate_01(
      [&](const Real& t, const Real&) {
        Cplx w = -1 * (z * t);
        return -1 * log1p(w) / t;
      },
      ctx);
  REQUIRE(r.converged);
  return r.value;
}

// Oracle: double-precision direct series with absolute tail bound |z|^N/(1-|z|).
std::complex<double> li_series_oracle_d(long r, std::complex<double> z, int nmax) {
  std::complex<double> s = 0, zp = 1;
  for (int k = 1; k <= nmax; ++k) {
    zp *= z;
    s += zp / std::pow(double(k), double(r));
  }
  return s;
}

Cplx mk(double re, double im) { return Cplx(Real(re), Real(im)); }

}  // namespace

TEST_CASE("zeta via euler-maclaurin against pi powers and binomial series") {
  PrecisionCtx ctx(60);
  PrecGuard pg(ctx.prec_bits());
  Real pi = const_pi();
  CHECK(abs(zeta_real(2, ctx) - pi * pi / 6) < pow10(-58));
  CHECK(abs(zeta_real(4, ctx) - pow(pi, 4) / 90) < pow10(-57));
  CHECK(abs(zeta_real(6, ctx) - pow(pi, 6) / 945) < pow10(-56));

  // independent oracle: zeta(3) = (5/2) sum_{k>=1} (-1)^(k-1) / (k^3 C(2k,k)),
  // exact rational partial sum, terms decay like 4^-k
  Rat s3(0);
  int sgn = 1;
  for (long k = 1; k <= 130; ++k) {
    s3 += Rat(Int(sgn), Int(k) * k * k * binomial(2 * k, k));
    sgn = -sgn;
  }
  Real oracle = Real(Rat(5, 2) * s3);
  CHECK(abs(zeta_real(3, ctx) - oracle) < pow10(-58));
}

TEST_CASE("hurwitz zeta and the mod-8 L value") {
  PrecisionCtx ctx(55);
  PrecGuard pg(ctx.prec_bits());
  // zeta(s, 1) == zeta(s)
  CHECK(abs(hurwitz_zeta(2, Rat(1), ctx) - zeta_real(2, ctx)) < pow10(-52));
  // zeta(2, 1/2) = pi^2/2
  Real pi = const_pi();
  CHECK(abs(hurwitz_zeta(2, Rat(1, 2), ctx) - pi * pi / 2) < pow10(-52));

  // L agrees with the defining series (double-precision partial sum oracle)
  double l1 = 0;
  for (long k = 0; k < 2000000; ++k) {
    int sg = (k % 4 == 0 || k % 4 == 1) ? 1 : -1;
    l1 += sg / double((2 * k + 1) * (2 * k + 1));
  }
  CHECK(std::abs(to_double(l_chi8(ctx)) - l1) < 1e-6);

  // deep cross-check: L = sqrt2 (Im Li2(theta) - G/4), theta = e^{i pi/4}
  Cplx theta = unit(pi / 4);
  Real g = const_catalan();
  Real rel = sqrt(Real(2l)) * (li(2, theta, ctx).im - g / 4);
  CHECK(abs(l_chi8(ctx) - rel) < pow10(-50));
}

TEST_CASE("polylog nonpositive orders") {
  PrecisionCtx ctx(45);
  PrecGuard pg(ctx.prec_bits());
  Real tol = pow10(-42);
  // li(0, 1/3) = (1/3)/(2/3) = 1/2
  CHECK(abs(li(0, Cplx(Real(Rat(1, 3))), ctx).re - Real(Rat(1, 2))) < tol);

  // closed forms for -1, -2, -3 at u = 2/5
  Real u(Rat(2, 5));
  Real omu = 1 - u;
  CHECK(abs(li(-1, Cplx(u), ctx).re - u / (omu * omu)) < tol);
  CHECK(abs(li(-2, Cplx(u), ctx).re - u * (1 + u) / pow(omu, 3)) < tol);
  CHECK(abs(li(-3, Cplx(u), ctx).re - u * (1 + 4 * u + u * u) / pow(omu, 4)) < tol);

  // term-by-term series oracle sum k^n u^k for |u| <= 1/2
  for (long r : {0L, -1L, -2L, -3L, -4L}) {
    for (double ud : {0.5, -0.37, 0.21}) {
      std::complex<double> zd(ud, 0);
      std::complex<double> s = 0, zp = 1;
      for (int k = 1; k <= 200; ++k) {
        zp *= zd;
        s += std::pow(double(k), double(-r)) * zp;
      }
      CHECK(std::abs(to_double(li(r, Cplx(Real(ud)), ctx).re) - s.real()) < 1e-10);
    }
  }

  // complex argument spot check against the derivative recurrence done in
  // doubles: Li_{-1}(z) = z/(1-z)^2 at z = 0.3 + 0.4i
  std::complex<double> zd(0.3, 0.4);
  std::complex<double> want = zd / std::pow(1.0 - zd, 2);
  Cplx got = li(-1, mk(0.3, 0.4), ctx);
  CHECK(std::abs(to_double(got.re) - want.real()) < 1e-12);
  CHECK(std::abs(to_double(got.im) - want.imag()) < 1e-12);

  CHECK_THROWS_AS(li(0, Cplx(Real(1l)), ctx), std::domain_error);
}

TEST_CASE("polylog order one") {
  PrecisionCtx ctx(50);
  PrecGuard pg(ctx.prec_bits());
  CHECK(abs(li(1, Cplx(Real(Rat(1, 2))), ctx).re - const_log2()) < pow10(-47));
  CHECK_THROWS_AS(li(1, Cplx(Real(1l)), ctx), std::domain_error);
  CHECK_THROWS_AS(li(1, Cplx(Real(Rat(3, 2))), ctx), std::domain_error);
}

TEST_CASE("dilogarithm routes against the integral representation") {
  PrecisionCtx ctx(45);
  PrecGuard pg(ctx.prec_bits());
  Real tol = pow10(-40);
  // series route |z| <= 1/2
  Cplx z1 = mk(0.3, -0.35);
  CHECK(abs(li(2, z1, ctx) - li2_integral_oracle(z1, ctx)) < tol);
  // summation-by-parts route, interior
  Cplx z2 = mk(-0.6, 0.55);
  CHECK(abs(li(2, z2, ctx) - li2_integral_oracle(z2, ctx)) < tol);
  // summation-by-parts route, on the unit circle
  Cplx z3 = unit(const_pi() / 4);
  CHECK(abs(li(2, z3, ctx) - li2_integral_oracle(z3, ctx)) < tol);
  // mu-expansion route near z = 1
  Cplx z4 = mk(0.95, 0.2);
  CHECK(abs(li(2, z4, ctx) - li2_integral_oracle(z4, ctx)) < tol);
  // inversion route |z| > 1
  Cplx z5 = mk(-2.0, 0.0);
  CHECK(abs(li(2, z5, ctx) - li2_integral_oracle(z5, ctx)) < tol);
  Cplx z6 = mk(-1.7, 2.4);
  CHECK(abs(li(2, z6, ctx) - li2_integral_oracle(z6, ctx)) < tol);
}

TEST_CASE("dilogarithm special values and properties") {
  PrecisionCtx ctx(55);
  PrecGuard pg(ctx.prec_bits());
  Real pi = const_pi();
  Real l2 = const_log2();
  Real tol = pow10(-51);

  CHECK(abs(li(2, Cplx(Real(Rat(1, 2))), ctx).re - (pi * pi / 12 - l2 * l2 / 2)) < tol);
  CHECK(abs(li(2, Cplx(Real(-1l)), ctx).re + pi * pi / 12) < tol);
  CHECK(abs(li(2, Cplx(Real(1l)), ctx).re - pi * pi / 6) < tol);
  // Li2(i) = -pi^2/48 + i G
  Cplx lii = li(2, mk(0.0, 1.0), ctx);
  CHECK(abs(lii.re + pi * pi / 48) < tol);
  CHECK(abs(lii.im - const_catalan()) < tol);

  // duplication at random-ish points, routes mixed
  for (auto zd : {std::complex<double>(0.31, 0.27), std::complex<double>(-0.45, 0.1),
                  std::complex<double>(0.6, 0.62)}) {
    Cplx z = mk(zd.real(), zd.imag());
    Cplx lhs = li(2, z * z, ctx);
    Cplx rhs = (li(2, z, ctx) + li(2, -1 * z, ctx)) * 2l;
    CHECK(abs(lhs - rhs) < pow10(-50));
  }

  // reflection Li2(z) + Li2(1-z) = pi^2/6 - log z log(1-z), mu route vs series
  {
    Cplx z = mk(0.95, 0.2);
    Cplx omz = Cplx(Real(1l)) - z;
    Cplx lhs = li(2, z, ctx) + li(2, omz, ctx);
    Cplx rhs = Cplx(pi * pi / 6) - log(z) * log(omz);
    CHECK(abs(lhs - rhs) < pow10(-50));
  }
  // same reflection pinning the circle SBP route at theta = e^{i pi/4}
  {
    Cplx z = unit(pi / 4);
    Cplx omz = Cplx(Real(1l)) - z;
    Cplx lhs = li(2, z, ctx) + li(2, omz, ctx);
    Cplx rhs = Cplx(pi * pi / 6) - log(z) * log(omz);
    CHECK(abs(lhs - rhs) < pow10(-50));
  }

  // inversion residual for real z < -1 against the independent integral oracle
  // is covered above; here the stated identity form at z = -phi with the
  // golden-ratio closed form Li2(-1/phi) = -pi^2/15 + log^2(phi)/2
  Real phi = (1 + sqrt(Real(5l))) / 2;
  Real lphi = log(phi);
  CHECK(abs(li(2, Cplx(-1 / phi), ctx).re - (-pi * pi / 15 + lphi * lphi / 2)) < tol);
  CHECK(abs(li(2, Cplx(-phi), ctx).re - (-pi * pi / 10 - lphi * lphi)) < tol);

  CHECK_THROWS_AS(li(2, Cplx(Real(Rat(3, 2))), ctx), std::domain_error);
  CHECK_THROWS_AS(li(3, mk(0.0, 3.0), ctx), std::domain_error);
}

TEST_CASE("trilog and higher orders") {
  PrecisionCtx ctx(50);
  PrecGuard pg(ctx.prec_bits());
  Real pi = const_pi();
  Real l2 = const_log2();
  Real tol = pow10(-46);

  // Li3(1/2) = 7 zeta(3)/8 - pi^2 log2 / 12 + log^3 2 / 6
  Real want = 7 * zeta_real(3, ctx) / 8 - pi * pi * l2 / 12 + pow(l2, 3) / 6;
  CHECK(abs(li(3, Cplx(Real(Rat(1, 2))), ctx).re - want) < tol);
  // Li3(-1) = -3 zeta(3)/4, circle SBP route
  CHECK(abs(li(3, Cplx(Real(-1l)), ctx).re + 3 * zeta_real(3, ctx) / 4) < tol);
  // Li3(1) = zeta(3), Li4(1) = pi^4/90
  CHECK(abs(li(3, Cplx(Real(1l)), ctx).re - zeta_real(3, ctx)) < tol);
  CHECK(abs(li(4, Cplx(Real(1l)), ctx).re - pow(pi, 4) / 90) < tol);

  // mu route vs double series at z = 0.95
  std::complex<double> s = li_series_oracle_d(3, {0.95, 0.0}, 2500);
  CHECK(std::abs(to_double(li(3, Cplx(Real(0.95)), ctx).re) - s.real()) < 1e-11);
  // SBP route vs double series at z = 0.8 e^{i}
  std::complex<double> z8 = 0.8 * std::exp(std::complex<double>(0, 1.0));
  std::complex<double> s8 = li_series_oracle_d(4, z8, 400);
  Cplx got = li(4, Cplx(Real(0.8)) * unit(Real(1l)), ctx);
  CHECK(std::abs(to_double(got.re) - s8.real()) < 1e-12);
  CHECK(std::abs(to_double(got.im) - s8.imag()) < 1e-12);

  // landen-style check for Li3 on the circle: the SBP and mu expansions agree
  // where both apply (|1-z| just above and below the 0.6 split)
  Cplx za = unit(Real(Rat(59, 100)));   // |1-z| ~ 0.582 -> mu route
  Cplx zb = unit(Real(Rat(61, 100)));   // |1-z| ~ 0.601 -> SBP route
  // compare both against double-series Abel-limit oracle is weak; instead use
  // continuity: evaluate both at 40 digits and check against each other via
  // a third point evaluated with each method's natural domain
  Cplx va = li(3, za, ctx);
  Cplx vb = li(3, zb, ctx);
  // |Li3'| <= |Li2|/|z| ~ O(1) on the arc, so nearby points stay close; this
  // only guards against gross route disagreement
  CHECK(abs(va - vb) < Real(Rat(1, 20)));
}

TEST_CASE("li near one with explicit complement") {
  PrecisionCtx ctx(50);
  PrecGuard pg(ctx.prec_bits());
  Real pi = const_pi();
  // Li2(1-e) = pi^2/6 - log(1-e) log(e) - Li2(e), e tiny: right side computable
  // by direct series since |e| small
  Real e = pow10(-30);
  Cplx lhs = li_near_one(2, Cplx(e), ctx);
  Cplx li_e = li(2, Cplx(e), ctx);
  Real rhs = pi * pi / 6 - log1p(-e) * log(e) - li_e.re;
  CHECK(abs(lhs.re - rhs) < pow10(-46));
  CHECK(abs(lhs.im) < pow10(-46));
  // r = 3 at the same complement, against the reflection-free mu expansion
  // evaluated through li() with z = 1 - e reconstructed (no cancellation at
  // this magnitude since 1 - e is exact in binary at 50+30 digits? it is not;
  // so instead check consistency between r=2,3,4 complements at e = 1/1024,
  // where 1 - e is exactly representable)
  Real e2 = Real(Rat(1, 1024));
  for (long r : {2L, 3L, 4L}) {
    Cplx a = li_near_one(r, Cplx(e2), ctx);
    Cplx b = li(r, Cplx(Real(1l) - e2), ctx);
    CHECK(abs(a - b) < pow10(-46));
  }
  // complement on the boundary magnitude: li_near_one(r, 0) = zeta(r)
  CHECK(abs(li_near_one(2, Cplx(), ctx).re - zeta_real(2, ctx)) < pow10(-47));
}
