#include "cmzv/quad.hpp"

#include <map>
#include <utility>

namespace cmzv {

namespace {

// One tanh-sinh abscissa: t, 1-t, and weight pi*cosh(u)*t*(1-t).  Nodes with
// u > 0 stand for the mirror pair (t, 1-t) and (1-t, t) at equal weight.
struct TSNode {
  Real t, omt, w;
};

// Nodes introduced at a given level: level 0 holds u = 0,1,2,...; level l >= 1
// holds odd multiples of h = 2^-l.  Range is capped by u_max derived from the
// precision, beyond which t*(1-t) underflows the target accuracy.
struct TSLevel {
  std::vector<TSNode> nodes;
};

TSNode make_node(const Real& u) {
  TSPoint p = ts_point(u);
  return TSNode{std::move(p.t), std::move(p.omt), std::move(p.dt)};
}

}  // namespace

TSPoint ts_point(const Real& u) {
  Real y = const_pi() / 2 * sinh(u);
  Real e = exp(-2 * y);
  Real t = 1 / (1 + e);    // sigmoid(2y)
  Real omt = e / (1 + e);  // 1-t without cancellation
  Real dt = const_pi() * cosh(u) * t * omt;
  return TSPoint{std::move(t), std::move(omt), std::move(dt)};
}

double ts_umax(mpfr_prec_t prec) {
  double ddec = static_cast<double>(prec) * 0.30103 + 8.0;
  double s = (ddec * 2.302585092994046 + 10.0) / 3.141592653589793;
  return std::asinh(s);
}

namespace {

const TSLevel& ts_level(int level, mpfr_prec_t prec) {
  thread_local std::map<std::pair<mpfr_prec_t, int>, TSLevel> cache;
  auto key = std::make_pair(prec, level);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  PrecGuard pg(prec);
  TSLevel lv;
  double umax = ts_umax(prec);
  if (level == 0) {
    Real u(0l);
    for (long k = 0; k <= static_cast<long>(umax); ++k) {
      mpfr_set_si(u.v, k, MPFR_RNDN);
      lv.nodes.push_back(make_node(u));
    }
  } else {
    double h = std::ldexp(1.0, -level);
    long kmax = static_cast<long>(umax / h);
    Real u;
    for (long k = 1; k <= kmax; k += 2) {
      mpfr_set_si(u.v, k, MPFR_RNDN);
      mpfr_mul_2si(u.v, u.v, -level, MPFR_RNDN);
      lv.nodes.push_back(make_node(u));
    }
  }
  return cache.emplace(key, std::move(lv)).first->second;
}

}  // namespace

QuadResult integrate_01(const Integrand01& f, const PrecisionCtx& ctx) {
  PrecGuard pg(ctx.prec_bits());
  const mpfr_prec_t prec = ctx.prec_bits();
  const int max_level = 12;
  Real tol = pow10(-(ctx.digits + ctx.guard - 2));

  QuadResult res;
  Cplx sum;  // running h * sum(w * f)
  Real one(1l);

  // level 0, u = 0 node contributes f(1/2, 1/2) once
  {
    const TSLevel& lv0 = ts_level(0, prec);
    sum = lv0.nodes[0].w * f(lv0.nodes[0].t, lv0.nodes[0].omt);
    ++res.evals;
    for (size_t j = 1; j < lv0.nodes.size(); ++j) {
      const TSNode& n = lv0.nodes[j];
      sum += n.w * (f(n.t, n.omt) + f(n.omt, n.t));
      res.evals += 2;
    }
  }

  Cplx prev = sum;  // S_0 with h = 1
  for (int level = 1; level <= max_level; ++level) {
    const TSLevel& lv = ts_level(level, prec);
    Cplx part;
    bool any = false;
    for (const TSNode& n : lv.nodes) {
      Cplx term = n.w * (f(n.t, n.omt) + f(n.omt, n.t));
      res.evals += 2;
      if (!any) {
        part = std::move(term);
        any = true;
      } else {
        part += term;
      }
    }
    Real h = ldexp2(one, -level);
    Cplx cur = prev * Real(Rat(1, 2)) + (any ? part * h : Cplx());
    Real err = abs(cur - prev) * 10;
    res.levels = level;
    res.err = err;
    prev = cur;
    Real scale = abs(cur);
    if (scale < 1) scale = one;
    if (level >= 2 && err <= tol * scale) {
      res.converged = true;
      break;
    }
  }
  res.value = prev;
  return res;
}

const GLRule& gauss_legendre(int order, mpfr_prec_t prec) {
  thread_local std::map<std::pair<int, mpfr_prec_t>, GLRule> cache;
  auto key = std::make_pair(order, prec);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  PrecGuard pg(prec + 64);
  GLRule rule;
  rule.x.resize(order);
  rule.w.resize(order);
  Real pi = const_pi();
  for (int i = 1; i <= order; ++i) {
    // Chebyshev seed, then Newton on P_n
    Real x = cos(pi * Real(4 * i - 1) / Real(4 * order + 2));
    Real p0, p1, dp;
    for (int iter = 0; iter < 64; ++iter) {
      p0 = Real(1l);
      p1 = x;
      for (int n = 2; n <= order; ++n) {
        Real p2 = (Real(2 * n - 1) * x * p1 - Real(n - 1) * p0) / n;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      // P'_n(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
      dp = Real(order) * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= pow10(-(static_cast<long>(prec) / 3 + 4))) break;
    }
    // recompute derivative at the converged root for the weight
    p0 = Real(1l);
    p1 = x;
    for (int n = 2; n <= order; ++n) {
      Real p2 = (Real(2 * n - 1) * x * p1 - Real(n - 1) * p0) / n;
      p0 = std::move(p1);
      p1 = std::move(p2);
    }
    dp = Real(order) * (x * p1 - p0) / (x * x - 1);
    Real w = 2 / ((1 - x * x) * dp * dp);
    // map from [-1,1] to [0,1], ascending order
    rule.x[order - i] = (x + 1) / 2;
    rule.w[order - i] = w / 2;
  }
  return cache.emplace(key, std::move(rule)).first->second;
}

}  // namespace cmzv
