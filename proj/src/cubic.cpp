#include "cmzv/cubic.hpp"

#include <stdexcept>

#include "cmzv/constants.hpp"
#include "cmzv/polylog.hpp"
#include "cmzv/quad.hpp"

namespace cmzv {

namespace {

// log(t^2/(1-t^2)) from tanh-sinh coordinates, cancellation-free at both ends
Real log_ratio(const Real& t, const Real& omt) {
  return 2 * log(t) - log(omt) - log1p(t);
}

Cplx gw(std::vector<Cplx> letters, const PrecisionCtx& ctx) {
  GplWord w{std::move(letters), Real(1l)};
  return gpl_eval(w, ctx);
}

mpfr_prec_t param_prec(const CubicParam& p) { return mpfr_get_prec(p.x.v); }

}  // namespace

CubicParam cubic_param(const Rat& x2, const PrecisionCtx& ctx) {
  if (x2 <= Rat(4, 3))
    throw std::domain_error("cubic_param: x^2 must exceed 4/3");
  PrecGuard guard(ctx.prec_bits());
  CubicParam p;
  p.x2 = x2;
  Rat om = 1 - x2;
  p.z = Rat(16) / (x2 * om * om);
  p.x = sqrt(Real(x2));
  p.disc_root = sqrt(Real(3 * x2 - 4));
  p.admissible = true;
  return p;
}

Cplx sigma(int l, int m, const CubicParam& p) {
  if (!p.admissible) throw std::domain_error("sigma: inadmissible parameter");
  PrecGuard guard(param_prec(p));
  Real re = (l ? -p.x : p.x) / 2;
  Real im = (m ? -p.disc_root : p.disc_root) / 2;
  return Cplx(std::move(re), std::move(im));
}

std::vector<Cplx> RootSet::all() const {
  std::vector<Cplx> r = plus;
  r.insert(r.end(), minus.begin(), minus.end());
  return r;
}

RootSet root_set(const CubicParam& p) {
  if (!p.admissible) throw std::domain_error("root_set: inadmissible parameter");
  RootSet s;
  s.plus = {Cplx(p.x), sigma(1, 0, p), sigma(1, 1, p)};
  s.minus = {Cplx(-p.x), sigma(0, 0, p), sigma(0, 1, p)};
  return s;
}

namespace {

// Li2((1-x)/(1+x)) - Li2((1+x)/(1-x)) + log^2(1+1/x) - log^2(1-1/x) for
// real x > 1; the second dilogarithm argument lies below -1.
Real dilog_ratio_block(const Real& x, const PrecisionCtx& ctx) {
  Real num = 1 - x, den = 1 + x;
  Real d1 = li(2, Cplx(num / den), ctx).re;
  Real d2 = li(2, Cplx(den / num), ctx).re;
  Real l1 = log1p(1 / x);
  Real l2 = log1p(-1 / x);
  return d1 - d2 + l1 * l1 - l2 * l2;
}

// Li2((1-w)/(1+w)) + log^2(1+1/w)
Cplx dilog_ratio_term(const Cplx& w, const PrecisionCtx& ctx) {
  Cplx r = li(2, (Cplx(1l) - w) / (Cplx(1l) + w), ctx);
  Cplx l = log1p(inv(w));
  return r + l * l;
}

}  // namespace

Cplx special_fn(SpecialFn which, const CubicParam& p, const PrecisionCtx& ctx) {
  if (!p.admissible) throw std::domain_error("special_fn: inadmissible parameter");
  PrecGuard guard(ctx.prec_bits());
  Cplx ix = inv(Cplx(p.x));
  switch (which) {
    case SpecialFn::frakL: {
      Cplx s = 2 * (li(2, -ix, ctx) - li(2, ix, ctx));
      for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m) {
          Cplx term = li(2, inv(sigma(l, m, p)), ctx);
          s += l ? term : -term;
        }
      return s;
    }
    case SpecialFn::frakM: {
      Cplx s;
      for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m) {
          Cplx term = li(2, inv(sigma(l, m, p)), ctx);
          s += m ? -term : term;
        }
      return s;
    }
    case SpecialFn::frakl: {
      Cplx s = Cplx(2 * dilog_ratio_block(p.x, ctx));
      for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m) {
          Cplx term = dilog_ratio_term(sigma(l, m, p), ctx);
          s += l ? -term : term;
        }
      return s;
    }
    case SpecialFn::frakm: {
      Cplx s;
      for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m) {
          Cplx term = dilog_ratio_term(sigma(l, m, p), ctx);
          s += m ? -term : term;
        }
      return s;
    }
  }
  throw std::logic_error("special_fn: unreachable");
}

Cplx special_fn_alt(SpecialFn which, const CubicParam& p, const PrecisionCtx& ctx) {
  if (!p.admissible) throw std::domain_error("special_fn_alt: inadmissible parameter");
  PrecGuard guard(ctx.prec_bits());
  RootSet roots = root_set(p);
  Cplx ix = inv(Cplx(p.x));
  switch (which) {
    case SpecialFn::frakL: {
      Cplx s = 3 * (li(2, -ix, ctx) - li(2, ix, ctx));
      for (const Cplx& w : roots.plus) s += li(2, inv(w), ctx);
      for (const Cplx& w : roots.minus) s -= li(2, inv(w), ctx);
      return s;
    }
    case SpecialFn::frakM: {
      // conjugate-pair reflection: sigma_{l,1} = conj(sigma_{l,0})
      Cplx s;
      for (int l = 0; l < 2; ++l) {
        Cplx t = li(2, inv(sigma(l, 0, p)), ctx);
        s += t - conj(t);
      }
      return s;
    }
    case SpecialFn::frakl: {
      Cplx s = Cplx(3 * dilog_ratio_block(p.x, ctx));
      for (const Cplx& w : roots.plus) s -= dilog_ratio_term(w, ctx);
      for (const Cplx& w : roots.minus) s += dilog_ratio_term(w, ctx);
      return s;
    }
    case SpecialFn::frakm: {
      Cplx s;
      for (int l = 0; l < 2; ++l) {
        Cplx t = dilog_ratio_term(sigma(l, 0, p), ctx);
        s += t - conj(t);
      }
      return s;
    }
  }
  throw std::logic_error("special_fn_alt: unreachable");
}

Cplx disc_log(const CubicParam& p) {
  if (!p.admissible) throw std::domain_error("disc_log: inadmissible parameter");
  PrecGuard guard(param_prec(p));
  Cplx num(p.x * p.x - 2, p.disc_root);
  return log(num) - log(conj(num));
}

Real artanh_inv(const CubicParam& p) {
  if (!p.admissible) throw std::domain_error("artanh_inv: inadmissible parameter");
  PrecGuard guard(param_prec(p));
  return (log(p.x + 1) - log(p.x - 1)) / 2;
}

Cplx a3(const Cplx& w, const PrecisionCtx& ctx) {
  PrecGuard guard(ctx.prec_bits());
  Cplx one(1l), mone(-1l);
  Cplx s = 2 * (gw({w, mone, mone}, ctx) + gw({w, mone, one}, ctx) +
                gw({w, one, mone}, ctx) - 3 * gw({w, one, one}, ctx));
  s += 4 * (gw({Cplx(0l), w, mone}, ctx) - gw({Cplx(0l), w, one}, ctx));
  Cplx lw = log1p(-inv(w));
  Real pi2 = constant("pi", ctx).re;
  pi2 *= pi2;
  s += Real(Rat(4, 3)) * (lw * lw * lw) + (4 * pi2 / 3) * lw;
  return s;
}

Cplx a3_integral(const Cplx& w, const PrecisionCtx& ctx) {
  Integrand01 f = [&w](const Real& t, const Real& omt) {
    Real lr = log_ratio(t, omt);
    return (lr * lr) * inv(Cplx(t) - w);
  };
  return integrate_01(f, ctx).value;
}

Cplx aa3(const Cplx& a, const Cplx& b, const PrecisionCtx& ctx) {
  PrecGuard guard(ctx.prec_bits());
  GplCombination words;
  Cplx one(1l), mone(-1l);
  words.terms.push_back({Cplx(2l), {{Cplx(0l), b, a}, Real(1l)}});
  for (const Cplx& tau : {one, mone}) {
    words.terms.push_back({Cplx(1l), {{b, a, tau}, Real(1l)}});
    words.terms.push_back({Cplx(1l), {{b, tau, a}, Real(1l)}});
  }
  Cplx s;
  for (const GplTerm& term : words.terms) {
    GplCombination r = regularize_word(term.word);
    s += term.coeff * gpl_eval(r, ctx);
  }
  return s;
}

Cplx aa3_integral(const Cplx& a, const Cplx& b, const PrecisionCtx& ctx) {
  PrecGuard guard(ctx.prec_bits());
  Cplx ia = inv(a);
  Integrand01 f = [&ia, &b](const Real& t, const Real& omt) {
    Cplx num = log1p(-(ia * t)) * log_ratio(t, omt);
    return -(num * inv(Cplx(t) - b));
  };
  return integrate_01(f, ctx).value;
}

GplCombination lemma22_words(int r, LiExpansion variant, const CubicParam& p,
                             const Real& t) {
  if (!p.admissible)
    throw std::domain_error("lemma22_words: inadmissible parameter");
  if (r < 1 || r > 2) throw std::domain_error("lemma22_words: r must be 1 or 2");
  PrecGuard guard(param_prec(p));
  RootSet roots = root_set(p);
  std::vector<Cplx> ws;
  Cplx coeff;
  switch (variant) {
    case LiExpansion::squared:
      ws = roots.all();
      coeff = Cplx(-(1l << r));
      break;
    case LiExpansion::plus:
      ws = roots.plus;
      coeff = Cplx(-1l);
      break;
    case LiExpansion::minus:
      ws = roots.minus;
      coeff = Cplx(-1l);
      break;
  }
  const Cplx alphabet[3] = {Cplx(-1l), Cplx(0l), Cplx(1l)};
  GplCombination comb;
  long tuples = 1;
  for (int i = 0; i < r; ++i) tuples *= 3;
  for (long code = 0; code < tuples; ++code) {
    std::vector<Cplx> prefix;
    long c = code;
    for (int i = 0; i < r; ++i) {
      prefix.push_back(alphabet[c % 3]);
      c /= 3;
    }
    for (const Cplx& w : ws) {
      std::vector<Cplx> letters = prefix;
      letters.push_back(w);
      comb.terms.push_back({coeff, {std::move(letters), t}});
    }
  }
  return comb;
}

}  // namespace cmzv
