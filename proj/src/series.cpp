#include "cmzv/series.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "cmzv/constants.hpp"
#include "cmzv/polylog.hpp"
#include "cmzv/quad.hpp"
#include "cmzv/real.hpp"

namespace cmzv {

enum class WOp { num, kvar, log2c, pi2c, add, sub, mul, divi, powi, neg, harm };

struct WNode {
  WOp op;
  Rat cval;                 // num
  int hr = 0;               // harm: order
  long ha = 0, hb = 0;      // harm: index ha*k + hb
  long pexp = 0;            // powi
  std::vector<WExpr> kid;
  std::string src;          // set on parse roots only
};

namespace {

std::shared_ptr<WNode> mk(WOp op) {
  auto n = std::make_shared<WNode>();
  n->op = op;
  return n;
}

std::shared_ptr<WNode> mk2(WOp op, WExpr a, WExpr b) {
  auto n = std::make_shared<WNode>();
  n->op = op;
  n->kid = {std::move(a), std::move(b)};
  return n;
}

// ---------------------------------------------------------------- tokens

struct Tok {
  enum Kind { INT, K, LOG2, PI2, H1, H2, LP, RP, ADD, SUB, MUL, DIV, POW, END };
  Kind kind;
  Rat val;
};

std::vector<Tok> lex_weight(const std::string& s) {
  std::vector<Tok> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    if (c >= '0' && c <= '9') {
      size_t j = i;
      while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
      out.push_back({Tok::INT, Rat(Int(s.substr(i, j - i)))});
      i = j;
      continue;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      size_t j = i;
      while (j < s.size() && ((s[j] >= 'a' && s[j] <= 'z') ||
                              (s[j] >= 'A' && s[j] <= 'Z') ||
                              (s[j] >= '0' && s[j] <= '9')))
        ++j;
      std::string w = s.substr(i, j - i);
      if (w == "k")
        out.push_back({Tok::K, Rat(0)});
      else if (w == "log2")
        out.push_back({Tok::LOG2, Rat(0)});
      else if (w == "pi2")
        out.push_back({Tok::PI2, Rat(0)});
      else if (w == "H")
        out.push_back({Tok::H1, Rat(0)});
      else if (w == "H2")
        out.push_back({Tok::H2, Rat(0)});
      else
        throw std::domain_error("weight parse: unknown name '" + w + "'");
      i = j;
      continue;
    }
    Tok::Kind k;
    switch (c) {
      case '(': k = Tok::LP; break;
      case ')': k = Tok::RP; break;
      case '+': k = Tok::ADD; break;
      case '-': k = Tok::SUB; break;
      case '*': k = Tok::MUL; break;
      case '/': k = Tok::DIV; break;
      case '^': k = Tok::POW; break;
      default:
        throw std::domain_error(std::string("weight parse: bad character '") +
                                c + "'");
    }
    out.push_back({k, Rat(0)});
    ++i;
  }
  out.push_back({Tok::END, Rat(0)});

  // implicit multiplication: 2k, 3(6k-1), (..)H(..)
  std::vector<Tok> full;
  for (size_t j = 0; j < out.size(); ++j) {
    if (!full.empty()) {
      Tok::Kind p = full.back().kind;
      Tok::Kind n = out[j].kind;
      bool lhs = p == Tok::INT || p == Tok::K || p == Tok::RP;
      bool rhs = n == Tok::INT || n == Tok::K || n == Tok::LOG2 ||
                 n == Tok::PI2 || n == Tok::H1 || n == Tok::H2 || n == Tok::LP;
      if (lhs && rhs) full.push_back({Tok::MUL, Rat(0)});
    }
    full.push_back(out[j]);
  }
  return full;
}

// ----------------------------------------------------- plain evaluation

// Rational value of a harmonic-free, log-free subtree (divisors, H args).
Rat plain_eval(const WExpr& n, long k) {
  switch (n->op) {
    case WOp::num: return n->cval;
    case WOp::kvar: return Rat(k);
    case WOp::add: return plain_eval(n->kid[0], k) + plain_eval(n->kid[1], k);
    case WOp::sub: return plain_eval(n->kid[0], k) - plain_eval(n->kid[1], k);
    case WOp::mul: return plain_eval(n->kid[0], k) * plain_eval(n->kid[1], k);
    case WOp::neg: return -plain_eval(n->kid[0], k);
    case WOp::powi: {
      Rat b = plain_eval(n->kid[0], k), r(1);
      for (long i = 0; i < n->pexp; ++i) r *= b;
      return r;
    }
    default:
      throw std::domain_error(
          "weight: harmonic or constant symbols are not allowed here");
  }
}

long structural_degree(const WExpr& n) {
  switch (n->op) {
    case WOp::num: return 0;
    case WOp::kvar: return 1;
    case WOp::add:
    case WOp::sub:
      return std::max(structural_degree(n->kid[0]),
                      structural_degree(n->kid[1]));
    case WOp::mul:
      return structural_degree(n->kid[0]) + structural_degree(n->kid[1]);
    case WOp::neg: return structural_degree(n->kid[0]);
    case WOp::powi: return structural_degree(n->kid[0]) * n->pexp;
    default:
      throw std::domain_error("weight: divisor must be polynomial in k");
  }
}

// ---------------------------------------------------------------- parser

struct Parser {
  const std::vector<Tok>& t;
  size_t pos = 0;

  const Tok& peek() const { return t[pos]; }
  Tok take() { return t[pos++]; }
  void expect(Tok::Kind k, const char* what) {
    if (t[pos].kind != k)
      throw std::domain_error(std::string("weight parse: expected ") + what);
    ++pos;
  }

  WExpr expr() {
    WExpr n = term();
    while (peek().kind == Tok::ADD || peek().kind == Tok::SUB) {
      bool add = take().kind == Tok::ADD;
      n = mk2(add ? WOp::add : WOp::sub, n, term());
    }
    return n;
  }

  WExpr term() {
    WExpr n = factor();
    while (peek().kind == Tok::MUL || peek().kind == Tok::DIV) {
      bool m = take().kind == Tok::MUL;
      n = mk2(m ? WOp::mul : WOp::divi, n, factor());
    }
    return n;
  }

  WExpr factor() {
    if (peek().kind == Tok::SUB) {
      take();
      // encode -x as 0 - x so every node has two kids
      return mk2(WOp::sub, mk(WOp::num), factor());
    }
    if (peek().kind == Tok::ADD) {
      take();
      return factor();
    }
    WExpr n = atom();
    while (peek().kind == Tok::POW) {
      take();
      if (peek().kind != Tok::INT)
        throw std::domain_error("weight parse: ^ needs an integer exponent");
      long e = numerator(take().val).convert_to<long>();
      if (e < 0) throw std::domain_error("weight parse: negative exponent");
      auto p = mk(WOp::powi);
      p->pexp = e;
      p->kid = {n};
      n = p;
    }
    return n;
  }

  WExpr atom() {
    Tok tk = take();
    switch (tk.kind) {
      case Tok::INT: {
        auto n = mk(WOp::num);
        n->cval = tk.val;
        return n;
      }
      case Tok::K: return mk(WOp::kvar);
      case Tok::LOG2: return mk(WOp::log2c);
      case Tok::PI2: return mk(WOp::pi2c);
      case Tok::H1:
      case Tok::H2: {
        expect(Tok::LP, "( after H");
        WExpr arg = expr();
        expect(Tok::RP, ") after H argument");
        Rat v0 = plain_eval(arg, 0), v1 = plain_eval(arg, 1),
            v2 = plain_eval(arg, 2);
        if (v2 - v1 != v1 - v0 || denominator(v0) != 1 ||
            denominator(v1) != 1)
          throw std::domain_error("weight parse: H argument must be a*k+b");
        auto n = mk(WOp::harm);
        n->hr = tk.kind == Tok::H1 ? 1 : 2;
        Rat slope = v1 - v0;
        n->ha = numerator(slope).convert_to<long>();
        n->hb = numerator(v0).convert_to<long>();
        if (n->ha < 0)
          throw std::domain_error("weight parse: H argument decreases in k");
        return n;
      }
      case Tok::LP: {
        WExpr n = expr();
        expect(Tok::RP, ")");
        return n;
      }
      default:
        throw std::domain_error("weight parse: unexpected token");
    }
  }
};

// ------------------------------------------------------ exact evaluation

struct HarmCache {
  std::map<long, Rat> h[2];  // by order-1, index -> value

  Rat get(int r, long m) {
    if (m <= 0) return Rat(0);
    auto& tbl = h[r - 1];
    auto it = tbl.upper_bound(m);
    long base = 0;
    Rat acc(0);
    if (it != tbl.begin()) {
      --it;
      base = it->first;
      acc = it->second;
    }
    for (long j = base + 1; j <= m; ++j) {
      Rat term = r == 1 ? Rat(1, j) : Rat(1, Int(j) * j);
      acc += term;
      if (m - base > 4 || j == m) tbl.emplace(j, acc);
    }
    return acc;
  }
};

bool pure_rational(const ExactValue& v) {
  return v.clog == 0 && v.clog2 == 0 && v.cpi2 == 0;
}

ExactValue ev_mul(const ExactValue& a, const ExactValue& b) {
  bool bad = (a.clog != 0 && (b.clog2 != 0 || b.cpi2 != 0)) ||
             (a.clog2 != 0 && (b.clog != 0 || b.clog2 != 0 || b.cpi2 != 0)) ||
             (a.cpi2 != 0 && (b.clog != 0 || b.clog2 != 0 || b.cpi2 != 0));
  if (bad)
    throw std::domain_error(
        "weight: product leaves the {1, log2, log2^2, pi^2} basis");
  ExactValue r;
  r.c1 = a.c1 * b.c1;
  r.clog = a.c1 * b.clog + a.clog * b.c1;
  r.clog2 = a.c1 * b.clog2 + a.clog * b.clog + a.clog2 * b.c1;
  r.cpi2 = a.c1 * b.cpi2 + a.cpi2 * b.c1;
  return r;
}

ExactValue ev_weight(const WExpr& n, long k, HarmCache& hc) {
  switch (n->op) {
    case WOp::num: return ExactValue(n->cval);
    case WOp::kvar: return ExactValue(Rat(k));
    case WOp::log2c: {
      ExactValue v;
      v.clog = 1;
      return v;
    }
    case WOp::pi2c: {
      ExactValue v;
      v.cpi2 = 1;
      return v;
    }
    case WOp::harm:
      return ExactValue(hc.get(n->hr, n->ha * k + n->hb));
    case WOp::add: return ev_weight(n->kid[0], k, hc) + ev_weight(n->kid[1], k, hc);
    case WOp::sub: return ev_weight(n->kid[0], k, hc) - ev_weight(n->kid[1], k, hc);
    case WOp::mul:
      return ev_mul(ev_weight(n->kid[0], k, hc), ev_weight(n->kid[1], k, hc));
    case WOp::divi: {
      ExactValue d = ev_weight(n->kid[1], k, hc);
      if (!pure_rational(d))
        throw std::domain_error("weight: divisor must be rational");
      if (d.c1 == 0) throw std::domain_error("weight: division by zero term");
      ExactValue v = ev_weight(n->kid[0], k, hc);
      v.scale(Rat(1) / d.c1);
      return v;
    }
    case WOp::powi: {
      ExactValue b = ev_weight(n->kid[0], k, hc);
      ExactValue r{Rat(1)};
      for (long i = 0; i < n->pexp; ++i) r = ev_mul(r, b);
      return r;
    }
    case WOp::neg: {
      ExactValue v = ev_weight(n->kid[0], k, hc);
      v.scale(Rat(-1));
      return v;
    }
  }
  throw std::logic_error("weight: unreachable node");
}

// ----------------------------------------------- envelope and certificates

// Pointwise bound: |weight(k)| <= env(k), abs coefficients, log2 -> 1,
// pi^2 -> 10, subtraction -> addition.
Rat env_value(const WExpr& n, long k, HarmCache& hc) {
  switch (n->op) {
    case WOp::num: return abs(n->cval);
    case WOp::kvar: return Rat(k);
    case WOp::log2c: return Rat(1);
    case WOp::pi2c: return Rat(10);
    case WOp::harm: return hc.get(n->hr, n->ha * k + n->hb);
    case WOp::add:
    case WOp::sub:
      return env_value(n->kid[0], k, hc) + env_value(n->kid[1], k, hc);
    case WOp::mul:
      return env_value(n->kid[0], k, hc) * env_value(n->kid[1], k, hc);
    case WOp::divi:
      return env_value(n->kid[0], k, hc) / plain_eval(n->kid[1], k);
    case WOp::powi: {
      Rat b = env_value(n->kid[0], k, hc), r(1);
      for (long i = 0; i < n->pexp; ++i) r *= b;
      return r;
    }
    case WOp::neg: return env_value(n->kid[0], k, hc);
  }
  throw std::logic_error("weight: unreachable node");
}

// Upper bound on env(j+1)/env(j) valid for every j >= K; decreasing in K.
Rat ratio_bound(const WExpr& n, long K) {
  switch (n->op) {
    case WOp::num:
    case WOp::log2c:
    case WOp::pi2c: return Rat(1);
    case WOp::kvar: return Rat(K + 1, K);
    case WOp::harm: {
      if (n->ha == 0) return Rat(1);
      Int d = Int(n->ha) * K + n->hb + 1;
      if (n->hr == 2) d *= Int(n->ha) * K + n->hb + 1;
      return Rat(1) + Rat(Int(n->ha), d);
    }
    case WOp::add:
    case WOp::sub:
      return std::max(ratio_bound(n->kid[0], K), ratio_bound(n->kid[1], K));
    case WOp::mul:
      return ratio_bound(n->kid[0], K) * ratio_bound(n->kid[1], K);
    case WOp::divi: return ratio_bound(n->kid[0], K);
    case WOp::powi: {
      Rat b = ratio_bound(n->kid[0], K), r(1);
      for (long i = 0; i < n->pexp; ++i) r *= b;
      return r;
    }
    case WOp::neg: return ratio_bound(n->kid[0], K);
  }
  throw std::logic_error("weight: unreachable node");
}

// Smallest k at which the harmonic ratio bounds apply (index >= 1).
long ratio_min_k(const WExpr& n) {
  long m = 1;
  if (n->op == WOp::harm && n->ha > 0) {
    long need = n->hb >= 1 ? 1 : (1 - n->hb + n->ha - 1) / n->ha;
    m = std::max(m, need);
  }
  for (const auto& c : n->kid) m = std::max(m, ratio_min_k(c));
  return m;
}

// Newton forward-difference certificate: p(base) > 0 and all higher forward
// differences at base nonnegative imply p positive and nondecreasing on
// every integer >= base.
bool newton_certify(const WExpr& divisor, long base) {
  long deg = structural_degree(divisor);
  std::vector<Rat> row;
  for (long j = 0; j <= deg; ++j) row.push_back(plain_eval(divisor, base + j));
  if (row[0] <= 0) return false;
  while (row.size() > 1) {
    for (size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
    row.pop_back();
    for (const Rat& d : row)
      if (d < 0) return false;
  }
  return true;
}

void collect_divisors(const WExpr& n, std::vector<WExpr>& out) {
  if (n->op == WOp::divi) out.push_back(n->kid[1]);
  for (const auto& c : n->kid) collect_divisors(c, out);
}

// Certifies every divisor from some base >= lo; returns the certificate base.
long certify_divisors(const WExpr& w, long lo) {
  std::vector<WExpr> divs;
  collect_divisors(w, divs);
  long base = lo;
  for (const auto& d : divs) {
    long b = base;
    while (b < base + 64 && !newton_certify(d, b)) ++b;
    if (b == base + 64)
      throw std::domain_error(
          "series: a divisor is not certifiably positive increasing");
    base = b;
  }
  return base;
}

Rat pow_rat(const Rat& z, long k) {
  if (k == 0) return Rat(1);
  return Rat(pow(numerator(z), static_cast<unsigned>(k)),
             pow(denominator(z), static_cast<unsigned>(k)));
}

}  // namespace

// ------------------------------------------------------------- public api

WExpr parse_weight(const std::string& src) {
  std::vector<Tok> toks = lex_weight(src);
  Parser p{toks};
  WExpr n = p.expr();
  if (p.peek().kind != Tok::END)
    throw std::domain_error("weight parse: trailing input");
  const_cast<WNode&>(*n).src = src;
  return n;
}

const std::string& weight_source(const WExpr& w) { return w->src; }

ExactValue weight_value(const WExpr& w, long k) {
  HarmCache hc;
  return ev_weight(w, k, hc);
}

Real exact_embed(const ExactValue& v, const PrecisionCtx& ctx) {
  PrecGuard guard(ctx.prec_bits());
  Real lg = constant("log2", ctx).re;
  Real pi = constant("pi", ctx).re;
  return Real(v.c1) + Real(v.clog) * lg + Real(v.clog2) * lg * lg +
         Real(v.cpi2) * pi * pi;
}

SeriesSpec parse_series(const std::string& src) {
  SeriesSpec s;
  auto field = [&](const std::string& key) -> std::string {
    size_t p = src.find(key);
    if (p == std::string::npos) return {};
    p += key.size();
    size_t e = src.find(' ', p);
    return src.substr(p, e == std::string::npos ? e : e - p);
  };
  std::string k0 = field("k0=");
  if (k0 != "0" && k0 != "1")
    throw std::domain_error("series parse: k0 must be 0 or 1");
  s.k0 = k0 == "0" ? 0 : 1;
  std::string zs = field("z=");
  if (zs.empty()) throw std::domain_error("series parse: missing z=");
  if (zs == "param")
    s.z_param = true;
  else
    s.z = parse_rational(zs);
  size_t wp = src.find("weight=");
  if (wp == std::string::npos)
    throw std::domain_error("series parse: missing weight=");
  wp += 7;
  size_t vp = src.find(" via=", wp);
  std::string wsrc =
      src.substr(wp, vp == std::string::npos ? std::string::npos : vp - wp);
  s.weight = parse_weight(wsrc);
  if (vp != std::string::npos) s.via = src.substr(vp + 5);
  return s;
}

std::string series_source(const SeriesSpec& s) {
  std::string out = "k0=";
  out += s.k0 == 0 ? "0" : "1";
  out += " z=";
  out += s.z_param ? "param" : s.z.str();
  out += " weight=" + weight_source(s.weight);
  if (!s.via.empty()) out += " via=" + s.via;
  return out;
}

ExactValue term_exact(const SeriesSpec& spec, long k) {
  if (k < spec.k0) throw std::domain_error("series term: k below k0");
  if (spec.z_param) throw std::logic_error("series term: z unresolved");
  ExactValue v = weight_value(spec.weight, k);
  v.scale(central_coeff(k) * pow_rat(spec.z, k));
  return v;
}

SeriesResult sum_series(const SeriesSpec& spec, const PrecisionCtx& ctx) {
  if (spec.z_param) throw std::logic_error("series sum: z unresolved");
  if (abs(spec.z) >= 108)
    throw std::domain_error("series sum: |z| >= 108 diverges");
  PrecGuard guard(ctx.prec_bits());

  HarmCache hc;
  long kcert = std::max<long>(std::max<long>(1, spec.k0),
                              ratio_min_k(spec.weight));
  kcert = certify_divisors(spec.weight, kcert);

  Rat az = abs(spec.z);
  Rat eps(Int(1), pow(Int(10), static_cast<unsigned>(ctx.digits + 2)));
  ExactValue exact_acc;
  Real num_acc(0l);
  Rat bzk = central_coeff(spec.k0) * pow_rat(spec.z, spec.k0);
  Rat prev_ratio(1);
  Rat tail_rat(0);
  long k = spec.k0;
  for (;; ++k) {
    ExactValue term = ev_weight(spec.weight, k, hc);
    term.scale(bzk);
    if (k <= 200)
      exact_acc += term;
    else
      num_acc += exact_embed(term, ctx);

    if (k >= kcert) {
      Rat env = env_value(spec.weight, k, hc) * abs(bzk);
      if (env == 0) break;
      Rat r = ratio_bound(spec.weight, k) * central_coeff_ratio(k) * az;
      if (r < 1) {
        Rat tail = env * r / (1 - r);
        if (tail <= eps) {
          tail_rat = tail;
          break;
        }
      }
    }
    Rat step = central_coeff_ratio(k);
    if (k > spec.k0 && step > prev_ratio)
      throw std::logic_error("series sum: coefficient ratio not decreasing");
    prev_ratio = step;
    bzk *= step * spec.z;
    if (k > 5000)
      throw std::runtime_error("series sum: no tail certificate by k=5000");
  }

  SeriesResult res;
  res.value = Cplx(exact_embed(exact_acc, ctx) + num_acc);
  res.terms_used = k - spec.k0 + 1;
  res.tail_bound = Real(tail_rat);
  return res;
}

// --------------------------------------------------- integral representations

Cplx series_by_integral(IntKernel kern, long s, const Rat& z,
                        const PrecisionCtx& ctx) {
  if (z == 0 || abs(z) > 108)
    throw std::domain_error("series integral: need 0 < |z| <= 108");
  if (kern == IntKernel::hk) s = 1;
  if (s < 1) throw std::domain_error("series integral: order must be >= 1");
  PrecGuard guard(ctx.prec_bits());

  Real zr{z};
  Real lam = constant("log2", ctx).re;
  Real quarter{Rat(1, 4)};

  // numerator N(f): Li_s(f), or Li_2(f) + log^2(1-f)/2 for the H_k family
  auto numer = [&](const Real& f, const Real& omf) -> Cplx {
    long ord = kern == IntKernel::hk ? 2 : s;
    Cplx l = ord == 1 ? Cplx(-log(omf))
             : omf < quarter ? li_near_one(ord, Cplx(omf), ctx)
                             : li(ord, Cplx(f), ctx);
    if (kern == IntKernel::hk) {
      Real lg = log(omf);
      l += Cplx(lg * lg / 2);
    }
    return l;
  };
  // weight factor w(t) / (1-t^2), with 1-t and log(1-t^2) fed accurately
  auto kfac = [&](const Real& t, const Real& omt) -> Real {
    Real inv1mt2 = 1 / (omt * (1 + t));
    switch (kern) {
      case IntKernel::plain:
      case IntKernel::hk: return 4 * inv1mt2;
      case IntKernel::log_t: return 8 * log(t) * inv1mt2;
      case IntKernel::log_a:
        return 4 * (log(omt) + log1p(t) - 2 * lam) * inv1mt2;
    }
    throw std::logic_error("series integral: unreachable kernel");
  };

  if (z != 108) {
    Integrand01 g = [&](const Real& t, const Real& omt) -> Cplx {
      Real half_cubic = t * omt * (1 + t) / 4;  // t(1-t^2)/4
      Real f = zr * half_cubic * half_cubic;
      return numer(f, 1 - f) * kfac(t, omt);
    };
    return integrate_01(g, ctx).value;
  }

  // z = 108: the kernel reaches 1 at t0 = 1/sqrt(3); split there and use
  // 1 - f = (1-3t^2)^2 (4-3t^2)/4 with the factored small parts exact.
  Real t0, eps0, delta0, s3;
  {
    PrecGuard wide(real_prec() + 64);
    Real s3w = sqrt(Real(3l));
    Real t0w = s3w / 3;
    Real e0 = 1 - 3 * t0w * t0w;  // residual of the rounded root
    Real d0 = 1 - s3w * t0w;
    t0 = t0w;
    eps0 = e0;
    delta0 = d0;
    s3 = s3w;
  }
  t0 = round_here(t0);
  s3 = round_here(s3);
  eps0 = round_here(eps0);
  delta0 = round_here(delta0);
  Real omt0 = 1 - t0;

  auto panel = [&](bool left) -> Cplx {
    Integrand01 g = [&, left](const Real& u, const Real& omu) -> Cplx {
      Real t, omt, jac, om3t2;
      if (left) {
        t = t0 * u;
        omt = 1 - t;
        jac = t0;
        om3t2 = omu * (1 + u) + eps0 * u * u;  // 1 - 3 t^2 > 0
      } else {
        t = t0 + omt0 * u;
        omt = omt0 * omu;
        jac = omt0;
        Real oms3t = delta0 - s3 * omt0 * u;  // 1 - sqrt(3) t < 0
        om3t2 = oms3t * (1 + s3 * t);
      }
      Real half_cubic = t * omt * (1 + t) / 4;
      Real f = zr * half_cubic * half_cubic;
      Real omf = om3t2 * om3t2 * (4 - 3 * t * t) / 4;
      return numer(f, omf) * (kfac(t, omt) * jac);
    };
    return integrate_01(g, ctx).value;
  };
  return panel(true) + panel(false);
}

IntRoute parse_via(const std::string& tag) {
  if (tag == "int-hk") return {IntKernel::hk, 1};
  auto starts = [&](const char* p) {
    return tag.rfind(p, 0) == 0;
  };
  const char* rest = nullptr;
  IntKernel k{};
  if (starts("int-plain-")) {
    k = IntKernel::plain;
    rest = tag.c_str() + 10;
  } else if (starts("int-logt-")) {
    k = IntKernel::log_t;
    rest = tag.c_str() + 9;
  } else if (starts("int-loga-")) {
    k = IntKernel::log_a;
    rest = tag.c_str() + 9;
  } else {
    throw std::domain_error("unknown integral route tag: " + tag);
  }
  long s = std::stol(rest);
  if (s < 1) throw std::domain_error("integral route order must be >= 1");
  return {k, s};
}

}  // namespace cmzv
