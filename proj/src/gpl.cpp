#include "cmzv/gpl.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "cmzv/exact.hpp"
#include "cmzv/quad.hpp"

namespace cmzv {

namespace {

bool is_exact_zero(const Cplx& a) { return sign(a.re) == 0 && sign(a.im) == 0; }
bool is_exact_one(const Cplx& a) { return sign(a.im) == 0 && a.re == 1; }

// letter strictly inside the integration segment (0,1)
bool on_open_segment(const Cplx& a) {
  return sign(a.im) == 0 && a.re > 0 && a.re < 1;
}

// ---- shared quadrature grid: tanh-sinh nodes plus per-panel GL data ----

struct NodeGrid {
  int level = 0;
  int g = 0;
  std::vector<Real> t, omt, w;                  // nodes, ascending in t
  std::vector<Real> gt, gomt, gw;               // [panel*g + i]
  long panels = 0;
};

const NodeGrid& node_grid(int level, mpfr_prec_t prec, int g) {
  thread_local std::map<std::tuple<int, mpfr_prec_t, int>, NodeGrid> cache;
  auto key = std::make_tuple(level, prec, g);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  PrecGuard pg(prec);
  NodeGrid grid;
  grid.level = level;
  grid.g = g;
  long K = static_cast<long>(ts_umax(prec) * std::ldexp(1.0, level));
  long NN = 2 * K + 1;
  grid.t.reserve(NN);
  grid.omt.reserve(NN);
  grid.w.reserve(NN);
  Real u;
  for (long i = -K; i <= K; ++i) {
    mpfr_set_si(u.v, i, MPFR_RNDN);
    mpfr_mul_2si(u.v, u.v, -level, MPFR_RNDN);
    TSPoint p = ts_point(u);
    grid.t.push_back(std::move(p.t));
    grid.omt.push_back(std::move(p.omt));
    grid.w.push_back(std::move(p.dt));
  }
  grid.panels = NN - 1;
  const GLRule& gl = gauss_legendre(g, prec);
  grid.gt.reserve(grid.panels * g);
  grid.gomt.reserve(grid.panels * g);
  grid.gw.reserve(grid.panels * g);
  Real h = ldexp2(Real(1l), -level);
  for (long k = 0; k < grid.panels; ++k) {
    Real uk;
    mpfr_set_si(uk.v, k - K, MPFR_RNDN);
    mpfr_mul_2si(uk.v, uk.v, -level, MPFR_RNDN);
    for (int i = 0; i < g; ++i) {
      TSPoint p = ts_point(uk + h * gl.x[i]);
      grid.gt.push_back(std::move(p.t));
      grid.gomt.push_back(std::move(p.omt));
      grid.gw.push_back(std::move(p.dt));
    }
  }
  return cache.emplace(key, std::move(grid)).first->second;
}

// ---- in-panel antiderivative matrix ----
// For integrand values v_j at the panel's GL points, (AD v)_i approximates
// int_0^{xi_i} of the degree g-1 interpolant: Legendre projection
// c_m = (2m+1) sum_j w_j P_m(2 xi_j - 1) v_j composed with the antiderivative
// Phi_0 = xi, Phi_m = (P_{m+1} - P_{m-1})(2 xi - 1)/(2(2m+1)).
const std::vector<Real>& antider_matrix(int g, mpfr_prec_t prec) {
  thread_local std::map<std::pair<int, mpfr_prec_t>, std::vector<Real>> cache;
  auto key = std::make_pair(g, prec);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  PrecGuard pg(prec + 32);
  const GLRule& gl = gauss_legendre(g, prec);
  // Legendre values P_m(2 xi_i - 1), m = 0..g
  std::vector<std::vector<Real>> P(static_cast<size_t>(g) + 1,
                                   std::vector<Real>(g));
  for (int i = 0; i < g; ++i) {
    Real x = 2 * gl.x[i] - 1;
    P[0][i] = Real(1l);
    P[1][i] = x;
    for (int m = 2; m <= g; ++m)
      P[m][i] = (Real(2 * m - 1) * x * P[m - 1][i] - Real(m - 1) * P[m - 2][i]) / m;
  }
  std::vector<Real> M(static_cast<size_t>(g) * g, Real(0l));
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      Real acc = gl.x[i] * gl.w[j];  // m = 0 term: Phi_0(xi_i) * w_j * P_0(xi_j)
      for (int m = 1; m < g; ++m) {
        Real phi = (P[m + 1][i] - P[m - 1][i]) / (2 * (2 * m + 1));
        acc += phi * Real(2 * m + 1) * gl.w[j] * P[m][j];
      }
      M[static_cast<size_t>(i) * g + j] = std::move(acc);
    }
  }
  PrecGuard pg2(prec);
  for (Real& v : M) v = round_here(v);
  return cache.emplace(key, std::move(M)).first->second;
}

// weight-1 suffix value G(a; t) = log(1 - t/a); for the letter 1 the
// complement is used so accuracy survives t -> 1
Cplx suffix1(const Cplx& a, const Cplx& inva, const Real& t, const Real& omt) {
  if (is_exact_one(a)) return Cplx(log(omt));
  return log1p(-1 * (inva * t));
}

// denominator t - a, exact complement for a = 1
Cplx denom(const Cplx& a, const Real& t, const Real& omt) {
  if (is_exact_one(a)) return Cplx(-omt);
  return Cplx(t) - a;
}

Cplx eval_level(const std::vector<Cplx>& a, int level, int g,
                const PrecisionCtx& ctx) {
  const mpfr_prec_t prec = ctx.prec_bits();
  const NodeGrid& grid = node_grid(level, prec, g);
  const GLRule& gl = gauss_legendre(g, prec);
  const long n = static_cast<long>(a.size());
  const long NP = grid.panels;
  Real h = ldexp2(Real(1l), -level);

  std::vector<Cplx> inva(n);
  for (long j = 0; j < n; ++j)
    if (!is_exact_zero(a[j]) && !is_exact_one(a[j])) inva[j] = inv(a[j]);

  // suffix values at all panel GL points, deepest letter first
  std::vector<Cplx> V(static_cast<size_t>(NP) * g);
  for (long k = 0; k < NP; ++k)
    for (int i = 0; i < g; ++i) {
      size_t ix = static_cast<size_t>(k) * g + i;
      V[ix] = suffix1(a[n - 1], inva[n - 1], grid.gt[ix], grid.gomt[ix]);
    }

  std::vector<Cplx> nodevals;  // suffix_2 at nodes once j reaches 2
  std::vector<Cplx> I(static_cast<size_t>(NP) * g);
  const std::vector<Real>* AD = nullptr;
  if (n >= 4) AD = &antider_matrix(g, prec);

  for (long j = n - 2; j >= 1; --j) {
    // integrand of the layer with letter a[j]: V/(x - a_j) * t'(u)
    for (long k = 0; k < NP; ++k)
      for (int i = 0; i < g; ++i) {
        size_t ix = static_cast<size_t>(k) * g + i;
        Cplx d = denom(a[j], grid.gt[ix], grid.gomt[ix]);
        if (is_exact_zero(a[j]))
          I[ix] = V[ix] / Cplx(grid.gt[ix]) * grid.gw[ix];
        else
          I[ix] = V[ix] / d * grid.gw[ix];
      }
    // cumulative node values
    std::vector<Cplx> C(NP + 1);
    for (long k = 0; k < NP; ++k) {
      Cplx panel;
      for (int i = 0; i < g; ++i)
        panel += I[static_cast<size_t>(k) * g + i] * gl.w[i];
      C[k + 1] = C[k] + panel * h;
    }
    if (j == 1) {
      nodevals = std::move(C);
      break;
    }
    // next suffix at the GL points: C[k] + h * (AD I)_i per panel
    std::vector<Cplx> W(static_cast<size_t>(NP) * g);
    for (long k = 0; k < NP; ++k)
      for (int i = 0; i < g; ++i) {
        Cplx acc;
        for (int m = 0; m < g; ++m)
          acc += I[static_cast<size_t>(k) * g + m] *
                 (*AD)[static_cast<size_t>(i) * g + m];
        W[static_cast<size_t>(k) * g + i] = C[k] + acc * h;
      }
    V = std::move(W);
  }

  // outer tanh-sinh sum over nodes with the first letter
  long NN = NP + 1;
  Cplx S;
  for (long i = 0; i < NN; ++i) {
    Cplx d = denom(a[0], grid.t[i], grid.omt[i]);
    if (is_exact_zero(a[0]))
      S += nodevals[i] / Cplx(grid.t[i]) * grid.w[i];
    else
      S += nodevals[i] / d * grid.w[i];
  }
  return S * h;
}

// convergent word at z = 1: first letter != 1, last letter != 0
Cplx eval_core(const std::vector<Cplx>& a, const PrecisionCtx& ctx) {
  const long n = static_cast<long>(a.size());
  if (n == 1) {
    Real one(1l);
    return suffix1(a[0], inv(a[0]), one, Real(0l));
  }
  if (n == 2) {
    Cplx inv2 = is_exact_zero(a[1]) || is_exact_one(a[1]) ? Cplx() : inv(a[1]);
    auto r = integrate_01(
        [&](const Real& t, const Real& omt) {
          Cplx s = suffix1(a[1], inv2, t, omt);
          if (is_exact_zero(a[0])) return s / Cplx(t);
          return s / denom(a[0], t, omt);
        },
        ctx);
    if (!r.converged) throw std::runtime_error("gpl weight-2 quadrature did not converge");
    return r.value;
  }

  int g = (ctx.digits + 20) / 3;
  if (g < 12) g = 12;
  if (g > 32) g = 32;
  int l0 = ctx.digits <= 45 ? 4 : 5;
  Real tol = pow10(-(ctx.digits + ctx.guard - 2));
  Cplx prev;
  bool have = false;
  for (int level = l0; level <= 9; ++level) {
    Cplx S = eval_level(a, level, g, ctx);
    if (have) {
      Real err = abs(S - prev) * 10;
      Real scale = abs(S);
      if (scale < 1) scale = Real(1l);
      if (err <= tol * scale) return S;
    }
    prev = S;
    have = true;
  }
  throw std::runtime_error("gpl quadrature did not converge");
}

void riffle(const std::vector<Cplx>& u, const std::vector<Cplx>& v, size_t iu,
            size_t iv, std::vector<Cplx>& cur,
            std::vector<std::vector<Cplx>>& out) {
  if (iu == u.size() && iv == v.size()) {
    out.push_back(cur);
    return;
  }
  if (iu < u.size()) {
    cur.push_back(u[iu]);
    riffle(u, v, iu + 1, iv, cur, out);
    cur.pop_back();
  }
  if (iv < v.size()) {
    cur.push_back(v[iv]);
    riffle(u, v, iu, iv + 1, cur, out);
    cur.pop_back();
  }
}

// rewrite a word with trailing zeros at z = 1: with Y the stem and m the
// trailing-zero count, 0 = G(0^m;1) G(Y;1) expands over riffles in which the
// original appears exactly once (the all-stem-first path, generated first),
// so the word equals minus the other riffles, each with fewer trailing zeros
void strip_trailing_zeros(const std::vector<Cplx>& letters, const Cplx& coeff,
                          GplCombination& out) {
  size_t m = 0;
  while (m < letters.size() && is_exact_zero(letters[letters.size() - 1 - m]))
    ++m;
  if (m == 0) {
    GplWord w;
    w.letters = letters;
    w.z = Real(1l);
    out.terms.push_back({coeff, std::move(w)});
    return;
  }
  std::vector<Cplx> Y(letters.begin(), letters.end() - m);
  std::vector<Cplx> zeros(m, Cplx());
  std::vector<std::vector<Cplx>> words;
  std::vector<Cplx> cur;
  riffle(Y, zeros, 0, 0, cur, words);
  for (size_t i = 1; i < words.size(); ++i)
    strip_trailing_zeros(words[i], -1 * coeff, out);
}

std::mutex g_memo_mu;
std::map<std::string, Cplx>& memo_map() {
  static std::map<std::string, Cplx> m;
  return m;
}

}  // namespace

std::string gpl_word_key(const GplWord& w, int digits) {
  std::string key = "gpl|";
  for (const Cplx& a : w.letters) {
    key += to_string(a.re, 40);
    key += ",";
    key += to_string(a.im, 40);
    key += ";";
  }
  key += "z=";
  key += to_string(w.z, 40);
  key += "|d=";
  key += std::to_string(digits);
  return key;
}

Cplx gpl_eval(const GplWord& word, const PrecisionCtx& ctx) {
  PrecGuard pg(ctx.prec_bits());
  const long n = word.weight();
  if (n == 0) return Cplx(Real(1l));
  if (n > 4) throw std::domain_error("gpl weight > 4 unsupported");
  if (!(word.z > 0) || word.z > 1)
    throw std::domain_error("gpl argument must lie in (0,1]");

  std::vector<Cplx> a = word.letters;
  bool allzero = true;
  for (const Cplx& c : a)
    if (!is_exact_zero(c)) {
      allzero = false;
      break;
    }
  if (allzero) {
    // log^n(z)/n!
    Real lz = log(word.z);
    Real v = pow(lz, n);
    for (long k = 2; k <= n; ++k) v /= k;
    return Cplx(v);
  }

  if (word.z < 1) {
    if (is_exact_zero(a.back()))
      throw std::domain_error(
          "regularization required: trailing zero with argument below 1");
    for (Cplx& c : a) c /= word.z;
  }

  std::string key = gpl_word_key(word, ctx.digits);
  {
    std::lock_guard<std::mutex> lock(g_memo_mu);
    auto it = memo_map().find(key);
    if (it != memo_map().end()) return round_here(it->second);
  }

  for (const Cplx& c : a)
    if (on_open_segment(c))
      throw std::domain_error("gpl letter lies on the integration segment");

  Cplx value;
  if (is_exact_zero(a.back())) {
    GplCombination comb;
    strip_trailing_zeros(a, Cplx(Real(1l)), comb);
    for (const GplTerm& term : comb.terms) {
      if (is_exact_one(term.word.letters.front()))
        throw std::domain_error("regularization required: leading letter 1");
      value += term.coeff * eval_core(term.word.letters, ctx);
    }
  } else {
    if (is_exact_one(a.front()))
      throw std::domain_error("regularization required: leading letter 1");
    value = eval_core(a, ctx);
  }

  {
    std::lock_guard<std::mutex> lock(g_memo_mu);
    memo_map().emplace(key, value);
  }
  return value;
}

Cplx gpl_eval(const GplCombination& comb, const PrecisionCtx& ctx) {
  Cplx s;
  for (const GplTerm& t : comb.terms) s += t.coeff * gpl_eval(t.word, ctx);
  return s;
}

GplCombination shuffle(const GplWord& u, const GplWord& v) {
  if (u.z != v.z) throw std::domain_error("shuffle arguments differ");
  std::vector<std::vector<Cplx>> words;
  std::vector<Cplx> cur;
  riffle(u.letters, v.letters, 0, 0, cur, words);
  GplCombination comb;
  for (auto& w : words) {
    GplWord gw;
    gw.letters = std::move(w);
    gw.z = u.z;
    comb.terms.push_back({Cplx(Real(1l)), std::move(gw)});
  }
  return comb;
}

GplCombination regularize_word(const GplWord& word) {
  GplCombination comb;
  if (word.weight() == 0 || !is_exact_one(word.letters.front()) ||
      word.z < 1) {
    comb.terms.push_back({Cplx(Real(1l)), word});
    return comb;
  }
  if (word.weight() != 3)
    throw std::domain_error(
        "unsupported divergent word: no rewrite for this shape");
  const Cplx& a = word.letters[1];
  const Cplx& b = word.letters[2];
  if (is_exact_zero(b))
    throw std::domain_error(
        "unsupported divergent word: no rewrite for this shape");
  Cplx oma = Cplx(Real(1l)) - a;
  Cplx omb = Cplx(Real(1l)) - b;
  GplWord w1, w2;
  w1.letters = {Cplx(), omb, oma};
  w1.z = Real(1l);
  w2.letters = {omb, Cplx(), oma};
  w2.z = Real(1l);
  comb.terms.push_back({Cplx(Real(1l)), std::move(w1)});
  comb.terms.push_back({Cplx(Real(1l)), std::move(w2)});
  return comb;
}

Cplx mpl_eval(const MplQuery& q, const PrecisionCtx& ctx) {
  PrecGuard pg(ctx.prec_bits());
  const size_t n = q.orders.size();
  if (n == 0 || q.args.size() != n)
    throw std::domain_error("mpl query needs matching orders and arguments");
  for (long o : q.orders)
    if (o < 1) throw std::domain_error("mpl orders must be >= 1");
  if (q.orders[0] == 1 && is_exact_one(q.args[0]))
    throw std::domain_error("mpl divergent: leading (1, 1)");

  GplWord w;
  w.z = Real(1l);
  Cplx prod(Real(1l));
  Real bound = 1 + pow10(-8);
  for (size_t j = 0; j < n; ++j) {
    if (is_exact_zero(q.args[j]))
      throw std::domain_error("mpl arguments must be nonzero");
    prod *= q.args[j];
    if (abs(prod) > bound)
      throw std::domain_error("mpl partial products must stay in the unit disk");
    for (long k = 1; k < q.orders[j]; ++k) w.letters.push_back(Cplx());
    w.letters.push_back(inv(prod));
  }
  Cplx v = gpl_eval(w, ctx);
  return (n % 2 == 0) ? v : -v;
}

Cplx mpl_series_check(const MplQuery& q, int digits) {
  if (digits > 24) digits = 24;
  PrecisionCtx ctx(digits + 12);
  PrecGuard pg(ctx.prec_bits());
  const long n = static_cast<long>(q.orders.size());
  if (n == 0 || q.args.size() != static_cast<size_t>(n))
    throw std::domain_error("mpl query needs matching orders and arguments");

  // prefix products and their distinct unit-circle frequencies
  std::vector<Cplx> prefix(n);
  Cplx p(Real(1l));
  Real maxmod(0l);
  for (long j = 0; j < n; ++j) {
    p *= q.args[j];
    prefix[j] = p;
    Real m = abs(p);
    if (m > maxmod) maxmod = m;
  }

  bool geometric = maxmod < Real(Rat(97, 100));
  long M;
  long window = 0;
  std::vector<Cplx> freqs;
  if (geometric) {
    // series terms decay like maxmod^m; digits*? terms suffice
    double lm = std::log10(to_double(maxmod));
    M = static_cast<long>((digits + 14) / (-lm)) + n + 30;
  } else {
    for (long j = 0; j < n; ++j) {
      Real gap = abs(abs(prefix[j]) - 1);
      if (gap > Real(Rat(1, 1000))) {
        // geometric component, negligible by m ~ 3000 only if well inside
        if (abs(prefix[j]) < Real(Rat(97, 100))) continue;
        throw std::domain_error("mpl series check: partial product modulus in dead zone");
      }
      bool seen = false;
      for (const Cplx& f : freqs)
        if (abs(f - prefix[j]) < pow10(-10)) seen = true;
      if (!seen) {
        if (abs(Cplx(Real(1l)) - prefix[j]) < Real(Rat(1, 10)))
          throw std::domain_error("mpl series check: frequency too close to 1");
        freqs.push_back(prefix[j]);
      }
    }
    window = 8 * static_cast<long>(freqs.size()) + 4;
    M = 3000 + window;
  }

  // DP over depth: T_{j}(m) = sum_{l<=m} z_j^l / l^{a_j} * T_{j+1}(l-1)
  std::vector<Cplx> inner(static_cast<size_t>(M) + 1, Cplx(Real(1l)));
  for (long j = n - 1; j >= 0; --j) {
    std::vector<Cplx> outv(static_cast<size_t>(M) + 1);
    Cplx zp(Real(1l));
    for (long m = 1; m <= M; ++m) {
      zp *= q.args[j];
      Cplx term = zp * inner[m - 1] / pow(Real(m), q.orders[j]);
      outv[m] = outv[m - 1] + term;
    }
    inner = std::move(outv);
  }

  if (geometric) return inner[M];

  // frequency annihilation on the tail window
  std::vector<Cplx> S(inner.end() - (window + 1), inner.end());
  for (const Cplx& f : freqs) {
    Cplx omf = Cplx(Real(1l)) - f;
    for (int pass = 0; pass < 8 && S.size() >= 2; ++pass) {
      for (size_t m = 0; m + 1 < S.size(); ++m) S[m] = (S[m + 1] - f * S[m]) / omf;
      S.pop_back();
    }
  }
  return S.back();
}

}  // namespace cmzv
