#include <cmzv/catalog.hpp>

#include <catalog_builtin.hpp>
#include <cmzv/constants.hpp>
#include <cmzv/gpl.hpp>
#include <cmzv/polylog.hpp>
#include <cmzv/quad.hpp>

#include <cctype>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cmzv {

namespace {

// ------------------------------------------------------------- expressions

bool rational_token(const std::string& t) {
  size_t i = (t.size() > 1 && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
  bool digit = false, slash = false;
  for (; i < t.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(t[i]))) { digit = true; continue; }
    if (t[i] == '/' && digit && !slash) { slash = true; digit = false; continue; }
    return false;
  }
  return digit;
}

std::vector<std::string> tokenize(const std::string& src) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : src) {
    if (c == '(' || c == ')') {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
      toks.emplace_back(1, c);
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) toks.push_back(cur);
  return toks;
}

ExprPtr make_rat(const Rat& r) {
  auto e = std::make_shared<Expr>();
  e->head = "rat";
  e->lit = r;
  return e;
}

ExprPtr make_name(std::string s) {
  auto e = std::make_shared<Expr>();
  e->head = "name";
  e->sym = std::move(s);
  return e;
}

ExprPtr atom_expr(const std::string& t) {
  if (rational_token(t)) return make_rat(parse_rational(t));
  return make_name(t);
}

struct ExprParser {
  const std::vector<std::string>& t;
  size_t i = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("expression: " + msg);
  }
  const std::string& next() {
    if (i >= t.size()) fail("unexpected end of input");
    return t[i++];
  }
  std::string atom() {
    const std::string& a = next();
    if (a == "(" || a == ")") fail("expected atom, got '" + a + "'");
    return a;
  }
  long integer() {
    std::string a = atom();
    if (!rational_token(a)) fail("expected integer, got '" + a + "'");
    Rat r = parse_rational(a);
    if (denominator(r) != 1) fail("expected integer, got '" + a + "'");
    return numerator(r).convert_to<long>();
  }
  void close() {
    if (next() != ")") fail("expected ')'");
  }

  ExprPtr parse() {
    const std::string& tok = next();
    if (tok == ")") fail("unexpected ')'");
    if (tok != "(") return atom_expr(tok);
    auto e = std::make_shared<Expr>();
    e->head = atom();
    const std::string& h = e->head;
    if (h == "sumt" || h == "suma") {
      e->sym = atom();
      e->args.push_back(parse());
      close();
    } else if (h == "sumw") {
      e->sym = atom();
      e->sym2 = atom();
      e->args.push_back(parse());
      close();
    } else if (h == "sumww") {
      e->sym = atom();
      e->sym2 = atom();
      e->args.push_back(make_name(atom()));
      e->args.push_back(parse());
      close();
    } else if (h == "sumlm") {
      e->args.push_back(parse());
      close();
    } else if (h == "summ") {
      e->lit = Rat(integer());
      e->args.push_back(parse());
      close();
    } else if (h == "lemma22") {
      e->lit = Rat(integer());
      e->sym = atom();
      close();
    } else if (h == "sigma") {
      e->args.push_back(make_rat(Rat(integer())));
      e->args.push_back(make_rat(Rat(integer())));
      close();
    } else {
      while (true) {
        if (i >= t.size()) fail("missing ')'");
        if (t[i] == ")") { ++i; break; }
        e->args.push_back(parse());
      }
    }
    return e;
  }
};

struct VarScope {
  std::map<std::string, Cplx>& m;
  std::string key;
  std::optional<Cplx> old;

  VarScope(std::map<std::string, Cplx>& vars, const std::string& k, const Cplx& v)
      : m(vars), key(k) {
    auto it = m.find(k);
    if (it != m.end()) old = it->second;
    m[key] = v;
  }
  ~VarScope() {
    if (old) m[key] = *old;
    else m.erase(key);
  }
  VarScope(const VarScope&) = delete;
  VarScope& operator=(const VarScope&) = delete;
};

const CubicParam& need_param(const EvalEnv& env, const std::string& what) {
  if (!env.param)
    throw std::runtime_error(what + " needs a cubic parameter binding");
  return *env.param;
}

long small_int(const ExprPtr& e, const std::string& what) {
  if (e->head != "rat" || denominator(e->lit) != 1)
    throw std::runtime_error(what + " expects an integer literal");
  return numerator(e->lit).convert_to<long>();
}

std::vector<Cplx> set_members(const std::string& name, const CubicParam& p) {
  RootSet rs = root_set(p);
  if (name == "Sx") return rs.all();
  if (name == "Sx+") return rs.plus;
  if (name == "Sx-") return rs.minus;
  throw std::runtime_error("unknown root set: " + name);
}

}  // namespace

ExprPtr parse_expr(const std::string& src) {
  std::vector<std::string> toks = tokenize(src);
  if (toks.empty()) throw std::runtime_error("expression: empty source");
  if (toks[0] != "(" && toks.size() > 1) {
    toks.insert(toks.begin(), "(");
    toks.emplace_back(")");
  }
  ExprParser p{toks};
  ExprPtr e = p.parse();
  if (p.i != toks.size()) p.fail("trailing tokens after expression");
  return e;
}

Cplx eval_expr(const ExprPtr& e, EvalEnv& env) {
  if (!env.ctx) throw std::logic_error("eval_expr: missing precision context");
  const PrecisionCtx& ctx = *env.ctx;
  PrecGuard guard(ctx.prec_bits());
  const std::string& h = e->head;
  auto ev = [&](size_t j) { return eval_expr(e->args[j], env); };
  auto arity = [&](size_t n) {
    if (e->args.size() != n)
      throw std::runtime_error("(" + h + " ...) expects " + std::to_string(n) +
                               " arguments");
  };

  if (h == "rat") return Cplx(Real(e->lit));
  if (h == "name") {
    auto it = env.vars.find(e->sym);
    if (it != env.vars.end()) return it->second;
    if (e->sym == "callog" && env.lambda) return Cplx(*env.lambda);
    if (constant_known(e->sym)) return constant(e->sym, ctx);
    throw std::runtime_error("unbound variable: " + e->sym);
  }
  if (h == "+") {
    Cplx s;
    for (const auto& a : e->args) s += eval_expr(a, env);
    return s;
  }
  if (h == "-") {
    if (e->args.size() == 1) return -ev(0);
    if (e->args.size() == 2) return ev(0) - ev(1);
    throw std::runtime_error("(- ...) expects 1 or 2 arguments");
  }
  if (h == "*") {
    Cplx s(1);
    for (const auto& a : e->args) s *= eval_expr(a, env);
    return s;
  }
  if (h == "/") { arity(2); return ev(0) / ev(1); }
  if (h == "^") {
    arity(2);
    return pow(ev(0), small_int(e->args[1], "(^ ...)"));
  }
  if (h == "sqrt") { arity(1); return sqrt(ev(0)); }
  if (h == "log") { arity(1); return log(ev(0)); }
  if (h == "re") { arity(1); return Cplx(ev(0).re); }
  if (h == "im") { arity(1); return Cplx(ev(0).im); }
  if (h == "zeta") {
    arity(1);
    return Cplx(zeta_real(small_int(e->args[0], "(zeta ...)"), ctx));
  }
  if (h == "li") {
    arity(2);
    return li(small_int(e->args[0], "(li ...)"), ev(1), ctx);
  }
  if (h == "atanhinv") {
    arity(1);
    Cplx a = ev(0);
    if (sign(a.im) == 0) return Cplx(atanh(1 / a.re));
    return log((a + Cplx(1)) / (a - Cplx(1))) / 2;
  }
  if (h == "discw") { arity(0); return disc_log(need_param(env, "(discw)")); }
  if (h == "frakL" || h == "frakM" || h == "frakl" || h == "frakm") {
    arity(0);
    SpecialFn fn = h == "frakL"   ? SpecialFn::frakL
                   : h == "frakM" ? SpecialFn::frakM
                   : h == "frakl" ? SpecialFn::frakl
                                  : SpecialFn::frakm;
    return special_fn(fn, need_param(env, "(" + h + ")"), ctx);
  }
  if (h == "sigma") {
    const CubicParam& p = need_param(env, "(sigma ...)");
    return sigma(static_cast<int>(small_int(e->args[0], "(sigma ...)")),
                 static_cast<int>(small_int(e->args[1], "(sigma ...)")), p);
  }
  if (h == "a3") { arity(1); return a3(ev(0), ctx); }
  if (h == "aa3") { arity(2); return aa3(ev(0), ev(1), ctx); }
  if (h == "gpl" || h == "gplat") {
    GplWord w;
    size_t first = 0;
    if (h == "gplat") {
      if (e->args.size() < 2)
        throw std::runtime_error("(gplat t ...) needs letters");
      Cplx t = ev(0);
      if (sign(t.im) != 0 || !(t.re > 0) || t.re > 1)
        throw std::runtime_error("(gplat ...) needs real t in (0, 1]");
      w.z = t.re;
      first = 1;
    } else if (e->args.empty()) {
      throw std::runtime_error("(gpl ...) needs letters");
    }
    for (size_t j = first; j < e->args.size(); ++j)
      w.letters.push_back(ev(j));
    if (w.z == 1) return gpl_eval(regularize_word(w), ctx);
    return gpl_eval(w, ctx);
  }
  if (h == "mpl11" || h == "mpl111") {
    size_t n = h == "mpl11" ? 2 : 3;
    arity(n);
    MplQuery q;
    q.orders.assign(n, 1);
    for (const auto& a : e->args) q.args.push_back(eval_expr(a, env));
    return mpl_eval(q, ctx);
  }
  if (h == "q") {
    arity(1);
    const CubicParam& p = need_param(env, "(q ...)");
    Cplx T = ev(0);
    Real fx = p.x * Real(Rat(1) - p.x2);
    return T * (Cplx(1) - T * T) / fx;
  }
  if (h == "lemma22") {
    const CubicParam& p = need_param(env, "(lemma22 ...)");
    long r = numerator(e->lit).convert_to<long>();
    LiExpansion v;
    if (e->sym == "sq") v = LiExpansion::squared;
    else if (e->sym == "plus") v = LiExpansion::plus;
    else if (e->sym == "minus") v = LiExpansion::minus;
    else
      throw std::runtime_error("(lemma22 ...) variant must be sq, plus, or minus");
    auto it = env.vars.find("t");
    if (it == env.vars.end() || sign(it->second.im) != 0)
      throw std::runtime_error("(lemma22 ...) needs a real bound variable t");
    return gpl_eval(lemma22_words(static_cast<int>(r), v, p, it->second.re), ctx);
  }
  if (h == "sumt" || h == "suma") {
    Cplx s;
    for (long v = -1; v <= 1; v += (h == "sumt" ? 2 : 1)) {
      VarScope scope(env.vars, e->sym, Cplx(v));
      s += eval_expr(e->args[0], env);
    }
    return s;
  }
  if (h == "sumw") {
    const CubicParam& p = need_param(env, "(sumw ...)");
    Cplx s;
    for (const Cplx& w : set_members(e->sym2, p)) {
      VarScope scope(env.vars, e->sym, w);
      s += eval_expr(e->args[0], env);
    }
    return s;
  }
  if (h == "sumww") {
    const CubicParam& p = need_param(env, "(sumww ...)");
    std::vector<Cplx> mem = set_members(e->args[0]->sym, p);
    Cplx s;
    for (const Cplx& w : mem)
      for (const Cplx& w2 : mem) {
        VarScope s1(env.vars, e->sym, w);
        VarScope s2(env.vars, e->sym2, w2);
        s += eval_expr(e->args[1], env);
      }
    return s;
  }
  if (h == "sumlm") {
    const CubicParam& p = need_param(env, "(sumlm ...)");
    Cplx s;
    for (int l = 0; l <= 1; ++l)
      for (int m = 0; m <= 1; ++m) {
        VarScope s1(env.vars, "sgl", Cplx(l == 0 ? 1 : -1));
        VarScope s2(env.vars, "sgm", Cplx(m == 0 ? 1 : -1));
        VarScope s3(env.vars, "sig", sigma(l, m, p));
        s += eval_expr(e->args[0], env);
      }
    return s;
  }
  if (h == "summ") {
    const CubicParam& p = need_param(env, "(summ ...)");
    int l = static_cast<int>(numerator(e->lit).convert_to<long>());
    Cplx s;
    for (int m = 0; m <= 1; ++m) {
      VarScope s1(env.vars, "sgm", Cplx(m == 0 ? 1 : -1));
      VarScope s2(env.vars, "sig", sigma(l, m, p));
      s += eval_expr(e->args[0], env);
    }
    return s;
  }
  throw std::runtime_error("unknown operator: " + h);
}

namespace {

bool pure_rat(const ExactValue& v) {
  return v.clog == 0 && v.clog2 == 0 && v.cpi2 == 0;
}

// Product in the basis {1, log2, log2^2, pi^2}; nullopt when a cross term
// would leave the span.
std::optional<ExactValue> exact_mul(const ExactValue& a, const ExactValue& b) {
  Rat l3 = a.clog * b.clog2 + a.clog2 * b.clog;
  Rat l4 = a.clog2 * b.clog2;
  Rat lp = a.clog * b.cpi2 + a.cpi2 * b.clog;
  Rat l2p = a.clog2 * b.cpi2 + a.cpi2 * b.clog2;
  Rat pp = a.cpi2 * b.cpi2;
  if (l3 != 0 || l4 != 0 || lp != 0 || l2p != 0 || pp != 0) return std::nullopt;
  ExactValue r;
  r.c1 = a.c1 * b.c1;
  r.clog = a.c1 * b.clog + a.clog * b.c1;
  r.clog2 = a.c1 * b.clog2 + a.clog2 * b.c1 + a.clog * b.clog;
  r.cpi2 = a.c1 * b.cpi2 + a.cpi2 * b.c1;
  return r;
}

}  // namespace

std::optional<ExactValue> eval_exact(const ExprPtr& e) {
  const std::string& h = e->head;
  if (h == "rat") return ExactValue(e->lit);
  if (h == "name") {
    if (e->sym == "log2") {
      ExactValue v;
      v.clog = 1;
      return v;
    }
    return std::nullopt;
  }
  if (h == "+") {
    ExactValue s;
    for (const auto& a : e->args) {
      auto v = eval_exact(a);
      if (!v) return std::nullopt;
      s += *v;
    }
    return s;
  }
  if (h == "-") {
    if (e->args.size() == 1) {
      auto v = eval_exact(e->args[0]);
      if (!v) return std::nullopt;
      return v->scale(Rat(-1));
    }
    if (e->args.size() != 2) return std::nullopt;
    auto a = eval_exact(e->args[0]), b = eval_exact(e->args[1]);
    if (!a || !b) return std::nullopt;
    return *a - *b;
  }
  if (h == "*") {
    ExactValue s{Rat(1)};
    for (const auto& a : e->args) {
      auto v = eval_exact(a);
      if (!v) return std::nullopt;
      auto nx = exact_mul(s, *v);
      if (!nx) return std::nullopt;
      s = *nx;
    }
    return s;
  }
  if (h == "/") {
    if (e->args.size() != 2) return std::nullopt;
    auto a = eval_exact(e->args[0]), b = eval_exact(e->args[1]);
    if (!a || !b || !pure_rat(*b) || b->c1 == 0) return std::nullopt;
    return a->scale(Rat(1) / b->c1);
  }
  if (h == "^") {
    if (e->args.size() != 2 || e->args[1]->head != "rat" ||
        denominator(e->args[1]->lit) != 1)
      return std::nullopt;
    long n = numerator(e->args[1]->lit).convert_to<long>();
    if (e->args[0]->head == "name" && n == 2) {
      ExactValue v;
      if (e->args[0]->sym == "pi") { v.cpi2 = 1; return v; }
      if (e->args[0]->sym == "log2") { v.clog2 = 1; return v; }
    }
    auto base = eval_exact(e->args[0]);
    if (!base) return std::nullopt;
    ExactValue acc{Rat(1)};
    for (long j = 0; j < (n < 0 ? -n : n); ++j) {
      auto nx = exact_mul(acc, *base);
      if (!nx) return std::nullopt;
      acc = *nx;
    }
    if (n < 0) {
      if (!pure_rat(acc) || acc.c1 == 0) return std::nullopt;
      acc = ExactValue(Rat(1) / acc.c1);
    }
    return acc;
  }
  return std::nullopt;
}

bool expr_uses(const ExprPtr& e, const std::string& name) {
  if (e->head == "name" && e->sym == name) return true;
  for (const auto& a : e->args)
    if (expr_uses(a, name)) return true;
  return false;
}

// ------------------------------------------------------------------ records

namespace {

const std::set<std::string>& kind_set() {
  static const std::set<std::string> k = {
      "series-eq-closedform", "integral-eq-exact", "integral-eq-closedform",
      "exact-telescoping",    "constant-relation", "expansion-check"};
  return k;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

const CatalogRecord* Catalog::find(const std::string& id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

Catalog parse_catalog(std::istream& in, const std::string& name) {
  Catalog cat;
  std::set<std::string> ids;
  std::string raw;
  int ln = 0;
  bool header = false;
  std::optional<CatalogRecord> cur;

  auto fail = [&](int l, int col, const std::string& msg) {
    throw std::runtime_error(name + ":" + std::to_string(l) + ":" +
                             std::to_string(col) + ": " + msg);
  };
  auto flush = [&] {
    if (!cur) return;
    if (cur->kind.empty() || cur->group.empty() || cur->lhs.empty() ||
        cur->rhs.empty() || cur->tol.empty() || cur->role.empty())
      fail(cur->line, 1, "record " + cur->id + " is missing a required field");
    if (!kind_set().count(cur->kind))
      fail(cur->line, 1, "unknown kind: " + cur->kind);
    if (cur->role != "acceptance" && cur->role != "calibration" &&
        cur->role != "property")
      fail(cur->line, 1, "unknown role: " + cur->role);
    if (cur->tol != "T40" && cur->tol != "T30" && cur->tol != "T25" &&
        cur->tol != "T20-calibrated")
      fail(cur->line, 1, "unknown tolerance class: " + cur->tol);
    if (!ids.insert(cur->id).second)
      fail(cur->line, 1, "duplicate id: " + cur->id);
    cat.records.push_back(std::move(*cur));
    cur.reset();
  };

  while (std::getline(in, raw)) {
    ++ln;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (!header) {
      if (s != "cmzv-catalog v1")
        fail(ln, 1, "expected header 'cmzv-catalog v1'");
      header = true;
      continue;
    }
    size_t colon = s.find(':');
    if (colon == std::string::npos) fail(ln, 1, "expected 'field: value'");
    std::string field = trim(s.substr(0, colon));
    std::string value = trim(s.substr(colon + 1));
    if (field == "id") {
      flush();
      if (value.empty()) fail(ln, static_cast<int>(colon) + 2, "empty id");
      cur.emplace();
      cur->id = value;
      cur->line = ln;
      continue;
    }
    if (!cur) fail(ln, 1, "field '" + field + "' before any id");
    std::string* slot = nullptr;
    if (field == "kind") slot = &cur->kind;
    else if (field == "group") slot = &cur->group;
    else if (field == "lhs") slot = &cur->lhs;
    else if (field == "rhs") slot = &cur->rhs;
    else if (field == "tol") slot = &cur->tol;
    else if (field == "role") slot = &cur->role;
    else if (field == "params") slot = &cur->params;
    else if (field == "note") slot = &cur->note;
    else fail(ln, 1, "unknown field: " + field);
    if (!slot->empty()) fail(ln, 1, "repeated field: " + field);
    if (value.empty()) fail(ln, static_cast<int>(colon) + 2, "empty " + field);
    *slot = value;
  }
  flush();
  return cat;
}

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog: " + path);
  return parse_catalog(in, path);
}

const Catalog& builtin_catalog() {
  static const Catalog cat = [] {
    std::istringstream in(detail::builtin_catalog_text);
    return parse_catalog(in, "builtin");
  }();
  return cat;
}

void save_catalog(const Catalog& cat, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write catalog: " + path);
  out << "cmzv-catalog v1\n";
  for (const auto& r : cat.records) {
    out << "\nid: " << r.id << "\nkind: " << r.kind << "\ngroup: " << r.group
        << "\nlhs: " << r.lhs << "\nrhs: " << r.rhs << "\ntol: " << r.tol
        << "\nrole: " << r.role << "\n";
    if (!r.params.empty()) out << "params: " << r.params << "\n";
    if (!r.note.empty()) out << "note: " << r.note << "\n";
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing catalog: " + path);
}

int tol_digits(const std::string& tol) {
  if (tol == "T40") return 60;
  if (tol == "T30") return 45;
  if (tol == "T25") return 40;
  if (tol == "T20-calibrated") return 35;
  throw std::runtime_error("unknown tolerance class: " + tol);
}

int tol_exponent(const std::string& tol) {
  if (tol == "T40") return 40;
  if (tol == "T30") return 30;
  if (tol == "T25") return 25;
  if (tol == "T20-calibrated") return 20;
  throw std::runtime_error("unknown tolerance class: " + tol);
}

namespace {

std::vector<std::string> expand_root_token(const std::string& v) {
  if (v == "roots")
    return {"plus0", "plus1", "plus2", "minus0", "minus1", "minus2"};
  if (v == "plusroots") return {"plus0", "plus1", "plus2"};
  if (v == "minusroots") return {"minus0", "minus1", "minus2"};
  return {v};
}

Rat sample_x2(const std::string& tok) {
  if (tok == "sqrt2") return Rat(2);
  Rat r = parse_rational(tok);
  return r * r;
}

}  // namespace

std::vector<Instance> enumerate_instances(const CatalogRecord& rec) {
  struct Axis {
    std::string name;
    std::vector<std::string> vals;
  };
  std::vector<Axis> axes;
  std::istringstream in(rec.params);
  std::string tok;
  while (in >> tok) {
    size_t eq = tok.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size())
      throw std::runtime_error("record " + rec.id + ": bad params token '" +
                               tok + "'");
    Axis ax;
    ax.name = tok.substr(0, eq);
    std::string rest = tok.substr(eq + 1);
    size_t pos = 0;
    while (true) {
      size_t c = rest.find(',', pos);
      std::string v = rest.substr(pos, c == std::string::npos ? c : c - pos);
      if (v.empty())
        throw std::runtime_error("record " + rec.id + ": bad params token '" +
                                 tok + "'");
      for (auto& ex : expand_root_token(v)) ax.vals.push_back(ex);
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    axes.push_back(std::move(ax));
  }
  if (axes.empty()) return {Instance{}};

  std::vector<Instance> out;
  std::vector<size_t> idx(axes.size(), 0);
  while (true) {
    Instance inst;
    std::string label;
    for (size_t a = 0; a < axes.size(); ++a) {
      const std::string& v = axes[a].vals[idx[a]];
      if (!label.empty()) label += ' ';
      label += axes[a].name + "=" + v;
      if (axes[a].name == "x") inst.x2 = sample_x2(v);
      else inst.bind.emplace_back(axes[a].name, v);
    }
    inst.label = std::move(label);
    out.push_back(std::move(inst));
    size_t a = axes.size();
    while (a > 0 && ++idx[a - 1] == axes[a - 1].vals.size()) {
      idx[a - 1] = 0;
      --a;
    }
    if (a == 0) return out;
  }
}

namespace {

// Cubic parameters cached per (x^2, working digits); pointers stay valid.
const CubicParam* cached_param(const Rat& x2, const PrecisionCtx& ctx) {
  static std::map<std::string, std::unique_ptr<CubicParam>> cache;
  static std::mutex mu;
  std::string key = x2.str() + "@" + std::to_string(ctx.working_digits());
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<CubicParam>(cubic_param(x2, ctx)))
             .first;
  return it->second.get();
}

Cplx resolve_token(const std::string& tok, const CubicParam* p,
                   const std::string& id) {
  bool plus = tok.rfind("plus", 0) == 0;
  bool minus = tok.rfind("minus", 0) == 0;
  if (plus || minus) {
    std::string d = tok.substr(plus ? 4 : 5);
    if (d.size() != 1 || d[0] < '0' || d[0] > '2')
      throw std::runtime_error("record " + id + ": bad root token '" + tok + "'");
    if (!p)
      throw std::runtime_error("record " + id +
                               ": root binding needs an x sample");
    RootSet rs = root_set(*p);
    return (plus ? rs.plus : rs.minus)[static_cast<size_t>(d[0] - '0')];
  }
  return Cplx(Real(parse_rational(tok)));
}

EvalEnv make_env(const CatalogRecord& rec, const Instance& inst,
                 const PrecisionCtx& ctx, const CubicParam* p,
                 const Real* lambda) {
  EvalEnv env;
  env.ctx = &ctx;
  env.param = p;
  env.lambda = lambda;
  if (p) env.vars.emplace("x", Cplx(p->x));
  for (const auto& [k, tok] : inst.bind)
    env.vars[k] = resolve_token(tok, p, rec.id);
  return env;
}

const CubicParam* instance_param(const Instance& inst, const PrecisionCtx& ctx) {
  return inst.x2 ? cached_param(*inst.x2, ctx) : nullptr;
}

// Integrands over (0,1) addressed by lhs tag.  K = [t(1-t^2)/4]^{2k}; the
// measures divide by 1-t^2 (ker), t^2 (tt), or nothing (flat).
Integrand01 build_integrand(const std::string& tag, long k, const CubicParam* p,
                            const std::map<std::string, Cplx>& vars,
                            const PrecisionCtx& ctx) {
  auto getc = [&](const char* v) -> Cplx {
    auto it = vars.find(v);
    if (it == vars.end())
      throw std::runtime_error("integrand '" + tag + "' needs binding " + v);
    return it->second;
  };
  auto needp = [&]() -> const CubicParam& {
    if (!p)
      throw std::runtime_error("integrand '" + tag + "' needs an x sample");
    return *p;
  };

  size_t dash = tag.find('-');
  std::string family = dash == std::string::npos ? tag : tag.substr(0, dash);
  std::string flavor = dash == std::string::npos ? "" : tag.substr(dash + 1);

  if (family == "ker" || family == "tt" || family == "flat") {
    if (flavor != "1" && flavor != "logt" && flavor != "loga" &&
        flavor != "logsq")
      throw std::runtime_error("unknown integrand tag: " + tag);
    int measure = family == "ker" ? 1 : (family == "tt" ? 2 : 0);
    return [k, flavor, measure](const Real& t, const Real& omt) -> Cplx {
      Real ott = omt * (1 + t);
      Real f = pow(t * ott / 4, 2 * k);
      if (flavor == "logt") f *= log(t);
      else if (flavor == "loga") f *= log(ott);
      else if (flavor == "logsq") {
        Real u = 2 * log(t) - log(ott);
        f *= u * u;
      }
      if (measure == 1) f /= ott;
      else if (measure == 2) f /= t * t;
      return Cplx(f);
    };
  }
  if (family == "six") {
    if (flavor != "1" && flavor != "logt" && flavor != "loga")
      throw std::runtime_error("unknown integrand tag: " + tag);
    return [k, flavor](const Real& t, const Real& omt) -> Cplx {
      Real ott = omt * (1 + t);
      Real f = 9 * ldexp2(pow(t * ott, 2 * k + 2), -4 * k);
      if (flavor == "logt") f = 2 * f * log(t);
      else if (flavor == "loga") f *= log(ott);
      return Cplx(f / ott);
    };
  }
  if (tag == "h1" || tag == "h4") {
    Real x = needp().x;
    bool logt = tag == "h1";
    return [x, logt](const Real& t, const Real& omt) -> Cplx {
      Real pf = 1 / (t + x) - 1 / (t - x);
      Real g = logt ? log(t) : log(omt * (1 + t)) - 2 * log(t);
      return Cplx(pf * g);
    };
  }
  if (tag == "h2" || tag == "h3" || tag == "h5" || tag == "h6") {
    const CubicParam& pm = needp();
    std::vector<Cplx> sg;
    std::vector<long> co;
    bool ell = tag == "h2" || tag == "h5";
    for (int l = 0; l <= 1; ++l)
      for (int m = 0; m <= 1; ++m) {
        sg.push_back(sigma(l, m, pm));
        co.push_back((ell ? l : m) == 0 ? 1 : -1);
      }
    bool logt = tag == "h2" || tag == "h3";
    return [sg, co, logt](const Real& t, const Real& omt) -> Cplx {
      Real g = logt ? log(t) : log(omt * (1 + t)) - 2 * log(t);
      Cplx s;
      for (size_t j = 0; j < sg.size(); ++j)
        s += co[j] * inv(Cplx(t) - sg[j]);
      return s * g;
    };
  }
  if (tag == "h7") {
    Cplx w = getc("w");
    Cplx ic = inv(w * w - Cplx(1));
    return [ic](const Real& t, const Real& omt) -> Cplx {
      Real ott = omt * (1 + t);
      return log1p(ott * ic) / ott;
    };
  }
  if (tag == "h8") {
    Cplx iw = inv(getc("w"));
    return [iw](const Real& t, const Real& omt) -> Cplx {
      Real ott = omt * (1 + t);
      return (ott / t) * (log1p(-1 * (t * iw)) - log1p(t * iw));
    };
  }
  if (tag == "h9" || tag == "gsq-logsq") {
    const CubicParam& pm = needp();
    Rat f2 = pm.x2 * (Rat(1) - pm.x2) * (Rat(1) - pm.x2);
    Real fx2{f2};
    bool plain = tag == "h9";
    return [fx2, plain](const Real& t, const Real& omt) -> Cplx {
      Real ott = omt * (1 + t);
      Real tt = t * ott;
      Real F = tt * tt / fx2;
      if (plain) return Cplx(-4 * log1p(-F) / ott);
      Real u = 2 * log(t) - log(ott);
      return Cplx(4 * (F / (1 - F)) * u * u / ott);
    };
  }
  if (tag == "li1log") {
    const CubicParam& pm = needp();
    Real fx = pm.x * Real(Rat(1) - pm.x2);
    return [fx](const Real& t, const Real& omt) -> Cplx {
      Real ott = omt * (1 + t);
      Real g = t * ott / fx;
      Real u = 2 * log(t) - log(ott);
      return Cplx(2 * (log1p(-g) / (1 + g) + log1p(g) / (1 - g)) * u / ott);
    };
  }
  if (tag == "loglogA") {
    Cplx iw = inv(getc("w"));
    return [iw](const Real& t, const Real& omt) -> Cplx {
      Real ott = omt * (1 + t);
      return log1p(-1 * (t * iw)) * (log(t) / ott);
    };
  }
  if (tag == "loglogB") {
    Cplx c = inv(getc("w") - Cplx(1));
    return [c](const Real& t, const Real& omt) -> Cplx {
      Real ott = omt * (1 + t);
      return log1p(omt * c) * (log(ott / 2) / ott);
    };
  }
  if (tag == "ttG") {
    Cplx alpha = getc("alpha");
    Cplx w = getc("w");
    const PrecisionCtx* pc = &ctx;
    return [alpha, w, pc](const Real& t, const Real& omt) -> Cplx {
      GplWord word;
      word.letters = {alpha, w};
      word.z = t;
      return (omt * (1 + t) / t) * gpl_eval(word, *pc);
    };
  }
  if (tag == "ttlogt" || tag == "ttloga") {
    Cplx iw = inv(getc("w"));
    bool lt = tag == "ttlogt";
    return [iw, lt](const Real& t, const Real& omt) -> Cplx {
      Real ott = omt * (1 + t);
      return (ott / t) * log1p(-1 * (t * iw)) * (lt ? log(t) : log(ott));
    };
  }
  if (tag == "bivar") {
    Cplx ia = inv(getc("a"));
    Cplx ib = inv(getc("b"));
    return [ia, ib](const Real& t, const Real& omt) -> Cplx {
      Real ott = omt * (1 + t);
      return (ott / t) * log1p(-1 * (t * ia)) * log1p(-1 * (t * ib));
    };
  }
  throw std::runtime_error("unknown integrand tag: " + tag);
}

}  // namespace

SideValue eval_lhs(const CatalogRecord& rec, const Instance& inst,
                   const PrecisionCtx& ctx, const Real* lambda) {
  PrecGuard guard(ctx.prec_bits());
  std::istringstream in(rec.lhs);
  std::string head;
  in >> head;
  if (head == "sum") {
    std::string rest;
    std::getline(in, rest);
    SeriesSpec spec = parse_series(trim(rest));
    if (spec.z_param) {
      if (!inst.x2)
        throw std::runtime_error("record " + rec.id +
                                 ": parametric z needs an x sample");
      spec.z = instance_param(inst, ctx)->z;
      spec.z_param = false;
    }
    if (!spec.via.empty()) {
      IntRoute route = parse_via(spec.via);
      return {series_by_integral(route.kern, route.s, spec.z, ctx), Real(0l)};
    }
    SeriesResult r = sum_series(spec, ctx);
    return {r.value, r.tail_bound};
  }
  if (head == "int") {
    std::string tag, opt;
    in >> tag;
    long k = 0;
    if (in >> opt) {
      if (opt.rfind("k=", 0) != 0)
        throw std::runtime_error("record " + rec.id + ": bad lhs option '" +
                                 opt + "'");
      k = std::stol(opt.substr(2));
    }
    const CubicParam* p = instance_param(inst, ctx);
    EvalEnv env = make_env(rec, inst, ctx, p, lambda);
    if (tag == "a3def") return {a3_integral(env.vars.at("w"), ctx), Real(0l)};
    if (tag == "aa3def")
      return {aa3_integral(env.vars.at("a"), env.vars.at("b"), ctx), Real(0l)};
    QuadResult q = integrate_01(build_integrand(tag, k, p, env.vars, ctx), ctx);
    if (!q.converged)
      throw std::runtime_error("record " + rec.id +
                               ": quadrature did not converge");
    return {q.value, q.err};
  }
  if (head == "telescope")
    throw std::logic_error("record " + rec.id + " is exact; use run_exact");
  if (head == "expr") {
    std::string rest;
    std::getline(in, rest);
    const CubicParam* p = instance_param(inst, ctx);
    EvalEnv env = make_env(rec, inst, ctx, p, lambda);
    return {eval_expr(parse_expr(rest), env), Real(0l)};
  }
  throw std::runtime_error("record " + rec.id + ": unknown lhs form '" + head +
                           "'");
}

SideValue eval_rhs(const CatalogRecord& rec, const Instance& inst,
                   const PrecisionCtx& ctx, const Real* lambda) {
  PrecGuard guard(ctx.prec_bits());
  ExprPtr e = parse_expr(rec.rhs);
  if (rec.kind == "integral-eq-exact") {
    if (auto v = eval_exact(e)) return {Cplx(exact_embed(*v, ctx)), Real(0l)};
  }
  const CubicParam* p = instance_param(inst, ctx);
  EvalEnv env = make_env(rec, inst, ctx, p, lambda);
  return {eval_expr(e, env), Real(0l)};
}

bool rhs_uses_callog(const CatalogRecord& rec) {
  return expr_uses(parse_expr(rec.rhs), "callog");
}

ExactOutcome run_exact(const CatalogRecord& rec) {
  if (rec.kind != "exact-telescoping")
    return {false, "record " + rec.id + " is not an exact kind"};
  std::istringstream in(rec.lhs);
  std::string head, variant, nopt;
  in >> head >> variant >> nopt;
  if (head != "telescope" || variant.size() != 1 || nopt.rfind("n=", 0) != 0)
    return {false, "record " + rec.id + ": bad telescope lhs"};
  long n = std::stol(nopt.substr(2));
  TelescopingResult tr = telescoping_check(variant[0], n);
  if (tr.ok)
    return {true, "all partial sums collapse exactly through n=" +
                      std::to_string(tr.n_checked)};
  return {false, "first mismatch at n=" + std::to_string(tr.first_bad)};
}

}  // namespace cmzv
