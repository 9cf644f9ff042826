#pragma once

#include <cmzv/cubic.hpp>
#include <cmzv/series.hpp>

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cmzv {

// ------------------------------------------------------------ expressions
//
// Closed forms are prefix s-expressions over space-separated tokens:
//   rationals        27, -3/40
//   constants        pi sqrt2 sqrt3 log2 log3 log6 halflog3 asinh1 acosh2
//                    catalan lchi8 callog i u3 u6 u8
//   variables        bound by the record's params or by an enclosing binder
//   operators        (+ a b ...) (- a b) (- a) (* a b ...) (/ a b) (^ a n)
//   functions        (sqrt a) (log a) (re a) (im a) (zeta n) (li r z)
//                    (atanhinv a) = atanh(1/a)
//                    (discw)      = log((x^2-2+i d)/(x^2-2-i d)), d = sqrt(3x^2-4)
//                    (frakL) (frakM) (frakl) (frakm)   dilog combinations at x
//                    (sigma l m)  root sigma_{l,m}(x)
//                    (a3 w) (aa3 a b)  weight-3 auxiliary integrals
//                    (gpl a1 ... an)   G(a1,...,an; 1)
//                    (gplat t a1 ... an)  G(a1,...,an; t), real t in (0,1]
//                    (mpl11 z1 z2) (mpl111 z1 z2 z3)   Li_{1,1}, Li_{1,1,1}
//                    (q t)        t(1-t^2)/(x(1-x^2))
//                    (lemma22 r v)  word expansion of Li_{r+1}, v in
//                                   {sq, plus, minus}, at bound x and t
//   binders          (sumt v body)       v over {-1, 1}
//                    (suma v body)       v over {-1, 0, 1}
//                    (sumw v S body)     v over root set S in {Sx, Sx+, Sx-}
//                    (sumww v v' S body) ordered pairs from S x S
//                    (sumlm body)        l,m over {0,1}^2; binds sgl = (-1)^l,
//                                        sgm = (-1)^m, sig = sigma_{l,m}(x)
//                    (summ l body)       m over {0,1} at fixed l; binds sgm, sig
// A top-level application may omit its outer parentheses.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  std::string head;            // "rat", "name", operator, function, or binder
  Rat lit;                     // head == "rat"
  std::string sym;             // name; binder variable; lemma22 variant
  std::string sym2;            // second binder variable; root-set name
  std::vector<ExprPtr> args;
};

ExprPtr parse_expr(const std::string& src);  // throws std::runtime_error

// Evaluation environment: precision, the optional cubic parameter binding x,
// explicitly bound variables, and an optional calibration override for the
// callog constant.
struct EvalEnv {
  const PrecisionCtx* ctx = nullptr;
  const CubicParam* param = nullptr;
  std::map<std::string, Cplx> vars;
  const Real* lambda = nullptr;
};

Cplx eval_expr(const ExprPtr& e, EvalEnv& env);

// Exact evaluation over the basis {1, log2, log2^2, pi^2}; nullopt when the
// tree leaves that span (any other constant, function, or binder).
std::optional<ExactValue> eval_exact(const ExprPtr& e);

bool expr_uses(const ExprPtr& e, const std::string& name);

// ----------------------------------------------------------------- records
//
// Catalog file: header line "cmzv-catalog v1"; '#' starts a comment; records
// are blocks of "field: value" lines beginning with id:.  Fields: id, kind,
// group, lhs, rhs, tol, role, and optional params and note.
//
// lhs grammar:
//   sum <series-spec>            series.hpp grammar; z=param binds z from x
//   int <tag> [k=<int>]          integrand over (0,1); see catalog.cpp table
//   telescope <A|B> n=<int>      exact finite-sum collapse
//   expr <prefix-expr>           closed form on both sides
//
// params grammar: space-separated name=v1,v2,... lists; instances are the
// cross product.  x samples are sqrt2, 3/2, 2 (binding x^2 = 2, 9/4, 4);
// root lists are roots, plusroots, minusroots; other values are rationals.
struct CatalogRecord {
  std::string id;
  std::string kind;    // series-eq-closedform, integral-eq-exact,
                       // integral-eq-closedform, exact-telescoping,
                       // constant-relation, expansion-check
  std::string group;
  std::string lhs;
  std::string rhs;
  std::string tol;     // T40, T30, T25, T20-calibrated
  std::string role;    // acceptance, calibration, property
  std::string params;
  std::string note;
  int line = 0;
};

struct Catalog {
  std::vector<CatalogRecord> records;
  const CatalogRecord* find(const std::string& id) const;
};

Catalog parse_catalog(std::istream& in, const std::string& name);
Catalog load_catalog(const std::string& path);
void save_catalog(const Catalog& cat, const std::string& path);

// The catalog embedded at build time; parsed once on first use.
const Catalog& builtin_catalog();

int tol_digits(const std::string& tol);    // T40 -> 60, T30 -> 45, T25 -> 40,
                                           // T20-calibrated -> 35
int tol_exponent(const std::string& tol);  // threshold 10^-exponent

// One bound evaluation instance of a record.
struct Instance {
  std::string label;                                        // "x=sqrt2 w=plus0"
  std::optional<Rat> x2;
  std::vector<std::pair<std::string, std::string>> bind;    // var -> value token
};

std::vector<Instance> enumerate_instances(const CatalogRecord& rec);

struct SideValue {
  Cplx value;
  Real err;  // quadrature estimate or series tail bound; 0 for closed forms
};

SideValue eval_lhs(const CatalogRecord& rec, const Instance& inst,
                   const PrecisionCtx& ctx, const Real* lambda = nullptr);
SideValue eval_rhs(const CatalogRecord& rec, const Instance& inst,
                   const PrecisionCtx& ctx, const Real* lambda = nullptr);

bool rhs_uses_callog(const CatalogRecord& rec);

// exact-telescoping records compare big rationals; no tolerance involved.
struct ExactOutcome {
  bool ok = false;
  std::string detail;
};
ExactOutcome run_exact(const CatalogRecord& rec);

}  // namespace cmzv
