// Python face of the library.  Values cross the boundary as decimal strings
// (exact rationals verbatim) so no precision is lost to doubles.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "cmzv/catalog.hpp"
#include "cmzv/constants.hpp"
#include "cmzv/cubic.hpp"
#include "cmzv/exact.hpp"
#include "cmzv/gpl.hpp"
#include "cmzv/polylog.hpp"
#include "cmzv/series.hpp"
#include "cmzv/verify.hpp"

namespace py = pybind11;
using namespace cmzv;

namespace {

std::pair<std::string, std::string> out(const Cplx& v, int digits) {
  return {to_string(v.re, digits), to_string(v.im, digits)};
}

Cplx eval_str(const std::string& src, const PrecisionCtx& ctx,
              const std::string& x2) {
  EvalEnv env;
  env.ctx = &ctx;
  CubicParam p;
  if (!x2.empty()) {
    p = cubic_param(parse_rational(x2), ctx);
    env.param = &p;
    env.vars["x"] = Cplx(p.x);
  }
  return eval_expr(parse_expr(src), env);
}

py::dict report_dict(const VerifyReport& rep) {
  py::dict d;
  d["id"] = rep.id;
  d["status"] = rep.status;
  d["digits"] = rep.digits;
  d["abs_diff"] = rep.abs_diff;
  d["threshold"] = rep.threshold;
  d["seconds"] = rep.seconds;
  d["lhs"] = rep.lhs;
  d["rhs"] = rep.rhs;
  d["detail"] = rep.detail;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cmzv, m) {
  m.attr("__version__") = "1.0.0";
  m.doc() =
      "Certified high-precision evaluation and verification of "
      "binomial-quotient series, polylogarithms, and cubic-root structures";

  // exact arithmetic
  m.def("binomial",
        [](long n, long k) { return binomial(n, k).str(); },
        py::arg("n"), py::arg("k"));
  m.def("harmonic",
        [](long mm, long r) { return harmonic(mm, r).str(); },
        py::arg("m"), py::arg("r") = 1);
  m.def("central_coeff",
        [](long k) { return central_coeff(k).str(); },
        py::arg("k"), "B_k as an exact rational");
  m.def("central_coeff_ratio",
        [](long k) { return central_coeff_ratio(k).str(); },
        py::arg("k"), "one-step ratio B_{k+1}/B_k");
  m.def("check_divisibility",
        [](long k) { return check_divisibility(k).str(); },
        py::arg("k"), "integer quotient witnessing the divisibility at k");
  m.def("telescoping",
        [](const std::string& variant, long n) {
          if (variant.size() != 1 || (variant[0] != 'A' && variant[0] != 'B'))
            throw py::value_error("variant must be 'A' or 'B'");
          TelescopingResult t = telescoping_check(variant[0], n);
          py::dict d;
          d["ok"] = t.ok;
          d["n_checked"] = t.n_checked;
          d["first_bad"] = t.first_bad;
          return d;
        },
        py::arg("variant"), py::arg("n") = 100,
        "exact partial-sum collapse check up to n");

  // constants and classical polylogarithms
  m.def("constant",
        [](const std::string& tag, int digits) {
          PrecisionCtx ctx(digits);
          PrecGuard pg(ctx.prec_bits());
          return out(constant(tag, ctx), digits);
        },
        py::arg("tag"), py::arg("digits") = 40);
  m.def("constant_tags", [] { return constant_tags(); });
  m.def("zeta",
        [](long s, int digits) {
          PrecisionCtx ctx(digits);
          PrecGuard pg(ctx.prec_bits());
          return to_string(zeta_real(s, ctx), digits);
        },
        py::arg("s"), py::arg("digits") = 40);
  m.def("li",
        [](long r, const std::string& z, int digits) {
          PrecisionCtx ctx(digits);
          PrecGuard pg(ctx.prec_bits());
          return out(li(r, eval_str(z, ctx, ""), ctx), digits);
        },
        py::arg("r"), py::arg("z"), py::arg("digits") = 40,
        "Li_r at a prefix-expression argument");

  // weighted central-coefficient series
  m.def("sum_series",
        [](const std::string& spec, int digits) {
          PrecisionCtx ctx(digits);
          PrecGuard pg(ctx.prec_bits());
          SeriesResult r = sum_series(parse_series(spec), ctx);
          py::dict d;
          d["re"] = to_string(r.value.re, digits);
          d["im"] = to_string(r.value.im, digits);
          d["terms"] = r.terms_used;
          d["tail"] = to_string(r.tail_bound, 3);
          return d;
        },
        py::arg("spec"), py::arg("digits") = 40,
        "sums \"k0=1 z=8 weight=(50k-7)/k\" with a certified tail bound");

  // iterated integrals
  m.def("gpl",
        [](const std::vector<std::string>& letters, int digits,
           const std::string& z) {
          PrecisionCtx ctx(digits);
          PrecGuard pg(ctx.prec_bits());
          GplWord w;
          for (const std::string& s : letters)
            w.letters.push_back(eval_str(s, ctx, ""));
          w.z = eval_str(z, ctx, "").re;
          return out(gpl_eval(w, ctx), digits);
        },
        py::arg("letters"), py::arg("digits") = 40, py::arg("z") = "1",
        "G(letters; z) with prefix-expression letters and real argument");
  m.def("mpl",
        [](const std::vector<long>& orders,
           const std::vector<std::string>& args, int digits) {
          PrecisionCtx ctx(digits);
          PrecGuard pg(ctx.prec_bits());
          MplQuery q;
          q.orders = orders;
          for (const std::string& s : args)
            q.args.push_back(eval_str(s, ctx, ""));
          return out(mpl_eval(q, ctx), digits);
        },
        py::arg("orders"), py::arg("args"), py::arg("digits") = 40,
        "nested polylogarithm Li_{orders}(args) via its word form");

  // cubic-root structures
  m.def("cubic",
        [](const std::string& x2, int digits) {
          PrecisionCtx ctx(digits);
          PrecGuard pg(ctx.prec_bits());
          CubicParam p = cubic_param(parse_rational(x2), ctx);
          RootSet roots = root_set(p);
          py::dict d;
          d["z"] = p.z.str();
          d["x"] = to_string(p.x, digits);
          py::list plus, minus;
          for (const Cplx& w : roots.plus) plus.append(out(w, digits));
          for (const Cplx& w : roots.minus) minus.append(out(w, digits));
          d["roots_plus"] = plus;
          d["roots_minus"] = minus;
          return d;
        },
        py::arg("x2"), py::arg("digits") = 40,
        "series argument and signed root halves for exact x^2 > 4/3");
  m.def("special",
        [](const std::string& which, const std::string& x2, int digits) {
          PrecisionCtx ctx(digits);
          PrecGuard pg(ctx.prec_bits());
          SpecialFn f;
          if (which == "frakL") f = SpecialFn::frakL;
          else if (which == "frakM") f = SpecialFn::frakM;
          else if (which == "frakl") f = SpecialFn::frakl;
          else if (which == "frakm") f = SpecialFn::frakm;
          else throw py::value_error("which must be frakL, frakM, frakl, frakm");
          CubicParam p = cubic_param(parse_rational(x2), ctx);
          return out(special_fn(f, p, ctx), digits);
        },
        py::arg("which"), py::arg("x2"), py::arg("digits") = 40,
        "dilogarithmic combination over the cubic roots");

  // closed-form expressions
  m.def("eval_expr",
        [](const std::string& src, int digits, const std::string& x2) {
          PrecisionCtx ctx(digits);
          PrecGuard pg(ctx.prec_bits());
          return out(eval_str(src, ctx, x2), digits);
        },
        py::arg("src"), py::arg("digits") = 40, py::arg("x2") = "",
        "prefix expression, optionally bound to a cubic parameter");

  // identity catalog
  m.def("records",
        [](const std::string& group, const std::string& role) {
          py::list outl;
          for (const CatalogRecord& r : builtin_catalog().records) {
            if (!group.empty() && r.group != group) continue;
            if (!role.empty() && r.role != role) continue;
            py::dict d;
            d["id"] = r.id;
            d["kind"] = r.kind;
            d["group"] = r.group;
            d["tol"] = r.tol;
            d["role"] = r.role;
            outl.append(d);
          }
          return outl;
        },
        py::arg("group") = "", py::arg("role") = "");
  m.def("verify",
        [](const std::string& id, int digits, bool cache) {
          const CatalogRecord* rec = builtin_catalog().find(id);
          if (!rec) throw py::value_error("unknown record id: " + id);
          VerifyOptions opts;
          opts.digits = digits;
          opts.jobs = 1;
          opts.use_cache = cache;
          return report_dict(run_record(*rec, opts));
        },
        py::arg("id"), py::arg("digits") = 0, py::arg("cache") = true,
        "checks one record; digits 0 uses its tolerance-class default");
  m.def("calibrate",
        [] {
          VerifyOptions opts;
          opts.jobs = 1;
          CalibrationResult res = calibrate_callog(builtin_catalog(), opts);
          py::dict d;
          d["ok"] = res.ok;
          d["candidate"] = res.candidate;
          d["spread"] = to_string(res.spread, 3);
          d["value"] = to_string(res.lambda, 30);
          d["detail"] = res.detail;
          return d;
        },
        "solves the boundary family for its one free constant");
  m.def("set_calibrated", &set_calibrated, py::arg("candidate"));
  m.def("calibrated_tag",
        [] { return calibrated_available() ? calibrated_tag() : std::string(); });
}
