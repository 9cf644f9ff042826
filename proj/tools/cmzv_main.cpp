#include <algorithm>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmzv/catalog.hpp"
#include "cmzv/constants.hpp"
#include "cmzv/cubic.hpp"
#include "cmzv/gpl.hpp"
#include "cmzv/polylog.hpp"
#include "cmzv/series.hpp"
#include "cmzv/verify.hpp"

namespace {

using cmzv::Catalog;
using cmzv::CatalogRecord;
using cmzv::Cplx;
using cmzv::PrecisionCtx;
using cmzv::Rat;
using cmzv::Real;

struct CommonOpts {
  std::string catalog_path;
  std::string cache_path;
  bool no_cache = false;
  int digits = 0;
};

const Catalog* open_catalog(const CommonOpts& c, Catalog& storage) {
  if (c.catalog_path.empty()) return &cmzv::builtin_catalog();
  storage = cmzv::load_catalog(c.catalog_path);
  return &storage;
}

cmzv::VerifyOptions make_vopts(const CommonOpts& c) {
  cmzv::VerifyOptions v;
  v.digits = c.digits;
  v.use_cache = !c.no_cache;
  v.cache_path = c.cache_path;
  return v;
}

// Maps an x sample token to the exact square it denotes.
Rat x_square(const std::string& tok) {
  if (tok == "sqrt2") return Rat(2);
  Rat r = cmzv::parse_rational(tok);
  return r * r;
}

void print_value(const Cplx& v, int digits) {
  std::cout << "re " << to_string(v.re, digits) << '\n'
            << "im " << to_string(v.im, digits) << '\n';
}

Cplx eval_arg(const std::string& src, const PrecisionCtx& ctx) {
  cmzv::EvalEnv env;
  env.ctx = &ctx;
  return cmzv::eval_expr(cmzv::parse_expr(src), env);
}

int report_exit(const std::vector<cmzv::VerifyReport>& reps) {
  bool fail = false;
  for (const auto& r : reps) {
    if (r.status == "ERROR") return 2;
    if (r.status == "FAIL") fail = true;
  }
  return fail ? 1 : 0;
}

void print_report_line(const cmzv::VerifyReport& r) {
  std::ostringstream diff;
  diff << std::scientific << std::setprecision(1) << r.abs_diff;
  std::ostringstream thr;
  thr << std::scientific << std::setprecision(0) << r.threshold;
  std::cout << std::left << std::setw(12) << r.status << std::setw(22) << r.id
            << "digits=" << std::setw(5) << r.digits
            << "|lhs-rhs|=" << std::setw(10) << diff.str()
            << "thr=" << std::setw(8) << thr.str() << std::fixed
            << std::setprecision(2) << r.seconds << "s\n";
  if (r.status == "FAIL" || r.status == "ERROR")
    std::cout << "            ^ " << r.detail << '\n';
}

nlohmann::json report_json(const cmzv::VerifyReport& r) {
  return nlohmann::json{{"id", r.id},
                        {"digits", r.digits},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"abs_diff", r.abs_diff},
                        {"threshold", r.threshold},
                        {"status", r.status},
                        {"seconds", r.seconds}};
}

int cmd_verify(const CommonOpts& common, const std::vector<std::string>& ids,
               const std::string& tag, bool all,
               const std::vector<std::string>& xs, int jobs, bool json) {
  Catalog storage;
  const Catalog* cat = open_catalog(common, storage);

  std::vector<const CatalogRecord*> sel;
  std::set<std::string> seen;
  auto take = [&](const CatalogRecord& rec) {
    if (seen.insert(rec.id).second) sel.push_back(&rec);
  };
  if (all) {
    for (const auto& rec : cat->records) take(rec);
  } else {
    for (const auto& id : ids) {
      const CatalogRecord* rec = cat->find(id);
      if (!rec) {
        std::cerr << "unknown id: " << id << '\n';
        return 2;
      }
      take(*rec);
    }
    if (!tag.empty()) {
      size_t before = sel.size();
      for (const auto& rec : cat->records)
        if (rec.id.rfind(tag, 0) == 0) take(rec);
      if (sel.size() == before) {
        std::cerr << "no records match tag: " << tag << '\n';
        return 2;
      }
    }
  }
  if (sel.empty()) {
    std::cerr << "nothing selected; use --id, --tag, or --all\n";
    return 2;
  }

  cmzv::VerifyOptions vopts = make_vopts(common);
  vopts.x_filter = xs;
  vopts.jobs = jobs;

  bool needs_cal = false;
  for (const auto* rec : sel)
    if (cmzv::rhs_uses_callog(*rec)) needs_cal = true;
  Real lambda_store;
  if (needs_cal && !cmzv::calibrated_available()) {
    cmzv::CalibrationResult cal = cmzv::calibrate_callog(*cat, vopts);
    if (cal.ok) {
      if (!cal.candidate.empty()) {
        cmzv::set_calibrated(cal.candidate);
        if (!json)
          std::cerr << "calibration: constant pinned to " << cal.candidate
                    << '\n';
      } else {
        lambda_store = cal.lambda;
        vopts.lambda = &lambda_store;
        if (!json)
          std::cerr << "calibration: numeric value pinned, " << cal.detail
                    << '\n';
      }
    } else {
      std::cerr << "calibration failed: " << cal.detail << '\n';
    }
  }

  std::vector<cmzv::VerifyReport> reps = cmzv::run_records(sel, vopts);
  if (json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reps) arr.push_back(report_json(r));
    std::cout << arr.dump(2) << '\n';
  } else {
    int pass = 0, calib = 0, fail = 0, error = 0;
    double total = 0;
    for (const auto& r : reps) {
      print_report_line(r);
      total += r.seconds;
      if (r.status == "PASS") ++pass;
      if (r.status == "CALIBRATION") ++calib;
      if (r.status == "FAIL") ++fail;
      if (r.status == "ERROR") ++error;
    }
    std::cout << reps.size() << " records: " << pass << " pass, " << calib
              << " calibration, " << fail << " fail, " << error << " error ("
              << std::fixed << std::setprecision(1) << total << "s)\n";
  }
  return report_exit(reps);
}

int cmd_list(const CommonOpts& common, const std::string& tag) {
  Catalog storage;
  const Catalog* cat = open_catalog(common, storage);
  size_t n = 0;
  for (const auto& rec : cat->records) {
    if (!tag.empty() && rec.id.rfind(tag, 0) != 0) continue;
    ++n;
    std::cout << std::left << std::setw(24) << rec.id << std::setw(26)
              << rec.kind << std::setw(16) << rec.tol << std::setw(13)
              << rec.role << rec.group << '\n';
  }
  std::cout << n << " records\n";
  return 0;
}

int cmd_calibrate(const CommonOpts& common, bool json) {
  Catalog storage;
  const Catalog* cat = open_catalog(common, storage);
  cmzv::VerifyOptions vopts = make_vopts(common);
  cmzv::CalibrationResult cal = cmzv::calibrate_callog(*cat, vopts);
  int show = common.digits > 0 ? common.digits : 35;
  if (json) {
    nlohmann::json obj{{"ok", cal.ok}, {"detail", cal.detail}};
    obj["candidate"] = cal.candidate;
    if (cal.ok) {
      obj["lambda"] = to_string(cal.lambda, show);
      obj["spread"] = to_double(cal.spread);
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [id, lam] : cal.solutions)
      arr.push_back({{"id", id}, {"value", to_string(lam, show)}});
    obj["solutions"] = arr;
    std::cout << obj.dump(2) << '\n';
  } else {
    for (const auto& [id, lam] : cal.solutions)
      std::cout << std::left << std::setw(12) << id << to_string(lam, show)
                << '\n';
    if (!cal.ok) {
      std::cout << "calibration failed: " << cal.detail << '\n';
    } else {
      std::ostringstream sp;
      sp << std::scientific << std::setprecision(1) << to_double(cal.spread);
      std::cout << "spread    " << sp.str() << '\n'
                << "candidate " << (cal.candidate.empty() ? "none" : cal.candidate)
                << " (" << cal.detail << ")\n";
    }
  }
  return cal.ok ? 0 : 1;
}

int cmd_eval(const CommonOpts& common, const std::string& what,
             const std::vector<std::string>& args, const std::string& x_tok,
             const std::string& at, const std::string& orders) {
  int digits = common.digits > 0 ? common.digits : 30;
  PrecisionCtx ctx(digits);

  if (what == "series") {
    std::string src;
    for (const auto& a : args) {
      if (!src.empty()) src += ' ';
      src += a;
    }
    cmzv::SeriesSpec spec = cmzv::parse_series(src);
    if (spec.z_param) {
      if (x_tok.empty()) {
        std::cerr << "series argument is parametric; pass --x\n";
        return 2;
      }
      cmzv::CubicParam p = cmzv::cubic_param(x_square(x_tok), ctx);
      spec.z = p.z;
      spec.z_param = false;
    }
    cmzv::SeriesResult res = cmzv::sum_series(spec, ctx);
    print_value(res.value, digits);
    std::cout << "tail <= " << to_string(res.tail_bound, 3) << '\n'
              << "terms " << res.terms_used << '\n';
    return 0;
  }
  if (what == "gpl") {
    if (args.empty()) {
      std::cerr << "gpl needs at least one letter\n";
      return 2;
    }
    cmzv::GplWord word;
    for (const auto& a : args) word.letters.push_back(eval_arg(a, ctx));
    word.z = Real(cmzv::parse_rational(at));
    print_value(cmzv::gpl_eval(word, ctx), digits);
    return 0;
  }
  if (what == "mpl") {
    if (orders.empty() || args.empty()) {
      std::cerr << "mpl needs --orders and one argument per order\n";
      return 2;
    }
    cmzv::MplQuery q;
    std::istringstream in(orders);
    std::string piece;
    while (std::getline(in, piece, ',')) q.orders.push_back(std::stol(piece));
    for (const auto& a : args) q.args.push_back(eval_arg(a, ctx));
    if (q.orders.size() != q.args.size()) {
      std::cerr << "mpl needs one argument per order\n";
      return 2;
    }
    print_value(cmzv::mpl_eval(q, ctx), digits);
    return 0;
  }
  if (what == "li") {
    if (args.size() != 2) {
      std::cerr << "li needs an order and an argument\n";
      return 2;
    }
    print_value(cmzv::li(std::stol(args[0]), eval_arg(args[1], ctx), ctx),
                digits);
    return 0;
  }
  if (what == "const") {
    if (args.size() != 1) {
      std::cerr << "const needs a tag; known: ";
      for (const auto& t : cmzv::constant_tags()) std::cerr << t << ' ';
      std::cerr << '\n';
      return 2;
    }
    print_value(cmzv::constant(args[0], ctx), digits);
    return 0;
  }
  std::cerr << "unknown eval kind: " << what
            << " (use series, gpl, mpl, li, or const)\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"checks weighted central-binomial series against closed forms"};
  app.require_subcommand(1);
  CommonOpts common;

  auto add_common = [&](CLI::App* sub, bool with_cache) {
    sub->add_option("--catalog", common.catalog_path,
                    "catalog file (default: built-in)");
    sub->add_option("--digits", common.digits, "working decimal digits");
    if (with_cache) {
      sub->add_flag("--no-cache", common.no_cache, "skip the value cache");
      sub->add_option("--cache-path", common.cache_path, "value cache file");
    }
  };

  auto* verify = app.add_subcommand("verify", "check records");
  std::vector<std::string> ids, xs;
  std::string tag;
  bool all = false, json = false;
  int jobs = 1;
  verify->add_option("--id", ids, "record id (repeatable)");
  verify->add_option("--tag", tag, "id prefix");
  verify->add_flag("--all", all, "every record");
  verify->add_option("--x", xs, "restrict parametric records to this x");
  verify->add_option("--jobs", jobs, "worker threads");
  verify->add_flag("--json", json, "JSON report on stdout");
  add_common(verify, true);

  auto* list = app.add_subcommand("list", "list records");
  std::string list_tag;
  list->add_option("--tag", list_tag, "id prefix");
  add_common(list, false);

  auto* calibrate = app.add_subcommand("calibrate", "solve the pinned constant");
  bool cal_json = false;
  calibrate->add_flag("--json", cal_json, "JSON result on stdout");
  add_common(calibrate, true);

  auto* eval = app.add_subcommand("eval", "evaluate one object");
  std::string what, x_tok, at = "1", orders;
  std::vector<std::string> eval_args;
  eval->add_option("what", what, "series|gpl|mpl|li|const")->required();
  eval->add_option("args", eval_args, "object source");
  eval->add_option("--x", x_tok, "x sample for parametric series");
  eval->add_option("--at", at, "GPL upper limit (rational)");
  eval->add_option("--orders", orders, "MPL orders, comma separated");
  add_common(eval, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed())
      return cmd_verify(common, ids, tag, all, xs, jobs, json);
    if (list->parsed()) return cmd_list(common, list_tag);
    if (calibrate->parsed()) return cmd_calibrate(common, cal_json);
    if (eval->parsed())
      return cmd_eval(common, what, eval_args, x_tok, at, orders);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
