#include <doctest.h>

#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cmzv/catalog.hpp"
#include "cmzv/constants.hpp"
#include "cmzv/exact.hpp"
#include "cmzv/series.hpp"

using namespace cmzv;

namespace {

Real adiff(const Cplx& a, const Cplx& b) { return abs(a - b); }

// Splits "int <tag> k=<k>" into its pieces.
std::pair<std::string, long> int_lhs(const std::string& lhs) {
  std::istringstream in(lhs);
  std::string head, tag, kopt;
  in >> head >> tag >> kopt;
  REQUIRE(head == "int");
  REQUIRE(kopt.rfind("k=", 0) == 0);
  return {tag, std::stol(kopt.substr(2))};
}

// Independent route to the exact kernel-moment values: the same harmonic
// combinations the integral reduction produces, assembled from the exact
// combinatorics layer rather than from the file generator.
ExactValue kernel_oracle(const std::string& tag, long k) {
  Rat b = central_coeff(k);
  auto h = [](long m) { return harmonic(m); };
  auto h2 = [](long m) { return harmonic(m, 2); };
  ExactValue v;
  if (tag == "ker-1") {
    v.c1 = b / (4 * k);
  } else if (tag == "ker-logt") {
    v.c1 = (-h(k) + 2 * h(2 * k) + h(3 * k) - 2 * h(6 * k)) * b / (8 * k);
  } else if (tag == "ker-loga") {
    v.c1 = (h(2 * k - 1) + h(3 * k) - 2 * h(6 * k)) * b / (4 * k);
    v.clog = b / (2 * k);
  } else if (tag == "ker-logsq") {
    Rat a = h(k - 1) - h(2 * k - 1);
    v.c1 = (a * a + h2(k - 1) - 5 * h2(2 * k - 1)) * b / (4 * k);
    v.clog = a * b / k;
    v.clog2 = b / k;
    v.cpi2 = b / (6 * k);
  } else if (tag == "tt-1") {
    v.c1 = b / (2 * k - 1);
  } else if (tag == "tt-logt") {
    v.c1 = (-h(k) + 2 * h(2 * k) + h(3 * k) - 2 * h(6 * k) -
            Rat(2, 2 * k - 1)) *
           b / (2 * (2 * k - 1));
  } else if (tag == "tt-loga") {
    v.c1 = (h(2 * k) + h(3 * k) - 2 * h(6 * k)) * b / (2 * k - 1);
    v.clog = 2 * b / (2 * k - 1);
  } else if (tag == "tt-logsq") {
    Rat a = h(k) - h(2 * k) + Rat(2, 2 * k - 1);
    v.c1 = (a * a + h2(k) - 5 * h2(2 * k) + Rat(4, (2 * k - 1) * (2 * k - 1))) *
           b / (2 * k - 1);
    v.clog = 4 * a * b / (2 * k - 1);
    v.clog2 = 4 * b / (2 * k - 1);
    v.cpi2 = Rat(2, 3) * b / (2 * k - 1);
  } else if (tag == "flat-1") {
    v.c1 = b / (6 * k + 1);
  } else if (tag == "flat-logt") {
    v.c1 = (-h(k) + 2 * h(2 * k) + h(3 * k) - 2 * h(6 * k + 1)) * b /
           (2 * (6 * k + 1));
  } else if (tag == "flat-loga") {
    v.c1 = (h(2 * k) + h(3 * k) - 2 * h(6 * k + 1)) * b / (6 * k + 1);
    v.clog = 2 * b / (6 * k + 1);
  } else if (tag == "six-1") {
    Rat p = Rat(1, 6 * k + 1) + Rat(1, 6 * k + 5);
    v.c1 = p * b;
  } else if (tag == "six-logt") {
    Rat p = Rat(1, 6 * k + 1) + Rat(1, 6 * k + 5);
    v.c1 =
        p * (-h(k) + 2 * h(2 * k + 1) + h(3 * k + 3) - 2 * h(6 * k + 6)) * b;
  } else if (tag == "six-loga") {
    Rat p = Rat(1, 6 * k + 1) + Rat(1, 6 * k + 5);
    v.c1 = p * (h(2 * k + 1) + h(3 * k + 3) - 2 * h(6 * k + 6)) * b;
    v.clog = 2 * p * b;
  } else {
    FAIL("unexpected kernel tag ", tag);
  }
  return v;
}

}  // namespace

TEST_CASE("builtin catalog population and field sanity") {
  const Catalog& cat = builtin_catalog();
  CHECK(cat.records.size() == 231);

  std::map<std::string, int> by_group, by_kind;
  for (const auto& r : cat.records) {
    ++by_group[r.group];
    ++by_kind[r.kind];
    CHECK_MESSAGE((tol_digits(r.tol) == 60 || tol_digits(r.tol) == 45 ||
                   tol_digits(r.tol) == 40 || tol_digits(r.tol) == 35),
                  r.id);
    CHECK(tol_exponent(r.tol) >= 20);
    // every closed form parses
    CHECK_NOTHROW(parse_expr(r.rhs));
    if (r.lhs.rfind("sum ", 0) == 0)
      CHECK_NOTHROW(parse_series(r.lhs.substr(4)));
    else if (r.lhs.rfind("expr ", 0) == 0)
      CHECK_NOTHROW(parse_expr(r.lhs.substr(5)));
    else
      CHECK((r.lhs.rfind("int ", 0) == 0 || r.lhs.rfind("telescope ", 0) == 0));
    CHECK(enumerate_instances(r).size() >= 1);
  }

  const std::map<std::string, int> groups = {
      {"headline", 11},        {"telescoping", 2},   {"constants", 1},
      {"kernel-lemma", 113},   {"kernel-six", 18},   {"level8-grid", 13},
      {"level12-boundary", 5}, {"cubic-dilog", 13},  {"cubic-gpl", 14},
      {"level8-depth3", 5},    {"level8-odd", 4},    {"dilog-eval", 6},
      {"kernel-helpers", 9},   {"gpl-aux", 10},      {"word-expansion", 7}};
  CHECK(by_group == groups);

  const std::map<std::string, int> kinds = {{"series-eq-closedform", 65},
                                            {"integral-eq-exact", 131},
                                            {"integral-eq-closedform", 19},
                                            {"exact-telescoping", 2},
                                            {"constant-relation", 7},
                                            {"expansion-check", 7}};
  CHECK(by_kind == kinds);

  for (const char* id :
       {"eq1.4", "eq1.14", "lemma2.1-k10-h", "lemma2.1-k0-i", "six.c-k5",
        "table1.S60", "table1.Sm3Ha", "table2.1", "table2.5", "table3.A1",
        "table3.D4", "table4.A7", "table4.B7", "table5.5", "t60spec4", "z2f",
        "h9", "sec33.shufflesq", "a3.dual", "const.lchi8", "telescoping.B"})
    CHECK_MESSAGE(cat.find(id) != nullptr, id);
  CHECK(cat.find("eq0.0") == nullptr);

  // calibration entries are exactly the boundary closed forms that carry the
  // pinned constant
  for (const auto& r : cat.records) {
    if (r.role == "calibration") CHECK(r.group == "level12-boundary");
    if (r.group == "level12-boundary")
      CHECK(rhs_uses_callog(r) == (r.id != "table2.1"));
    else
      CHECK(!rhs_uses_callog(r));
  }
}

TEST_CASE("catalog round-trips through save and load") {
  const Catalog& cat = builtin_catalog();
  auto path =
      (std::filesystem::temp_directory_path() / "cmzv_roundtrip.cmzv").string();
  save_catalog(cat, path);
  Catalog back = load_catalog(path);
  std::filesystem::remove(path);

  REQUIRE(back.records.size() == cat.records.size());
  for (size_t n = 0; n < cat.records.size(); ++n) {
    const auto& a = cat.records[n];
    const auto& b = back.records[n];
    CHECK(a.id == b.id);
    CHECK(a.kind == b.kind);
    CHECK(a.group == b.group);
    CHECK(a.lhs == b.lhs);
    CHECK(a.rhs == b.rhs);
    CHECK(a.tol == b.tol);
    CHECK(a.role == b.role);
    CHECK(a.params == b.params);
    CHECK(a.note == b.note);
  }
}

TEST_CASE("parser reports position and rejects malformed files") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_catalog(in, "test");
  };
  auto fails_with = [&](const std::string& text, const std::string& needle) {
    try {
      parse(text);
      FAIL("expected parse error containing '", needle, "'");
    } catch (const std::runtime_error& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                    e.what());
    }
  };

  CHECK(parse("").records.empty());
  CHECK(parse("# only a comment\n\n").records.empty());
  CHECK(parse("cmzv-catalog v1\n").records.empty());

  fails_with("bogus\n", "test:1:1: expected header");
  fails_with("cmzv-catalog v1\nkind: x\n", "before any id");
  fails_with("cmzv-catalog v1\nnot a field line\n", "expected 'field: value'");

  const std::string rec =
      "cmzv-catalog v1\n\nid: a\nkind: constant-relation\ngroup: g\n"
      "lhs: expr 1\nrhs: 1\ntol: T40\nrole: property\n";
  CHECK(parse(rec).records.size() == 1);
  fails_with(
      "cmzv-catalog v1\n\nid: a\nkind: constant-relation\ngroup: g\n"
      "lhs: expr 1\nrhs: 1\nrole: property\n",
      "test:3:1: record a is missing a required field");
  fails_with(rec + "note: x\nnote: y\n", "repeated field: note");
  fails_with(rec + "shape: round\n", "unknown field: shape");
  fails_with(rec + "note:\n", "empty note");
  fails_with(rec + rec.substr(16), "duplicate id: a");

  std::string bad_kind = rec;
  bad_kind.replace(bad_kind.find("constant-relation"), 17, "seriesish");
  fails_with(bad_kind, "unknown kind: seriesish");
  std::string bad_tol = rec;
  bad_tol.replace(bad_tol.find("T40"), 3, "T99");
  fails_with(bad_tol, "unknown tolerance class: T99");

  CHECK_THROWS_AS(load_catalog("/nonexistent/catalog.cmzv"),
                  std::runtime_error);
  CHECK_THROWS_AS(tol_digits("T99"), std::runtime_error);
  CHECK(tol_digits("T40") == 60);
  CHECK(tol_digits("T30") == 45);
  CHECK(tol_digits("T25") == 40);
  CHECK(tol_digits("T20-calibrated") == 35);
  CHECK(tol_exponent("T40") == 40);
  CHECK(tol_exponent("T20-calibrated") == 20);
}

TEST_CASE("instance grids expand the parameter cross product") {
  const Catalog& cat = builtin_catalog();

  auto insts = enumerate_instances(*cat.find("table3.A1"));
  REQUIRE(insts.size() == 3);
  CHECK(insts[0].label == "x=sqrt2");
  CHECK(insts[1].label == "x=3/2");
  CHECK(insts[2].label == "x=2");
  REQUIRE(insts[0].x2.has_value());
  CHECK(*insts[0].x2 == Rat(2));
  CHECK(*insts[1].x2 == Rat(9, 4));
  CHECK(*insts[2].x2 == Rat(4));

  CHECK(enumerate_instances(*cat.find("eq1.4")).size() == 1);
  CHECK(enumerate_instances(*cat.find("eq1.4"))[0].label.empty());
  CHECK(enumerate_instances(*cat.find("h7")).size() == 18);    // 3 x, 6 roots
  CHECK(enumerate_instances(*cat.find("sec33.bivar")).size() == 9);
  CHECK(enumerate_instances(*cat.find("aa3.dual")).size() == 12);
  CHECK(enumerate_instances(*cat.find("sec33.shufflesq")).size() == 4);

  auto h7 = enumerate_instances(*cat.find("h7"));
  CHECK(h7[0].label == "x=sqrt2 w=plus0");
  REQUIRE(h7[0].bind.size() == 1);
  CHECK(h7[0].bind[0].first == "w");
  CHECK(h7[0].bind[0].second == "plus0");
}

TEST_CASE("exact kernel moments match the combinatorial oracle") {
  const Catalog& cat = builtin_catalog();
  int seen = 0;
  for (const auto& r : cat.records) {
    if (r.group != "kernel-lemma" && r.group != "kernel-six") continue;
    auto [tag, k] = int_lhs(r.lhs);
    ExactValue want = kernel_oracle(tag, k);
    auto got = eval_exact(parse_expr(r.rhs));
    REQUIRE_MESSAGE(got.has_value(), r.id);
    CHECK_MESSAGE(got->c1 == want.c1, r.id);
    CHECK_MESSAGE(got->clog == want.clog, r.id);
    CHECK_MESSAGE(got->clog2 == want.clog2, r.id);
    CHECK_MESSAGE(got->cpi2 == want.cpi2, r.id);
    ++seen;
  }
  CHECK(seen == 131);

  // the first moment is a plain rational
  auto v = eval_exact(parse_expr(cat.find("lemma2.1-k1-a")->rhs));
  REQUIRE(v.has_value());
  CHECK(v->c1 == Rat(1, 120));
  CHECK(v->clog == 0);
  CHECK(v->clog2 == 0);
  CHECK(v->cpi2 == 0);

  // spans outside the basis are declined, not mangled
  CHECK(!eval_exact(parse_expr("(^ log2 3)")).has_value());
  CHECK(!eval_exact(parse_expr("(* log2 (^ pi 2))")).has_value());
  CHECK(!eval_exact(parse_expr("catalan")).has_value());
  CHECK(eval_exact(parse_expr("(/ (+ 1 (* 2 log2)) 3)")).has_value());
}

TEST_CASE("closed-form spot values agree across routes") {
  PrecisionCtx ctx{45};
  Instance none;
  const Catalog& cat = builtin_catalog();

  // the depth-graded value at offset 0 equals the cubic-parameter closed form
  // specialized to the square-root sample
  SideValue grid = eval_rhs(*cat.find("table1.S60"), none, ctx);
  const CatalogRecord& a4 = *cat.find("table3.A4");
  SideValue cubic = eval_rhs(a4, enumerate_instances(a4)[0], ctx);
  CHECK(adiff(grid.value, cubic.value) < pow10(-40));

  // both purely imaginary dilog combinations
  for (const char* id : {"z2d", "z2f"}) {
    const CatalogRecord& r = *cat.find(id);
    Instance inst = enumerate_instances(r)[0];
    CHECK_MESSAGE(adiff(eval_lhs(r, inst, ctx).value,
                        eval_rhs(r, inst, ctx).value) < pow10(-40),
                  id);
  }

  // character-sum constant against its dilogarithm expression
  {
    PrecisionCtx wide{60};
    const CatalogRecord& r = *cat.find("const.lchi8");
    CHECK(adiff(eval_lhs(r, none, wide).value, eval_rhs(r, none, wide).value) <
          pow10(-40));
  }

  // exact partial-sum collapses
  CHECK(run_exact(*cat.find("telescoping.A")).ok);
  CHECK(run_exact(*cat.find("telescoping.B")).ok);
  CHECK(!run_exact(*cat.find("eq1.4")).ok);
  CHECK_THROWS_AS(eval_lhs(*cat.find("telescoping.A"), none, ctx),
                  std::logic_error);
}

TEST_CASE("series and quadrature sides evaluate through the catalog") {
  PrecisionCtx ctx{30};
  Instance none;
  const Catalog& cat = builtin_catalog();

  // simplest headline entry, offset zero start
  {
    const CatalogRecord& r = *cat.find("eq1.4");
    SideValue lhs = eval_lhs(r, none, ctx);
    SideValue rhs = eval_rhs(r, none, ctx);
    CHECK(adiff(lhs.value, rhs.value) < pow10(-25));
    CHECK(lhs.err < pow10(-25));
  }
  // heaviest headline weight string
  {
    const CatalogRecord& r = *cat.find("eq1.12");
    CHECK(adiff(eval_lhs(r, none, ctx).value, eval_rhs(r, none, ctx).value) <
          pow10(-25));
  }
  // one kernel quadrature against its exact value
  {
    const CatalogRecord& r = *cat.find("lemma2.1-k1-a");
    SideValue lhs = eval_lhs(r, none, ctx);
    CHECK(adiff(lhs.value, Cplx(Real(Rat(1, 120)))) < pow10(-28));
    SideValue rhs = eval_rhs(r, none, ctx);
    CHECK(adiff(lhs.value, rhs.value) < pow10(-28));
  }
  // paired-divisor moment at k=0 is 6/5
  {
    const CatalogRecord& r = *cat.find("six.a-k0");
    CHECK(adiff(eval_lhs(r, none, ctx).value, Cplx(Real(Rat(6, 5)))) <
          pow10(-28));
  }
  // helper integral with a complex root binding
  {
    const CatalogRecord& r = *cat.find("h7");
    auto insts = enumerate_instances(r);
    REQUIRE(insts.size() == 18);
    CHECK(adiff(eval_lhs(r, insts[1], ctx).value,
                eval_rhs(r, insts[1], ctx).value) < pow10(-26));
  }
}

TEST_CASE("negative controls: corruption and unbound inputs surface") {
  PrecisionCtx ctx{20};
  Instance none;
  const Catalog& cat = builtin_catalog();

  CatalogRecord tampered = *cat.find("eq1.4");
  tampered.rhs = "(+ (* 15 sqrt2 pi) 28)";  // off by one
  CHECK(adiff(eval_lhs(tampered, none, ctx).value,
              eval_rhs(tampered, none, ctx).value) > Real(Rat(1, 2)));

  // calibrated constant must be supplied explicitly
  const CatalogRecord& cal = *cat.find("table2.2");
  CHECK(rhs_uses_callog(cal));
  try {
    eval_rhs(cal, none, ctx);
    FAIL("expected uncalibrated callog to throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("not calibrated") != std::string::npos);
  }
  Real lam = const_log2() + const_log2();  // placeholder binding
  CHECK_NOTHROW(eval_rhs(cal, none, ctx, &lam));

  // cubic closed form without its x sample
  CHECK_THROWS_AS(eval_rhs(*cat.find("table3.A1"), none, ctx),
                  std::runtime_error);

  // malformed expressions
  CHECK_THROWS_AS(parse_expr("(+ 1"), std::runtime_error);
  CHECK_THROWS_AS(parse_expr("(+ 1 2) junk"), std::runtime_error);
  CHECK_THROWS_AS(parse_expr(""), std::runtime_error);
  EvalEnv env;
  env.ctx = &ctx;
  ExprPtr bad = parse_expr("(frobnicate 1)");
  CHECK_THROWS_AS(eval_expr(bad, env), std::runtime_error);
}
