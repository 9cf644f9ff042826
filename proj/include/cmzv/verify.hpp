#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cmzv/catalog.hpp"
#include "cmzv/real.hpp"

namespace cmzv {

// Outcome of checking one record across its whole instance grid.  lhs, rhs,
// and abs_diff describe the worst instance; status is PASS, FAIL, ERROR, or
// CALIBRATION (residual within tolerance but measured against the calibrated
// constant rather than a closed form).
struct VerifyReport {
  std::string id;
  int digits = 0;
  std::string lhs;
  std::string rhs;
  double abs_diff = 0.0;
  double threshold = 0.0;
  std::string status;
  double seconds = 0.0;
  std::string detail;  // worst instance label, exact-check text, or error
};

struct VerifyOptions {
  int digits = 0;                       // 0 picks the tolerance class default
  std::vector<std::string> x_filter;    // keep instances whose x= token matches
  int jobs = 1;
  bool use_cache = true;                // also gated by VERIFIER_CACHE=0
  std::string cache_path;               // empty uses the platform default
  const Real* lambda = nullptr;         // provisional calibrated constant
};

VerifyReport run_record(const CatalogRecord& rec, const VerifyOptions& opts);

// Runs records in input order, across opts.jobs worker threads.
std::vector<VerifyReport> run_records(
    const std::vector<const CatalogRecord*>& recs, const VerifyOptions& opts);

// Solves for the calibrated constant from the calibration-role records.  Each
// record's right side is affine in the constant, so evaluating it at 0 and 1
// pins one solution per record; the primary entry supplies the value and the
// others must agree to spread <= 1e-15.  A solution within 1e-20 of a named
// candidate constant promotes to that tag.
struct CalibrationResult {
  bool ok = false;
  std::string detail;
  Real lambda;
  Real spread;
  std::string candidate;
  std::vector<std::pair<std::string, Real>> solutions;
};

CalibrationResult calibrate_callog(const Catalog& cat,
                                   const VerifyOptions& opts);

// Location of the value cache ($XDG_CACHE_HOME or ~/.cache, plus cmzv/).
std::string default_cache_path();

// Drops the in-memory cache layer (test hook; the file is untouched).
void cache_reset();

}  // namespace cmzv
