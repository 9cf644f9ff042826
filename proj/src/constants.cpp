#include "cmzv/constants.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "cmzv/polylog.hpp"

namespace cmzv {

namespace {

std::mutex g_mu;
std::map<std::pair<std::string, int>, Cplx>& value_cache() {
  static std::map<std::pair<std::string, int>, Cplx> m;
  return m;
}
std::string g_callog;

const std::vector<std::string>& real_tags() {
  static const std::vector<std::string> tags = {
      "pi",     "sqrt2",  "sqrt3",    "log2",   "log3",  "log6",
      "halflog3", "asinh1", "acosh2", "catalan", "lchi8", "callog"};
  return tags;
}

const std::vector<std::string>& complex_tags() {
  static const std::vector<std::string> tags = {"i", "u3", "u6", "u8"};
  return tags;
}

Cplx compute(const std::string& tag, const PrecisionCtx& ctx) {
  if (tag == "pi") return Cplx(const_pi());
  if (tag == "sqrt2") return Cplx(sqrt(Real(2l)));
  if (tag == "sqrt3") return Cplx(sqrt(Real(3l)));
  if (tag == "log2") return Cplx(const_log2());
  if (tag == "log3") return Cplx(log(Real(3l)));
  if (tag == "log6") return Cplx(log(Real(6l)));
  if (tag == "halflog3") return Cplx(log(Real(3l)) / 2);
  if (tag == "asinh1") return Cplx(log1p(sqrt(Real(2l))));
  if (tag == "acosh2") return Cplx(log(2 + sqrt(Real(3l))));
  if (tag == "catalan") return Cplx(const_catalan());
  if (tag == "lchi8") return Cplx(l_chi8(ctx));
  if (tag == "i") return Cplx(Real(0l), Real(1l));
  if (tag == "u3") return unit(2 * const_pi() / 3);
  if (tag == "u6") return unit(const_pi() / 3);
  if (tag == "u8") return unit(const_pi() / 4);
  if (tag == "callog") {
    std::string cand;
    {
      std::lock_guard<std::mutex> lock(g_mu);
      cand = g_callog;
    }
    if (cand.empty())
      throw std::runtime_error(
          "constant callog is not calibrated; run the calibrate command first");
    return compute(cand, ctx);
  }
  throw std::domain_error("unknown constant tag: " + tag);
}

}  // namespace

Cplx constant(const std::string& tag, const PrecisionCtx& ctx) {
  if (!constant_known(tag)) throw std::domain_error("unknown constant tag: " + tag);
  PrecGuard pg(ctx.prec_bits());
  auto key = std::make_pair(tag, ctx.digits);
  if (tag != "callog") {
    std::lock_guard<std::mutex> lock(g_mu);
    auto it = value_cache().find(key);
    if (it != value_cache().end()) return round_here(it->second);
  }
  Cplx v = compute(tag, ctx);
  if (tag != "callog") {
    std::lock_guard<std::mutex> lock(g_mu);
    value_cache().emplace(key, v);
  }
  return v;
}

bool constant_known(const std::string& tag) {
  for (const auto& t : real_tags())
    if (t == tag) return true;
  for (const auto& t : complex_tags())
    if (t == tag) return true;
  return false;
}

std::vector<std::string> constant_tags() {
  std::vector<std::string> all = real_tags();
  all.insert(all.end(), complex_tags().begin(), complex_tags().end());
  return all;
}

std::vector<std::string> calibration_candidates() {
  return {"log3", "acosh2", "halflog3", "log6"};
}

void set_calibrated(const std::string& candidate_tag) {
  for (const auto& c : calibration_candidates())
    if (c == candidate_tag) {
      std::lock_guard<std::mutex> lock(g_mu);
      g_callog = candidate_tag;
      return;
    }
  throw std::domain_error("unknown calibration candidate: " + candidate_tag);
}

bool calibrated_available() {
  std::lock_guard<std::mutex> lock(g_mu);
  return !g_callog.empty();
}

std::string calibrated_tag() {
  std::lock_guard<std::mutex> lock(g_mu);
  return g_callog;
}

}  // namespace cmzv
