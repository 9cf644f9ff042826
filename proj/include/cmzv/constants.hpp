#pragma once

#include <string>
#include <vector>

#include "cmzv/cplx.hpp"
#include "cmzv/ctx.hpp"

namespace cmzv {

// Named constants usable as expression leaves.  Values are memoized per
// (tag, digits).  Real tags: pi, sqrt2, sqrt3, log2, log3, log6, halflog3,
// asinh1 = log(1+sqrt2), acosh2 = log(2+sqrt3), catalan, lchi8, callog.
// Complex tags: i, and uN = exp(2*pi*i/N) for N in {3, 6, 8}.
// "callog" is the calibrated logarithmic constant of the radius-boundary
// series family; it must be resolved by set_calibrated before use.
Cplx constant(const std::string& tag, const PrecisionCtx& ctx);

bool constant_known(const std::string& tag);
std::vector<std::string> constant_tags();

// Candidate tags the calibration sweeps for "callog".
std::vector<std::string> calibration_candidates();

// Pin "callog" to one of the candidate tags (throws on unknown candidate).
void set_calibrated(const std::string& candidate_tag);
bool calibrated_available();
std::string calibrated_tag();

}  // namespace cmzv
