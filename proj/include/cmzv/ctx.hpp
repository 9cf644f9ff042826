#pragma once

#include <mpfr.h>

namespace cmzv {

// Requested accuracy plus guard digits; converts to mpfr bits.
struct PrecisionCtx {
  int digits;      // decimal digits the caller wants to trust
  int guard = 12;  // extra decimal digits carried internally

  explicit PrecisionCtx(int d) : digits(d < 10 ? 10 : d) {}

  int working_digits() const { return digits + guard; }

  mpfr_prec_t prec_bits() const {
    return static_cast<mpfr_prec_t>(working_digits() * 3.3219280948873623) + 16;
  }
};

}  // namespace cmzv
