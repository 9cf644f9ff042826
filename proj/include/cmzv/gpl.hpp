#pragma once

#include <string>
#include <vector>

#include "cmzv/cplx.hpp"
#include "cmzv/ctx.hpp"

namespace cmzv {

// Word of complex letters with real argument z in (0,1].
struct GplWord {
  std::vector<Cplx> letters;
  Real z{1l};

  int weight() const { return static_cast<int>(letters.size()); }
};

struct GplTerm {
  Cplx coeff;
  GplWord word;
};

struct GplCombination {
  std::vector<GplTerm> terms;
};

// Canonical cache key: letters and argument rounded to 40 significant digits,
// plus the requested digit count.
std::string gpl_word_key(const GplWord& w, int digits);

// Iterated-integral value of the word.  Arguments z < 1 are rescaled onto
// [0,1] by letter division (last letter must be nonzero).  At z = 1, words
// with trailing zeros are rewritten exactly through the shuffle identity
// G(0;1) = 0 before evaluation; a leading letter 1 raises a
// regularization-required error.  Results are memoized per (word, digits).
Cplx gpl_eval(const GplWord& word, const PrecisionCtx& ctx);

// All riffle shuffles of two words over the same argument.
GplCombination shuffle(const GplWord& u, const GplWord& v);

// The explicit divergent-word rewrite G(1,a,b;1) -> G(0,1-b,1-a;1)
// + G(1-b,0,1-a;1); convergent words pass through unchanged.  Divergent
// shapes outside that pattern raise an unsupported error.
GplCombination regularize_word(const GplWord& word);

// Evaluate a combination (sum of coeff * gpl_eval(word)).
Cplx gpl_eval(const GplCombination& comb, const PrecisionCtx& ctx);

// Nested multiple polylogarithm query.
struct MplQuery {
  std::vector<long> orders;  // a_1..a_n >= 1
  std::vector<Cplx> args;    // z_1..z_n
};

// Evaluation through the word correspondence
// Li_{a1..an}(z1..zn) = (-1)^n G(0^{a1-1}, 1/z1, ..., 1/(z1...zn); 1).
Cplx mpl_eval(const MplQuery& q, const PrecisionCtx& ctx);

// Independent check: truncated nested series, accelerated on the unit circle
// by per-frequency difference annihilation.  Reliable to ~digits (<= 20).
Cplx mpl_series_check(const MplQuery& q, int digits);

}  // namespace cmzv
