#pragma once

#include <cstdint>
#include <string>

#include "rumor/config.hpp"

namespace rumor {

// x * (x-1) * ... * (x-k+1); the empty product (k = 0) is 1.
double falling_factorial(double x, uint32_t k);

// log base (fanout+1) of x.
double fanout_log(uint32_t fanout, double x);

// One-round expected uninformed count after a pull round, starting from u
// uninformed among n, with-replacement sampling:  u * (u/n)^f_in.
double expected_uninformed_pull_wr(uint64_t u, uint64_t n, uint32_t f_in);

// Exact without-replacement-excluding-self counterpart:
//   u * ff(u-1, f_in) / ff(n-1, f_in)
// (a requester stays uninformed iff all f_in distinct picks land on the
// other u-1 uninformed processes).  Requires f_in <= n-1.
double expected_uninformed_pull_wor(uint64_t u, uint64_t n, uint32_t f_in);

// Companion variant that evaluates u * C(u, f_in) / C(n-1, f_in) instead.
// Published derivations sometimes state this binomial-ratio form, but it
// does not equal the exact expectation above (it uses u rather than u-1
// survivors); it is exposed so the two can be compared numerically.
double expected_uninformed_pull_wor_binomial_form(uint64_t u, uint64_t n,
                                                  uint32_t f_in);

// One-round expected uninformed count after a push round with n-u informed
// senders of fanout f_out:  u * (1 - 1/n)^(f_out * (n-u)).
double expected_uninformed_push(uint64_t u, uint64_t n, uint32_t f_out);

struct PullPushCheck {
  bool holds = true;
  uint64_t witness_u = 0;  // first violating u when !holds
  double pull_value = 0.0;
  double push_value = 0.0;
};

// Verifies E_pull[u'|u] <= E_push[u'|u] (same fanout f on both sides,
// with-replacement pull form) for every u in [0, n].  Comparison uses a
// 1e-12 relative slack: at u = n-1, f = 1 the two sides agree exactly
// and may differ by an ulp in floating point.
PullPushCheck check_pull_le_push(uint64_t n, uint32_t f);

// Per-round cap on informed growth under pull: i' <= i * (f_in + 1).
double informed_growth_bound(uint64_t informed, uint32_t f_in);

// An asymptotic base term plus a [low, high] multiplier band.  Bands are
// deliberately loose (defaults x1..x8): they flag order-of-growth breakage,
// not constants.
struct Prediction {
  std::string quantity;
  double base = 0.0;
  double low_factor = 1.0;
  double high_factor = 8.0;
  std::string note;

  double low() const { return low_factor * base; }
  double high() const { return high_factor * base; }
};

// Round-count base terms:
//   regular-pull            log_{f_in+1} n
//   regular-push            log_{f_out+1} n + ln n / f_out
//   regular-push-then-pull  log_{f_out+1} n   (push phase dominates)
//   polite-push-pull        ln n
Prediction predicted_rounds(Protocol p, uint64_t n, uint32_t f_in,
                            uint32_t f_out);

// Rounds to finish once ceil(n / ln n) processes are informed (pull):
// base term log_{f_in+1} ln n.
Prediction predicted_endgame_rounds(uint64_t n, uint32_t f_in);

// Message-count base terms: n-1 for pull (exact at f_in = 1), n ln n for
// push, n ln ln n for polite, n for push-then-pull at the overhead-optimal
// switch round.
Prediction predicted_messages(Protocol p, uint64_t n, uint32_t f_in,
                              uint32_t f_out);

}  // namespace rumor
