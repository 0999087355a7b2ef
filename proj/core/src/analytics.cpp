#include "rumor/analytics.hpp"

#include <cmath>

namespace rumor {
namespace {

void require_fanout(uint32_t f) {
  if (f < 1) throw ConfigError("fanout must be at least 1");
}

}  // namespace

double falling_factorial(double x, uint32_t k) {
  double product = 1.0;
  for (uint32_t j = 0; j < k; ++j) product *= x - static_cast<double>(j);
  return product;
}

double fanout_log(uint32_t fanout, double x) {
  require_fanout(fanout);
  return std::log(x) / std::log(static_cast<double>(fanout) + 1.0);
}

double expected_uninformed_pull_wr(uint64_t u, uint64_t n, uint32_t f_in) {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (u > n) throw ConfigError("u must be <= n");
  require_fanout(f_in);
  const double un = static_cast<double>(u) / static_cast<double>(n);
  return static_cast<double>(u) * std::pow(un, static_cast<double>(f_in));
}

double expected_uninformed_pull_wor(uint64_t u, uint64_t n, uint32_t f_in) {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (u > n) throw ConfigError("u must be <= n");
  require_fanout(f_in);
  if (f_in > n - 1)
    throw ConfigError("f_in must be <= n-1 without replacement");
  if (u == 0) return 0.0;
  // ff(u-1, f) / ff(n-1, f); factor pairwise to stay in range for large n.
  double stay = 1.0;
  for (uint32_t j = 0; j < f_in; ++j) {
    stay *= (static_cast<double>(u) - 1.0 - j) /
            (static_cast<double>(n) - 1.0 - j);
  }
  if (stay < 0.0) stay = 0.0;  // u-1 < f_in: some factor hit zero first
  return static_cast<double>(u) * stay;
}

double expected_uninformed_pull_wor_binomial_form(uint64_t u, uint64_t n,
                                                  uint32_t f_in) {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (u > n) throw ConfigError("u must be <= n");
  require_fanout(f_in);
  if (f_in > n - 1)
    throw ConfigError("f_in must be <= n-1 without replacement");
  // u * C(u, f) / C(n-1, f) = u * ff(u, f) / ff(n-1, f)
  double ratio = 1.0;
  for (uint32_t j = 0; j < f_in; ++j) {
    ratio *= (static_cast<double>(u) - j) /
             (static_cast<double>(n) - 1.0 - j);
  }
  if (ratio < 0.0) ratio = 0.0;
  return static_cast<double>(u) * ratio;
}

double expected_uninformed_push(uint64_t u, uint64_t n, uint32_t f_out) {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (u > n) throw ConfigError("u must be <= n");
  require_fanout(f_out);
  const double exponent =
      static_cast<double>(f_out) * static_cast<double>(n - u);
  return static_cast<double>(u) *
         std::pow(1.0 - 1.0 / static_cast<double>(n), exponent);
}

PullPushCheck check_pull_le_push(uint64_t n, uint32_t f) {
  PullPushCheck result;
  for (uint64_t u = 0; u <= n; ++u) {
    const double pull = expected_uninformed_pull_wr(u, n, f);
    const double push = expected_uninformed_push(u, n, f);
    if (pull > push + 1e-12 * std::max(pull, push)) {
      result.holds = false;
      result.witness_u = u;
      result.pull_value = pull;
      result.push_value = push;
      return result;
    }
  }
  return result;
}

double informed_growth_bound(uint64_t informed, uint32_t f_in) {
  require_fanout(f_in);
  return static_cast<double>(informed) * (static_cast<double>(f_in) + 1.0);
}

Prediction predicted_rounds(Protocol p, uint64_t n, uint32_t f_in,
                            uint32_t f_out) {
  if (n < 3) throw ConfigError("round predictions need n >= 3");
  Prediction pred;
  pred.quantity = "rounds";
  const auto dn = static_cast<double>(n);
  switch (p) {
    case Protocol::kRegularPull:
      pred.base = fanout_log(f_in, dn);
      pred.note = "log_(f_in+1) n";
      break;
    case Protocol::kRegularPush:
      pred.base = fanout_log(f_out, dn) + std::log(dn) / f_out;
      pred.note = "log_(f_out+1) n + ln n / f_out";
      break;
    case Protocol::kRegularPushThenPull:
      pred.base = fanout_log(f_out, dn);
      pred.note = "log_(f_out+1) n (push phase dominates)";
      break;
    case Protocol::kPolitePushPull:
      pred.base = std::log(dn);
      pred.note = "ln n";
      break;
  }
  return pred;
}

Prediction predicted_endgame_rounds(uint64_t n, uint32_t f_in) {
  if (n < 3) throw ConfigError("endgame predictions need n >= 3");
  Prediction pred;
  pred.quantity = "endgame-rounds";
  pred.base = fanout_log(f_in, std::log(static_cast<double>(n)));
  pred.note = "log_(f_in+1) ln n, from ceil(n / ln n) informed";
  return pred;
}

Prediction predicted_messages(Protocol p, uint64_t n, uint32_t f_in,
                              uint32_t f_out) {
  if (n < 3) throw ConfigError("message predictions need n >= 3");
  Prediction pred;
  pred.quantity = "messages";
  const auto dn = static_cast<double>(n);
  switch (p) {
    case Protocol::kRegularPull:
      pred.base = dn - 1.0;
      pred.low_factor = 1.0;
      pred.high_factor = static_cast<double>(f_in);
      pred.note = "n-1; exact (zero overhead) at f_in = 1";
      break;
    case Protocol::kRegularPush:
      pred.base = dn * std::log(dn);
      pred.low_factor = 0.2;
      pred.high_factor = 3.0;
      pred.note = "n ln n";
      break;
    case Protocol::kRegularPushThenPull:
      pred.base = dn;
      pred.low_factor = 0.9;
      pred.high_factor = 1.2;
      pred.note = "n + O(n / (ln n)^2) at the overhead-optimal switch";
      break;
    case Protocol::kPolitePushPull:
      pred.base = dn * std::log(std::log(dn));
      pred.low_factor = 0.5;
      pred.high_factor = 8.0;
      pred.note = "n ln ln n";
      break;
  }
  return pred;
}

}  // namespace rumor
