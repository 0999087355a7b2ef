#include "rumor/config.hpp"

namespace rumor {

void ProtocolConfig::validate() const {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (f_in < 1) throw ConfigError("f_in must be at least 1");
  if (f_out < 1) throw ConfigError("f_out must be at least 1");
  if (rumor_size_bits < 1) throw ConfigError("rumor_size_bits must be at least 1");
  if (sampling == SamplingMode::kWithoutReplacement) {
    if (f_in > n - 1)
      throw ConfigError("f_in must be <= n-1 for without-replacement sampling");
    const bool pushes = protocol == Protocol::kRegularPush ||
                        protocol == Protocol::kRegularPushThenPull;
    if (pushes && f_out > n - 1)
      throw ConfigError("f_out must be <= n-1 for without-replacement sampling");
  }
  if (protocol == Protocol::kRegularPushThenPull &&
      switch_round != kAutoRounds && round_budget != kAutoRounds &&
      switch_round > round_budget) {
    throw ConfigError("switch_round must be <= round_budget");
  }
}

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::kRegularPull: return "regular-pull";
    case Protocol::kRegularPush: return "regular-push";
    case Protocol::kRegularPushThenPull: return "regular-push-then-pull";
    case Protocol::kPolitePushPull: return "polite-push-pull";
  }
  return "?";
}

const char* to_string(SamplingMode m) {
  switch (m) {
    case SamplingMode::kWithReplacement: return "with-replacement";
    case SamplingMode::kWithoutReplacement: return "without-replacement-excluding-self";
  }
  return "?";
}

const char* to_string(StopRule s) {
  switch (s) {
    case StopRule::kFixedBudget: return "fixed-budget";
    case StopRule::kUntilComplete: return "until-complete";
  }
  return "?";
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "regular-pull") return Protocol::kRegularPull;
  if (s == "regular-push") return Protocol::kRegularPush;
  if (s == "regular-push-then-pull") return Protocol::kRegularPushThenPull;
  if (s == "polite-push-pull") return Protocol::kPolitePushPull;
  throw ConfigError("unknown protocol '" + s +
                    "' (expected regular-pull, regular-push, "
                    "regular-push-then-pull or polite-push-pull)");
}

SamplingMode sampling_from_string(const std::string& s) {
  if (s == "with-replacement") return SamplingMode::kWithReplacement;
  if (s == "without-replacement-excluding-self" || s == "without-replacement")
    return SamplingMode::kWithoutReplacement;
  throw ConfigError("unknown sampling mode '" + s +
                    "' (expected with-replacement or "
                    "without-replacement-excluding-self)");
}

StopRule stop_rule_from_string(const std::string& s) {
  if (s == "fixed-budget") return StopRule::kFixedBudget;
  if (s == "until-complete") return StopRule::kUntilComplete;
  throw ConfigError("unknown stop rule '" + s +
                    "' (expected fixed-budget or until-complete)");
}

}  // namespace rumor
