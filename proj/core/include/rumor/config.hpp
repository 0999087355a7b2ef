#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rumor {

// Thrown for any parameter combination the engines refuse to run.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Protocol {
  kRegularPull,          // uninformed processes request from f_in peers
  kRegularPush,          // informed processes send to f_out peers
  kRegularPushThenPull,  // push for rounds [0, switch_round), pull afterwards
  kPolitePushPull,       // one call per process, both directions transmit
};

enum class SamplingMode {
  kWithReplacement,     // f independent uniform picks, self and repeats allowed
  kWithoutReplacement,  // f distinct uniform picks excluding the sampler
};

enum class StopRule {
  kFixedBudget,    // run exactly round_budget rounds
  kUntilComplete,  // stop once every non-failed process is informed (or budget)
};

// Sentinel: derive the value from n and the fanout when the trial starts.
inline constexpr uint32_t kAutoRounds = 0xffffffffu;

struct ProtocolConfig {
  uint32_t n = 2;
  uint32_t f_in = 1;
  uint32_t f_out = 1;
  SamplingMode sampling = SamplingMode::kWithoutReplacement;
  Protocol protocol = Protocol::kRegularPull;
  uint32_t round_budget = kAutoRounds;
  uint32_t switch_round = kAutoRounds;  // first pull round of push-then-pull
  uint64_t seed = 0;
  uint32_t rumor_size_bits = 256;  // payload bits charged per rumor message

  // Throws ConfigError naming the first violated rule.
  void validate() const;
};

const char* to_string(Protocol p);
const char* to_string(SamplingMode m);
const char* to_string(StopRule s);
Protocol protocol_from_string(const std::string& s);
SamplingMode sampling_from_string(const std::string& s);
StopRule stop_rule_from_string(const std::string& s);

}  // namespace rumor
