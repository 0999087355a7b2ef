#pragma once

#include <cstdint>
#include <vector>

#include "rumor/config.hpp"

namespace rumor {

// Who currently holds the rumor and who has crashed.  Round engines read a
// round-start snapshot by construction: they collect newly informed ids and
// apply them through mark_informed() only after all decisions are made.
//
// Membership lists (informed_ids / uninformed_ids) exist so engines iterate
// in O(active) instead of O(n); list order is bookkeeping, never semantics.
class NetworkState {
 public:
  NetworkState(uint32_t n, uint32_t origin);

  uint32_t n() const { return n_; }
  uint32_t round() const { return round_; }
  void advance_round() { ++round_; }

  bool informed(uint32_t pid) const { return informed_flag_[pid] != 0; }
  bool failed(uint32_t pid) const { return failed_flag_[pid] != 0; }

  // Returns true when pid was newly marked.  Never un-informs.
  bool mark_informed(uint32_t pid);
  void mark_failed(uint32_t pid);

  uint64_t informed_count() const { return informed_ids_.size(); }
  uint64_t uninformed_count() const { return uninformed_ids_.size(); }
  uint64_t good_uninformed_count() const { return good_uninformed_; }
  // Completion: every non-failed process informed.  Failed processes may
  // stay uninformed forever without blocking this.
  bool all_good_informed() const { return good_uninformed_ == 0; }

  const std::vector<uint32_t>& informed_ids() const { return informed_ids_; }
  const std::vector<uint32_t>& uninformed_ids() const { return uninformed_ids_; }

  // Undo the `count` most recent mark_informed() calls (most recent first).
  // Lets measurement loops replay one round many times without rebuilding
  // an O(n) state per sample.  The round counter is left untouched.
  void revert_informed(uint64_t count);

 private:
  uint32_t n_;
  uint32_t round_ = 0;
  uint64_t good_uninformed_;
  std::vector<uint8_t> informed_flag_;
  std::vector<uint8_t> failed_flag_;
  std::vector<uint32_t> informed_ids_;
  std::vector<uint32_t> uninformed_ids_;
  std::vector<uint32_t> pos_;  // index of pid inside its current list
};

// One informed origin, everyone else uninformed, round 0.
inline NetworkState init_state(uint32_t n, uint32_t origin) {
  return NetworkState(n, origin);
}

}  // namespace rumor
