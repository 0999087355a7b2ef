#include "rumor/network_state.hpp"

#include <stdexcept>

namespace rumor {

NetworkState::NetworkState(uint32_t n, uint32_t origin) : n_(n) {
  if (n < 2) throw ConfigError("NetworkState: n must be at least 2");
  if (origin >= n) throw ConfigError("NetworkState: origin out of range");
  informed_flag_.assign(n, 0);
  failed_flag_.assign(n, 0);
  pos_.assign(n, 0);
  uninformed_ids_.reserve(n);
  for (uint32_t p = 0; p < n; ++p) {
    if (p == origin) continue;
    pos_[p] = static_cast<uint32_t>(uninformed_ids_.size());
    uninformed_ids_.push_back(p);
  }
  informed_flag_[origin] = 1;
  pos_[origin] = 0;
  informed_ids_.push_back(origin);
  good_uninformed_ = n - 1;
}

bool NetworkState::mark_informed(uint32_t pid) {
  if (informed_flag_[pid]) return false;
  // swap-remove from the uninformed list
  const uint32_t at = pos_[pid];
  const uint32_t moved = uninformed_ids_.back();
  uninformed_ids_[at] = moved;
  pos_[moved] = at;
  uninformed_ids_.pop_back();

  informed_flag_[pid] = 1;
  pos_[pid] = static_cast<uint32_t>(informed_ids_.size());
  informed_ids_.push_back(pid);
  if (!failed_flag_[pid]) --good_uninformed_;
  return true;
}

void NetworkState::mark_failed(uint32_t pid) {
  if (failed_flag_[pid]) return;
  failed_flag_[pid] = 1;
  if (!informed_flag_[pid]) --good_uninformed_;
}

void NetworkState::revert_informed(uint64_t count) {
  if (count > informed_ids_.size())
    throw std::logic_error("revert_informed: more reverts than marks");
  for (uint64_t k = 0; k < count; ++k) {
    const uint32_t pid = informed_ids_.back();
    informed_ids_.pop_back();
    informed_flag_[pid] = 0;
    pos_[pid] = static_cast<uint32_t>(uninformed_ids_.size());
    uninformed_ids_.push_back(pid);
    if (!failed_flag_[pid]) ++good_uninformed_;
  }
}

}  // namespace rumor
