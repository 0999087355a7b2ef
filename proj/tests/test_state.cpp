#include <set>
#include <stdexcept>

#include "doctest.h"
#include "rumor/network_state.hpp"

using namespace rumor;

namespace {
std::set<uint32_t> informed_set(const NetworkState& st) {
  return {st.informed_ids().begin(), st.informed_ids().end()};
}
}  // namespace

TEST_SUITE("state") {

TEST_CASE("initial state: one informed origin") {
  NetworkState st = init_state(5, 2);
  CHECK(st.n() == 5);
  CHECK(st.round() == 0);
  CHECK(st.informed(2));
  CHECK(st.informed_count() == 1);
  CHECK(st.uninformed_count() == 4);
  CHECK(st.good_uninformed_count() == 4);
  CHECK_FALSE(st.all_good_informed());
  std::set<uint32_t> uninf(st.uninformed_ids().begin(),
                           st.uninformed_ids().end());
  CHECK(uninf == std::set<uint32_t>{0, 1, 3, 4});
}

TEST_CASE("constructor validates") {
  CHECK_THROWS_AS(NetworkState(1, 0), ConfigError);
  CHECK_THROWS_AS(NetworkState(4, 4), ConfigError);
}

TEST_CASE("mark_informed is idempotent and keeps counts") {
  NetworkState st = init_state(4, 0);
  CHECK(st.mark_informed(3));
  CHECK_FALSE(st.mark_informed(3));
  CHECK(st.informed_count() == 2);
  CHECK(st.uninformed_count() == 2);
  st.mark_informed(1);
  st.mark_informed(2);
  CHECK(st.all_good_informed());
  CHECK(st.uninformed_count() == 0);
}

TEST_CASE("revert_informed undoes the latest marks") {
  NetworkState st = init_state(6, 0);
  const auto before = informed_set(st);
  st.mark_informed(4);
  st.mark_informed(2);
  CHECK(st.informed_count() == 3);
  st.revert_informed(2);
  CHECK(informed_set(st) == before);
  CHECK(st.uninformed_count() == 5);
  CHECK(st.good_uninformed_count() == 5);
  CHECK(st.round() == 0);  // the round counter is not revert's business
  CHECK_THROWS_AS(st.revert_informed(2), std::logic_error);
}

TEST_CASE("failed processes never block completion") {
  NetworkState st = init_state(4, 0);
  st.mark_failed(2);
  CHECK(st.failed(2));
  CHECK(st.good_uninformed_count() == 2);
  CHECK(st.uninformed_count() == 3);
  st.mark_informed(1);
  st.mark_informed(3);
  CHECK(st.all_good_informed());  // only the crashed process is missing
  CHECK(st.uninformed_count() == 1);
}

TEST_CASE("informing a failed process leaves the good count alone") {
  NetworkState st = init_state(3, 0);
  st.mark_failed(1);
  CHECK(st.good_uninformed_count() == 1);
  CHECK(st.mark_informed(1));
  CHECK(st.informed_count() == 2);
  CHECK(st.good_uninformed_count() == 1);  // pid 2 is still missing
  st.mark_failed(1);                       // repeat is a no-op
  CHECK(st.good_uninformed_count() == 1);
}

TEST_CASE("revert restores good count for failed processes too") {
  NetworkState st = init_state(3, 0);
  st.mark_failed(1);
  st.mark_informed(1);
  st.revert_informed(1);
  CHECK(st.good_uninformed_count() == 1);  // unchanged: pid 1 is failed
  CHECK(st.uninformed_count() == 2);
}

TEST_CASE("advance_round counts up") {
  NetworkState st = init_state(2, 0);
  st.advance_round();
  st.advance_round();
  CHECK(st.round() == 2);
}

}  // TEST_SUITE
