#include <catch2/catch_amalgamated.hpp>

#include "smartran/replay.hpp"

using namespace smartran;

namespace {

Transition<int> make_t(double r) {
  Transition<int> t;
  t.state = VectorXd::Constant(2, r);
  t.action = static_cast<int>(r);
  t.reward = r;
  t.next_state = VectorXd::Constant(2, r + 0.5);
  t.done = false;
  return t;
}

}  // namespace

TEST_CASE("ring buffer wraps and keeps the newest entries") {
  ReplayBuffer<int> buf(3);
  REQUIRE(buf.capacity() == 3);
  for (int i = 0; i < 5; ++i) buf.push(make_t(i));
  REQUIRE(buf.size() == 3);
  // slots were overwritten in ring order: [3, 4, 2]
  REQUIRE(buf.at(0).reward == 3.0);
  REQUIRE(buf.at(1).reward == 4.0);
  REQUIRE(buf.at(2).reward == 2.0);
}

TEST_CASE("size grows until capacity") {
  ReplayBuffer<int> buf(10);
  for (int i = 0; i < 7; ++i) {
    buf.push(make_t(i));
    REQUIRE(buf.size() == static_cast<std::size_t>(i + 1));
  }
}

TEST_CASE("sampling is deterministic per rng stream") {
  ReplayBuffer<int> buf(100);
  for (int i = 0; i < 50; ++i) buf.push(make_t(i));
  Rng a(123, stream::replay), b(123, stream::replay), c(124, stream::replay);
  auto sa = buf.sample(16, a);
  auto sb = buf.sample(16, b);
  auto sc = buf.sample(16, c);
  bool same = true, diff = false;
  for (int i = 0; i < 16; ++i) {
    same = same && sa[i]->reward == sb[i]->reward;
    diff = diff || sa[i]->reward != sc[i]->reward;
  }
  REQUIRE(same);
  REQUIRE(diff);
}

TEST_CASE("sampling covers the whole buffer eventually") {
  ReplayBuffer<int> buf(8);
  for (int i = 0; i < 8; ++i) buf.push(make_t(i));
  Rng rng(7, stream::replay);
  std::vector<bool> seen(8, false);
  for (const auto* t : buf.sample(256, rng)) seen[static_cast<int>(t->reward)] = true;
  for (bool s : seen) REQUIRE(s);
}

TEST_CASE("invalid uses throw") {
  REQUIRE_THROWS_AS(ReplayBuffer<int>(0), std::invalid_argument);
  ReplayBuffer<int> buf(4);
  Rng rng(1, stream::replay);
  REQUIRE_THROWS_AS(buf.sample(4, rng), std::runtime_error);
}
