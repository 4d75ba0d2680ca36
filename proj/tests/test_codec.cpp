#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "smartran/codec.hpp"

using namespace smartran;

namespace {

Topology tiny_topo(int B, int K, int N) {
  TopologyParams p;
  p.num_rrs = B;
  p.num_users = K;
  p.num_subcarriers = N;
  p.subcarrier_bandwidth_hz = 1e6;
  p.area_radius_m = 400;
  p.cell_radius_m = 100;
  return generate_topology(p, 7);
}

}  // namespace

TEST_CASE("per-cell budget is the ceiling of users over cells") {
  REQUIRE(per_cell_budget(32, 4) == 8);
  REQUIRE(per_cell_budget(33, 4) == 9);
  REQUIRE(per_cell_budget(1, 4) == 1);
  REQUIRE(per_cell_budget(0, 4) == 1);
  REQUIRE_THROWS_AS(per_cell_budget(4, 0), std::invalid_argument);
}

TEST_CASE("centralized state layout: B=4, K=32, N=4 gives 132 entries") {
  auto topo = tiny_topo(4, 32, 4);
  int k_max = per_cell_budget(32, 4);
  REQUIRE(k_max == 8);

  auto dims = centralized_rap_dims(topo, k_max);
  REQUIRE(dims.state_dim == 4 * 8 * 4 + 4);
  REQUIRE(static_cast<int>(dims.head_sizes.size()) == 4 * 4 * topo.l_max);
  for (int h : dims.head_sizes) REQUIRE(h == k_max + 1);
  REQUIRE(dims.cont_dim == static_cast<int>(dims.head_sizes.size()));

  CentralizedCodec codec(topo, k_max, 10);
  auto ch = sample_channels(topo, 0, 7);
  VectorXd s = codec.encode(topo, ch, true);
  REQUIRE(s.size() == 132);
  // balanced round-robin assignment: every count entry is K_b / k_max = 1
  for (int b = 0; b < 4; ++b) REQUIRE(s[128 + b] == 1.0);
}

TEST_CASE("distributed state layout sees only one cell block") {
  auto topo = tiny_topo(4, 10, 4);
  int k_max = per_cell_budget(10, 4);  // 3
  auto dims = distributed_rap_dims(topo, k_max);
  REQUIRE(dims.state_dim == k_max * 4 + 1);
  REQUIRE(static_cast<int>(dims.head_sizes.size()) == 4 * topo.l_max);
  REQUIRE(dims.cont_dim == 4 * topo.l_max);

  auto ch = sample_channels(topo, 3, 7);
  // cells 0 and 1 have 3 users; cells 2 and 3 only 2, so their last slot is 0
  for (int b = 0; b < 4; ++b) {
    DistributedCodec codec(topo, b, k_max, 10);
    VectorXd s = codec.encode(topo, ch, true);
    REQUIRE(s.size() == dims.state_dim);
    int kb = static_cast<int>(topo.users_of(b).size());
    REQUIRE(s[k_max * 4] == Catch::Approx(static_cast<double>(kb) / k_max));
    for (int n = 0; n < 4; ++n) {
      if (kb < k_max) REQUIRE(s[(k_max - 1) * 4 + n] == 0.0);
    }
  }
}

TEST_CASE("empty network encodes to all zeros") {
  auto topo = tiny_topo(2, 0, 3);
  CentralizedCodec codec(topo, per_cell_budget(0, 2), 10);
  auto ch = sample_channels(topo, 0, 7);
  VectorXd s = codec.encode(topo, ch, true);
  REQUIRE(s.size() == codec.dims().state_dim);
  for (int i = 0; i < s.size(); ++i) REQUIRE(s[i] == 0.0);
}

TEST_CASE("standardization removes a global gain scale") {
  auto topo = tiny_topo(2, 6, 4);
  auto ch = sample_channels(topo, 11, 7);
  ChannelState ch_scaled = ch;
  for (double& g : ch_scaled.gains) g *= 10.0;  // +1 in log10

  // fresh codecs see the same number of observations, so the standardized
  // views of the shifted log-gains agree
  CentralizedCodec a(topo, 3, 100), b(topo, 3, 100);
  VectorXd sa = a.encode(topo, ch, true);
  VectorXd sb = b.encode(topo, ch_scaled, true);
  REQUIRE(sa.size() == sb.size());
  for (int i = 0; i < sa.size(); ++i) REQUIRE(sa[i] == Catch::Approx(sb[i]).margin(1e-9));
  REQUIRE(std::abs(a.normalizer().mean() - (b.normalizer().mean() - 1.0)) < 1e-9);
}

TEST_CASE("a cell larger than the budget is rejected") {
  auto topo = tiny_topo(2, 8, 4);  // 4 users per cell
  REQUIRE_THROWS_AS(CentralizedCodec(topo, 3, 10), std::invalid_argument);
  REQUIRE_THROWS_AS(DistributedCodec(topo, 0, 3, 10), std::invalid_argument);
  REQUIRE_NOTHROW(CentralizedCodec(topo, 4, 10));
}

TEST_CASE("normalizer freezes after the warm-up and ignores later samples") {
  GainNormalizer norm(2);
  norm.observe(-8.0);
  norm.observe(-10.0);
  norm.end_slot();
  REQUIRE_FALSE(norm.frozen());
  norm.observe(-9.0);
  norm.end_slot();
  REQUIRE(norm.frozen());

  double mean = norm.mean(), stddev = norm.std();
  norm.observe(1000.0);  // dropped
  norm.end_slot();
  REQUIRE(norm.mean() == mean);
  REQUIRE(norm.std() == stddev);
}

TEST_CASE("normalizer statistics match the two-pass formulas") {
  GainNormalizer norm(100);
  std::vector<double> xs = {-8.5, -9.25, -10.0, -7.75, -9.5};
  for (double x : xs) norm.observe(x);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= (xs.size() - 1);
  REQUIRE(norm.mean() == Catch::Approx(mean).margin(1e-12));
  REQUIRE(norm.std() == Catch::Approx(std::sqrt(var)).margin(1e-12));
  REQUIRE(norm.normalize(mean) == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(norm.normalize(mean + norm.std()) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("normalizer returns zero before it has two samples") {
  GainNormalizer norm(5);
  REQUIRE(norm.normalize(3.0) == 0.0);
  norm.observe(-9.0);
  REQUIRE(norm.normalize(3.0) == 0.0);
  norm.observe(-8.0);
  REQUIRE(norm.normalize(3.0) != 0.0);
}

TEST_CASE("normalizer restore reproduces the affine map and freezes") {
  GainNormalizer norm(5);
  norm.restore(-9.0, 2.0);
  REQUIRE(norm.frozen());
  REQUIRE(norm.mean() == -9.0);
  REQUIRE(norm.std() == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(norm.normalize(-5.0) == Catch::Approx(2.0).margin(1e-12));
  norm.observe(100.0);  // frozen, ignored
  REQUIRE(norm.mean() == -9.0);
}

TEST_CASE("std floor keeps constant inputs finite") {
  GainNormalizer norm(5);
  for (int i = 0; i < 10; ++i) norm.observe(-9.0);
  REQUIRE(norm.std() == 1e-6);
  REQUIRE(std::isfinite(norm.normalize(-8.0)));
}
