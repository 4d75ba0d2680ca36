#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "smartran/adam.hpp"
#include "smartran/mlp.hpp"

using namespace smartran;

namespace {

// 0.5 * sum over batch of squared error against a fixed target
double sq_loss(const Mlp& net, const MatrixXd& x, const MatrixXd& t) {
  MatrixXd y = mlp_forward(net, x);
  return 0.5 * (y - t).squaredNorm();
}

}  // namespace

TEST_CASE("forward pass matches a hand-computed 2-2-1 network") {
  Rng rng(1, stream::agent_init);
  Mlp net = Mlp::make({2, 2, 1}, rng);
  net.w[0] << 1.0, -1.0, 0.5, 0.5;
  net.b[0] << 0.0, -1.0;
  net.w[1] << 2.0, -0.2;
  net.b[1] << 0.02;
  VectorXd x(2);
  x << 1.0, 2.0;
  // z0 = [-1, 0.5] -> relu [0, 0.5] -> 2*0 - 0.2*0.5 + 0.02 = -0.08
  VectorXd y = mlp_forward1(net, x);
  REQUIRE(y.size() == 1);
  REQUIRE(y[0] == Catch::Approx(-0.08).margin(1e-15));
}

TEST_CASE("tanh output squashes the identity result") {
  Rng rng(1, stream::agent_init);
  Mlp lin = Mlp::make({2, 2, 1}, rng);
  Mlp sq = lin;
  sq.out_act = Mlp::Output::Tanh;
  VectorXd x(2);
  x << 0.3, -0.7;
  REQUIRE(mlp_forward1(sq, x)[0] == Catch::Approx(std::tanh(mlp_forward1(lin, x)[0])).margin(1e-15));
}

TEST_CASE("zero input through fresh nets gives zero output") {
  // biases start at zero, so a zero state propagates zeros to the last layer
  Rng rng(7, stream::agent_init);
  Mlp net = Mlp::make({5, 16, 16, 3}, rng);
  VectorXd y = mlp_forward1(net, VectorXd::Zero(5));
  for (int i = 0; i < 3; ++i) REQUIRE(y[i] == 0.0);
}

TEST_CASE("backward gradients match central finite differences") {
  Rng rng(42, stream::agent_init);
  auto out_act = GENERATE(Mlp::Output::Identity, Mlp::Output::Tanh);
  Mlp net = Mlp::make({4, 8, 3}, rng, out_act);
  Rng data(9, stream::oracle);
  const int batch = 5;
  MatrixXd x(4, batch), t(3, batch);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = data.normal();
  for (int i = 0; i < t.size(); ++i) t.data()[i] = data.normal();

  MlpCache cache;
  MatrixXd y = mlp_forward(net, x, &cache);
  MlpGrads g = MlpGrads::zeros_like(net);
  MatrixXd dx = mlp_backward(net, cache, y - t, g);

  VectorXd ana = mlp_grads_flat(net, g);
  VectorXd p0 = mlp_get_params(net);
  const double h = 1e-6;
  for (int i = 0; i < p0.size(); ++i) {
    VectorXd p = p0;
    p[i] += h;
    mlp_set_params(net, p);
    double lp = sq_loss(net, x, t);
    p[i] -= 2 * h;
    mlp_set_params(net, p);
    double lm = sq_loss(net, x, t);
    double fd = (lp - lm) / (2 * h);
    REQUIRE(ana[i] == Catch::Approx(fd).margin(1e-6).epsilon(1e-5));
  }
  mlp_set_params(net, p0);

  // input gradient from the same backward pass
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < batch; ++c) {
      MatrixXd xp = x, xm = x;
      xp(r, c) += h;
      xm(r, c) -= h;
      double fd = (sq_loss(net, xp, t) - sq_loss(net, xm, t)) / (2 * h);
      REQUIRE(dx(r, c) == Catch::Approx(fd).margin(1e-6).epsilon(1e-5));
    }
}

TEST_CASE("adam with a linear net recovers the least-squares solution") {
  Rng data(3, stream::oracle);
  const int n = 40;
  MatrixXd x(3, n);
  VectorXd w_true(3);
  w_true << 1.5, -2.0, 0.25;
  MatrixXd t(1, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < 3; ++r) x(r, c) = data.normal();
    t(0, c) = w_true.dot(x.col(c)) + 0.7 + 0.01 * data.normal();
  }
  // closed-form with intercept
  MatrixXd xa(4, n);
  xa.topRows(3) = x;
  xa.row(3).setOnes();
  VectorXd beta = (xa * xa.transpose()).ldlt().solve(xa * t.transpose());

  Rng rng(5, stream::agent_init);
  Mlp net = Mlp::make({3, 1}, rng);
  AdamState opt = AdamState::make(net, 0.01);
  for (int it = 0; it < 4000; ++it) {
    MlpCache cache;
    MatrixXd y = mlp_forward(net, x, &cache);
    MlpGrads g = MlpGrads::zeros_like(net);
    mlp_backward(net, cache, (y - t) / n, g);
    adam_step(opt, net, g);
  }
  for (int r = 0; r < 3; ++r) REQUIRE(net.w[0](0, r) == Catch::Approx(beta[r]).margin(1e-3));
  REQUIRE(net.b[0][0] == Catch::Approx(beta[3]).margin(1e-3));
}

TEST_CASE("adam first steps with unit gradient move by lr each") {
  Rng rng(1, stream::agent_init);
  Mlp net = Mlp::make({1, 1}, rng, Mlp::Output::Identity, 0.0);  // w = 0, b = 0
  AdamState opt = AdamState::make(net, 0.1);
  MlpGrads g = MlpGrads::zeros_like(net);
  g.dw[0](0, 0) = 1.0;
  g.db[0][0] = 1.0;
  // with constant gradient, bias-corrected adam steps by exactly lr/(1+eps)
  const double step = 0.1 / (1.0 + 1e-8);
  for (int k = 1; k <= 3; ++k) {
    adam_step(opt, net, g);
    REQUIRE(net.w[0](0, 0) == Catch::Approx(-k * step).margin(1e-14));
    REQUIRE(net.b[0][0] == Catch::Approx(-k * step).margin(1e-14));
  }
}

TEST_CASE("adam rejects non-finite gradients") {
  Rng rng(1, stream::agent_init);
  Mlp net = Mlp::make({2, 2}, rng);
  AdamState opt = AdamState::make(net, 0.1);
  MlpGrads g = MlpGrads::zeros_like(net);
  g.dw[0](0, 0) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(adam_step(opt, net, g), std::runtime_error);
  g.dw[0](0, 0) = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(adam_step(opt, net, g), std::runtime_error);
}

TEST_CASE("softmax basics") {
  VectorXd z(2);
  z << 0.0, 0.0;
  VectorXd p = softmax(z);
  REQUIRE(p[0] == Catch::Approx(0.5).margin(1e-15));
  REQUIRE(p[1] == Catch::Approx(0.5).margin(1e-15));

  VectorXd big(3);
  big << 1000.0, 0.0, -1000.0;
  VectorXd pb = softmax(big);
  REQUIRE(pb.allFinite());
  REQUIRE(pb.sum() == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(pb[0] > 0.999);

  VectorXd lp = log_softmax(z);
  REQUIRE(lp[0] == Catch::Approx(std::log(0.5)).margin(1e-12));

  VectorXd u = VectorXd::Constant(4, 0.25);
  REQUIRE(entropy_of(u) == Catch::Approx(std::log(4.0)).margin(1e-12));
}

TEST_CASE("parameter flattening round-trips and counts") {
  Rng rng(11, stream::agent_init);
  Mlp net = Mlp::make({4, 8, 2}, rng);
  REQUIRE(mlp_param_count(net) == 4 * 8 + 8 + 8 * 2 + 2);
  VectorXd p(mlp_param_count(net));
  for (int i = 0; i < p.size(); ++i) p[i] = 0.01 * i;
  mlp_set_params(net, p);
  VectorXd back = mlp_get_params(net);
  REQUIRE((back - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("construction rejects bad shapes") {
  Rng rng(1, stream::agent_init);
  REQUIRE_THROWS_AS(Mlp::make({4}, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(Mlp::make({4, 0, 2}, rng), std::invalid_argument);
  Mlp net = Mlp::make({3, 2}, rng);
  REQUIRE_THROWS_AS(mlp_forward1(net, VectorXd::Zero(4)), std::invalid_argument);
}

TEST_CASE("fan-in init is deterministic per seed and bounded") {
  Rng a(21, stream::agent_init), b(21, stream::agent_init), c(22, stream::agent_init);
  Mlp na = Mlp::make({6, 5, 2}, a), nb = Mlp::make({6, 5, 2}, b), nc = Mlp::make({6, 5, 2}, c);
  REQUIRE((mlp_get_params(na) - mlp_get_params(nb)).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((mlp_get_params(na) - mlp_get_params(nc)).cwiseAbs().maxCoeff() > 0.0);
  double lim0 = 1.0 / std::sqrt(6.0);
  REQUIRE(na.w[0].cwiseAbs().maxCoeff() <= lim0);
  REQUIRE(na.b[0].cwiseAbs().maxCoeff() == 0.0);
}
