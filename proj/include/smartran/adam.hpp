// Adam optimizer with bias correction, one state per network.
#pragma once

#include <cmath>
#include <stdexcept>

#include "smartran/mlp.hpp"

namespace smartran {

struct AdamState {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long long step = 0;
  std::vector<MatrixXd> mw, vw;
  std::vector<VectorXd> mb, vb;

  static AdamState make(const Mlp& net, double lr) {
    AdamState st;
    st.lr = lr;
    for (int l = 0; l < net.num_layers(); ++l) {
      st.mw.push_back(MatrixXd::Zero(net.w[l].rows(), net.w[l].cols()));
      st.vw.push_back(MatrixXd::Zero(net.w[l].rows(), net.w[l].cols()));
      st.mb.push_back(VectorXd::Zero(net.b[l].size()));
      st.vb.push_back(VectorXd::Zero(net.b[l].size()));
    }
    return st;
  }
};

// throws on non-finite gradients so a poisoned update can never reach the weights
inline void adam_step(AdamState& st, Mlp& net, const MlpGrads& g) {
  if (!g.finite()) throw std::runtime_error("adam_step: non-finite gradient");
  st.step += 1;
  const double c1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.step));
  const double c2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.step));
  for (int l = 0; l < net.num_layers(); ++l) {
    st.mw[l] = st.beta1 * st.mw[l] + (1.0 - st.beta1) * g.dw[l];
    st.vw[l] = st.beta2 * st.vw[l] + (1.0 - st.beta2) * g.dw[l].cwiseProduct(g.dw[l]);
    net.w[l].array() -=
        st.lr * (st.mw[l].array() / c1) / ((st.vw[l].array() / c2).sqrt() + st.eps);
    st.mb[l] = st.beta1 * st.mb[l] + (1.0 - st.beta1) * g.db[l];
    st.vb[l] = st.beta2 * st.vb[l] + (1.0 - st.beta2) * g.db[l].cwiseProduct(g.db[l]);
    net.b[l].array() -=
        st.lr * (st.mb[l].array() / c1) / ((st.vb[l].array() / c2).sqrt() + st.eps);
  }
}

}  // namespace smartran
