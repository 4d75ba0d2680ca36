// Dense feed-forward networks with hand-derived backprop. ReLU hidden layers;
// output is identity or tanh (softmax is applied at the use site). Batches are
// stored column-wise: one sample per column.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "smartran/rng.hpp"

namespace smartran {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Mlp {
  enum class Output { Identity, Tanh };

  std::vector<int> sizes;     // layer widths, first = input dim
  std::vector<MatrixXd> w;    // w[l]: sizes[l+1] x sizes[l]
  std::vector<VectorXd> b;
  Output out_act = Output::Identity;

  int in_dim() const { return sizes.front(); }
  int out_dim() const { return sizes.back(); }
  int num_layers() const { return static_cast<int>(sizes.size()) - 1; }

  // uniform fan-in init, biases zero
  static Mlp make(std::vector<int> layer_sizes, Rng& rng, Output out = Output::Identity,
                  double scale = 1.0) {
    if (layer_sizes.size() < 2) throw std::invalid_argument("Mlp: need at least two layer sizes");
    for (int s : layer_sizes)
      if (s < 1) throw std::invalid_argument("Mlp: layer sizes must be positive");
    Mlp net;
    net.sizes = std::move(layer_sizes);
    net.out_act = out;
    for (int l = 0; l + 1 < static_cast<int>(net.sizes.size()); ++l) {
      int fan_in = net.sizes[l], fan_out = net.sizes[l + 1];
      double lim = scale / std::sqrt(static_cast<double>(fan_in));
      MatrixXd wl(fan_out, fan_in);
      for (int i = 0; i < fan_out; ++i)
        for (int j = 0; j < fan_in; ++j) wl(i, j) = rng.uniform(-lim, lim);
      net.w.push_back(std::move(wl));
      net.b.push_back(VectorXd::Zero(fan_out));
    }
    return net;
  }
};

struct MlpCache {
  MatrixXd input;
  std::vector<MatrixXd> pre;   // pre-activation per layer
  std::vector<MatrixXd> post;  // post-activation per layer
};

struct MlpGrads {
  std::vector<MatrixXd> dw;
  std::vector<VectorXd> db;

  static MlpGrads zeros_like(const Mlp& net) {
    MlpGrads g;
    for (int l = 0; l < net.num_layers(); ++l) {
      g.dw.push_back(MatrixXd::Zero(net.w[l].rows(), net.w[l].cols()));
      g.db.push_back(VectorXd::Zero(net.b[l].size()));
    }
    return g;
  }

  bool finite() const {
    for (const auto& m : dw)
      if (!m.allFinite()) return false;
    for (const auto& v : db)
      if (!v.allFinite()) return false;
    return true;
  }
};

inline MatrixXd mlp_forward(const Mlp& net, const MatrixXd& x, MlpCache* cache = nullptr) {
  if (x.rows() != net.in_dim())
    throw std::invalid_argument("mlp_forward: input dim " + std::to_string(x.rows()) +
                                " != " + std::to_string(net.in_dim()));
  if (cache) {
    cache->input = x;
    cache->pre.clear();
    cache->post.clear();
  }
  MatrixXd a = x;
  const int L = net.num_layers();
  for (int l = 0; l < L; ++l) {
    MatrixXd z = (net.w[l] * a).colwise() + net.b[l];
    if (l + 1 < L) {
      a = z.cwiseMax(0.0);  // ReLU
    } else if (net.out_act == Mlp::Output::Tanh) {
      a = z.array().tanh().matrix();
    } else {
      a = z;
    }
    if (cache) {
      cache->pre.push_back(std::move(z));
      cache->post.push_back(a);
    }
  }
  return a;
}

inline VectorXd mlp_forward1(const Mlp& net, const VectorXd& x) {
  return mlp_forward(net, MatrixXd(x)).col(0);
}

// dout = dL/d(output); accumulates parameter gradients into g and returns
// dL/d(input). No implicit batch averaging: fold 1/batch into dout.
inline MatrixXd mlp_backward(const Mlp& net, const MlpCache& cache, const MatrixXd& dout,
                             MlpGrads& g) {
  const int L = net.num_layers();
  if (static_cast<int>(cache.pre.size()) != L)
    throw std::invalid_argument("mlp_backward: cache does not match network");
  if (dout.rows() != net.out_dim() || dout.cols() != cache.input.cols())
    throw std::invalid_argument("mlp_backward: upstream gradient shape mismatch");

  MatrixXd dz;
  if (net.out_act == Mlp::Output::Tanh) {
    dz = dout.cwiseProduct((1.0 - cache.post[L - 1].array().square()).matrix());
  } else {
    dz = dout;
  }
  for (int l = L - 1; l >= 0; --l) {
    const MatrixXd& a_prev = (l == 0) ? cache.input : cache.post[l - 1];
    g.dw[l] += dz * a_prev.transpose();
    g.db[l] += dz.rowwise().sum();
    if (l == 0) return net.w[l].transpose() * dz;
    MatrixXd da = net.w[l].transpose() * dz;
    dz = da.cwiseProduct((cache.pre[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return {};
}

// ---- parameter flattening (finite-difference checks, checkpoints) ----

inline int mlp_param_count(const Mlp& net) {
  int n = 0;
  for (int l = 0; l < net.num_layers(); ++l)
    n += static_cast<int>(net.w[l].size() + net.b[l].size());
  return n;
}

inline VectorXd mlp_get_params(const Mlp& net) {
  VectorXd out(mlp_param_count(net));
  int at = 0;
  for (int l = 0; l < net.num_layers(); ++l) {
    for (int j = 0; j < net.w[l].cols(); ++j)
      for (int i = 0; i < net.w[l].rows(); ++i) out[at++] = net.w[l](i, j);
    for (int i = 0; i < net.b[l].size(); ++i) out[at++] = net.b[l][i];
  }
  return out;
}

inline void mlp_set_params(Mlp& net, const VectorXd& p) {
  if (p.size() != mlp_param_count(net))
    throw std::invalid_argument("mlp_set_params: wrong parameter count");
  int at = 0;
  for (int l = 0; l < net.num_layers(); ++l) {
    for (int j = 0; j < net.w[l].cols(); ++j)
      for (int i = 0; i < net.w[l].rows(); ++i) net.w[l](i, j) = p[at++];
    for (int i = 0; i < net.b[l].size(); ++i) net.b[l][i] = p[at++];
  }
}

inline VectorXd mlp_grads_flat(const Mlp& net, const MlpGrads& g) {
  VectorXd out(mlp_param_count(net));
  int at = 0;
  for (int l = 0; l < net.num_layers(); ++l) {
    for (int j = 0; j < g.dw[l].cols(); ++j)
      for (int i = 0; i < g.dw[l].rows(); ++i) out[at++] = g.dw[l](i, j);
    for (int i = 0; i < g.db[l].size(); ++i) out[at++] = g.db[l][i];
  }
  return out;
}

// ---- softmax helpers ----

// logit spread is clamped so exp never underflows to an exact zero:
// probabilities stay strictly positive and still sum to 1 within 1e-9
inline VectorXd softmax(const VectorXd& logits) {
  VectorXd z = logits.array() - logits.maxCoeff();
  z = z.cwiseMax(-700.0);
  VectorXd e = z.array().exp();
  return e / e.sum();
}

inline VectorXd log_softmax(const VectorXd& logits) {
  VectorXd z = logits.array() - logits.maxCoeff();
  double lse = std::log(z.array().exp().sum());
  return (z.array() - lse).matrix();
}

inline MatrixXd softmax_cols(const MatrixXd& logits) {
  MatrixXd out(logits.rows(), logits.cols());
  for (int c = 0; c < logits.cols(); ++c) out.col(c) = softmax(logits.col(c));
  return out;
}

inline MatrixXd log_softmax_cols(const MatrixXd& logits) {
  MatrixXd out(logits.rows(), logits.cols());
  for (int c = 0; c < logits.cols(); ++c) out.col(c) = log_softmax(logits.col(c));
  return out;
}

inline double entropy_of(const VectorXd& probs) {
  double h = 0.0;
  for (int i = 0; i < probs.size(); ++i)
    if (probs[i] > 0) h -= probs[i] * std::log(probs[i]);
  return h;
}

}  // namespace smartran
