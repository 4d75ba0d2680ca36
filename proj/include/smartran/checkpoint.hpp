// Flat binary container for named networks: magic, then per net a name, the
// output activation, the layer sizes and the flattened parameters as
// little-endian f64. Human-readable run metadata goes in a JSON sidecar
// written by the harness; this file only handles the weights.
#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "smartran/mlp.hpp"

namespace smartran {

constexpr char kCkptMagic[8] = {'S', 'R', 'N', 'C', 'K', 'P', 'T', '1'};

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void put_f64(std::ostream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

inline double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

}  // namespace detail

struct NamedNet {
  std::string name;
  Mlp net;
};

inline void save_networks(const std::string& path, const std::vector<NamedNet>& nets) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  os.write(kCkptMagic, 8);
  detail::put_u32(os, static_cast<std::uint32_t>(nets.size()));
  for (const auto& nn : nets) {
    detail::put_u32(os, static_cast<std::uint32_t>(nn.name.size()));
    os.write(nn.name.data(), static_cast<std::streamsize>(nn.name.size()));
    detail::put_u32(os, nn.net.out_act == Mlp::Output::Tanh ? 1u : 0u);
    detail::put_u32(os, static_cast<std::uint32_t>(nn.net.sizes.size()));
    for (int s : nn.net.sizes) detail::put_u32(os, static_cast<std::uint32_t>(s));
    VectorXd p = mlp_get_params(nn.net);
    for (int i = 0; i < p.size(); ++i) detail::put_f64(os, p[i]);
  }
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

inline std::vector<NamedNet> load_networks(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kCkptMagic, 8) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  std::uint32_t count = detail::get_u32(is);
  std::vector<NamedNet> out;
  out.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    NamedNet nn;
    std::uint32_t name_len = detail::get_u32(is);
    nn.name.resize(name_len);
    is.read(nn.name.data(), name_len);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    std::uint32_t act = detail::get_u32(is);
    std::uint32_t n_sizes = detail::get_u32(is);
    if (n_sizes < 2) throw std::runtime_error("checkpoint: invalid layer count");
    std::vector<int> sizes(n_sizes);
    for (auto& s : sizes) s = static_cast<int>(detail::get_u32(is));
    // zero-init then overwrite every parameter
    Rng dummy(0, 0);
    nn.net = Mlp::make(sizes, dummy, act == 1 ? Mlp::Output::Tanh : Mlp::Output::Identity, 0.0);
    VectorXd p(mlp_param_count(nn.net));
    for (int i = 0; i < p.size(); ++i) p[i] = detail::get_f64(is);
    mlp_set_params(nn.net, p);
    out.push_back(std::move(nn));
  }
  return out;
}

inline const Mlp& find_network(const std::vector<NamedNet>& nets, const std::string& name) {
  for (const auto& nn : nets)
    if (nn.name == name) return nn.net;
  throw std::runtime_error("checkpoint: no network named " + name);
}

}  // namespace smartran
