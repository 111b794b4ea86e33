// Copyright 2026 The mdising Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "mdising/anneal.hpp"
#include "mdising/errors.hpp"
#include "mdising/ising.hpp"
#include "mdising/matrix.hpp"
#include "mdising/spin_config.hpp"

namespace mdising {

using Complex = std::complex<double>;
using Bits = std::vector<std::uint8_t>;

/// Square constellation with per-dimension binary-reflected Gray labels.
///
///   BPSK    real only, levels {-1, +1}, 1 bit
///   4-QAM   levels {-1, +1} per dimension, 2 bits
///   16-QAM  levels {-3, -1, +1, +3} per dimension labelled 00 01 11 10, 4 bits
///
/// Symbol index = I level index * levels + Q level index; bits are the I
/// label followed by the Q label.
class Constellation {
 public:
  enum class Kind { bpsk, qam4, qam16 };

  explicit Constellation(Kind kind) : kind_(kind) {}

  static Constellation from_name(const std::string& name) {
    if (name == "BPSK" || name == "bpsk") return Constellation(Kind::bpsk);
    if (name == "4-QAM" || name == "4qam" || name == "QPSK") return Constellation(Kind::qam4);
    if (name == "16-QAM" || name == "16qam") return Constellation(Kind::qam16);
    throw InvalidInput("unsupported constellation '" + name + "'");
  }

  Kind kind() const noexcept { return kind_; }

  std::string name() const {
    switch (kind_) {
      case Kind::bpsk: return "BPSK";
      case Kind::qam4: return "4-QAM";
      case Kind::qam16: return "16-QAM";
    }
    return {};
  }

  bool real_only() const noexcept { return kind_ == Kind::bpsk; }
  int levels() const noexcept { return kind_ == Kind::qam16 ? 4 : 2; }
  int bits_per_dim() const noexcept { return kind_ == Kind::qam16 ? 2 : 1; }
  int spins_per_dim() const noexcept { return bits_per_dim(); }
  int dims() const noexcept { return real_only() ? 1 : 2; }
  int bits_per_symbol() const noexcept { return bits_per_dim() * dims(); }
  std::size_t size() const noexcept {
    return real_only() ? levels() : static_cast<std::size_t>(levels() * levels());
  }

  /// Amplitude of level `idx`, ascending.
  double level(int idx) const noexcept { return 2.0 * idx - (levels() - 1); }

  /// Spin weights w with amplitude = sum_t w_t s_t (e.g. 2 s_a + s_b).
  std::vector<double> spin_weights() const {
    return kind_ == Kind::qam16 ? std::vector<double>{2.0, 1.0} : std::vector<double>{1.0};
  }

  Complex point(std::size_t index) const {
    if (real_only()) return {level(static_cast<int>(index)), 0.0};
    const int l = levels();
    return {level(static_cast<int>(index) / l), level(static_cast<int>(index) % l)};
  }

  Bits bits(std::size_t index) const {
    Bits out;
    if (real_only()) {
      append_label(out, static_cast<int>(index));
    } else {
      append_label(out, static_cast<int>(index) / levels());
      append_label(out, static_cast<int>(index) % levels());
    }
    return out;
  }

  /// Inverse of bits() for one symbol's worth of bits.
  std::size_t index_of(const Bits& bits, std::size_t offset = 0) const {
    auto read = [&](std::size_t pos) {
      int label = 0;
      for (int b = 0; b < bits_per_dim(); ++b) label = (label << 1) | bits.at(pos + b);
      int idx = label;  // Gray decode
      for (int shift = 1; shift < bits_per_dim(); shift <<= 1) idx ^= idx >> shift;
      return idx;
    };
    if (real_only()) return static_cast<std::size_t>(read(offset));
    return static_cast<std::size_t>(read(offset) * levels() + read(offset + bits_per_dim()));
  }

  /// Level index encoded by one dimension's spins.
  int level_from_spins(const int* spins) const noexcept {
    if (kind_ == Kind::qam16) return (2 * spins[0] + spins[1] + 3) / 2;
    return (spins[0] + 1) / 2;
  }

  /// Spins encoding level index `idx` of one dimension.
  std::vector<int> spins_for_level(int idx) const {
    if (kind_ == Kind::qam16) {
      const int u = static_cast<int>(level(idx));
      const int a = u > 0 ? 1 : -1;
      return {a, u - 2 * a};
    }
    return {idx == 1 ? 1 : -1};
  }

  friend bool operator==(const Constellation&, const Constellation&) = default;

 private:
  void append_label(Bits& out, int idx) const {
    const int label = idx ^ (idx >> 1);
    for (int b = bits_per_dim() - 1; b >= 0; --b) out.push_back(static_cast<std::uint8_t>((label >> b) & 1));
  }

  Kind kind_;
};

/// One MIMO channel use: y = H x + n.
struct MimoInstance {
  std::size_t n_t = 0;
  std::size_t n_r = 0;
  Constellation constellation{Constellation::Kind::qam16};
  /// Row-major n_r x n_t.
  std::vector<Complex> H;
  std::vector<Complex> x;
  std::vector<std::size_t> symbol_indices;
  std::vector<Complex> y;
  double noise_variance = 0.0;
  Bits tx_bits;

  Complex h(std::size_t r, std::size_t t) const { return H[r * n_t + t]; }
};

namespace detail {

// Circularly symmetric complex Gaussian with E|z|^2 = variance.
inline Complex complex_gaussian(Rng& rng, double variance) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  const double radius = std::sqrt(-std::log(u1) * variance);
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace detail

inline std::vector<Complex> apply_channel(const MimoInstance& inst, const std::vector<Complex>& u) {
  std::vector<Complex> out(inst.n_r);
  for (std::size_t r = 0; r < inst.n_r; ++r) {
    for (std::size_t t = 0; t < inst.n_t; ++t) out[r] += inst.h(r, t) * u[t];
  }
  return out;
}

/// Rayleigh channel (i.i.d. CN(0, 1) entries), uniform bits, Gray-mapped
/// symbols, and y = H x + n with n ~ CN(0, noise_variance).
inline MimoInstance generate_instance(std::size_t n_t, std::size_t n_r,
                                      const Constellation& constellation, double noise_variance,
                                      std::uint64_t seed) {
  if (n_t < 1 || n_r < 1) throw InvalidInput("need at least one transmit and one receive antenna");
  if (!(noise_variance >= 0.0)) throw InvalidInput("noise variance must be nonnegative");

  Rng rng(seed);
  MimoInstance inst;
  inst.n_t = n_t;
  inst.n_r = n_r;
  inst.constellation = constellation;
  inst.noise_variance = noise_variance;
  inst.H.resize(n_r * n_t);
  for (auto& entry : inst.H) entry = detail::complex_gaussian(rng, 1.0);
  for (std::size_t t = 0; t < n_t; ++t) {
    for (int b = 0; b < constellation.bits_per_symbol(); ++b) {
      inst.tx_bits.push_back(static_cast<std::uint8_t>(rng() >> 63));
    }
    const auto index = constellation.index_of(inst.tx_bits, t * constellation.bits_per_symbol());
    inst.symbol_indices.push_back(index);
    inst.x.push_back(constellation.point(index));
  }
  inst.y = apply_channel(inst, inst.x);
  if (noise_variance > 0.0) {
    for (auto& v : inst.y) v += detail::complex_gaussian(rng, noise_variance);
  }
  return inst;
}

inline double residual_norm(const MimoInstance& inst, const std::vector<Complex>& u) {
  const auto hu = apply_channel(inst, u);
  double sum = 0.0;
  for (std::size_t r = 0; r < inst.n_r; ++r) sum += std::norm(inst.y[r] - hu[r]);
  return sum;
}

/// Ising form of maximum-likelihood detection. For every spin config s,
/// energy(problem, s) + constant == ||y - H u(s)||^2.
///
/// Spin layout: real dimension d (Re x_0..Re x_{n_t-1}, then Im x_0..) owns
/// spins [d * spins_per_dim, (d + 1) * spins_per_dim).
struct MldReduction {
  IsingProblem problem;
  double constant = 0.0;
  std::size_t n_t = 0;
  Constellation constellation{Constellation::Kind::qam16};

  std::size_t real_dims() const noexcept { return n_t * constellation.dims(); }

  std::vector<std::size_t> symbols(const SpinConfig& s) const {
    if (s.size() < problem.size()) throw DimensionError("spin config shorter than the problem");
    const int spd = constellation.spins_per_dim();
    std::vector<int> spins(s.values().begin(), s.values().end());
    auto level = [&](std::size_t dim) { return constellation.level_from_spins(&spins[dim * spd]); };
    std::vector<std::size_t> out(n_t);
    for (std::size_t t = 0; t < n_t; ++t) {
      out[t] = constellation.real_only()
                   ? static_cast<std::size_t>(level(t))
                   : static_cast<std::size_t>(level(t) * constellation.levels() + level(n_t + t));
    }
    return out;
  }

  Bits bits(const SpinConfig& s) const {
    Bits out;
    for (auto index : symbols(s)) {
      const auto b = constellation.bits(index);
      out.insert(out.end(), b.begin(), b.end());
    }
    return out;
  }

  SpinConfig spins_for(const std::vector<std::size_t>& symbol_indices) const {
    std::vector<std::int8_t> spins(problem.size(), 1);
    const int spd = constellation.spins_per_dim();
    auto put = [&](std::size_t dim, int level_idx) {
      const auto v = constellation.spins_for_level(level_idx);
      for (int k = 0; k < spd; ++k) spins[dim * spd + k] = static_cast<std::int8_t>(v[k]);
    };
    for (std::size_t t = 0; t < n_t; ++t) {
      const auto idx = static_cast<int>(symbol_indices.at(t));
      if (constellation.real_only()) {
        put(t, idx);
      } else {
        put(t, idx / constellation.levels());
        put(n_t + t, idx % constellation.levels());
      }
    }
    return SpinConfig(std::move(spins));
  }
};

inline MldReduction mld_to_ising(const MimoInstance& inst) {
  const auto& c = inst.constellation;
  const std::size_t dims = inst.n_t * c.dims();
  const std::size_t rows = 2 * inst.n_r;
  const auto weights = c.spin_weights();
  const std::size_t spd = weights.size();
  const std::size_t m = dims * spd;

  // Real channel H_r (rows x dims): [[Re H, -Im H], [Im H, Re H]], or
  // [[Re H], [Im H]] for real-only constellations.
  std::vector<double> hr(rows * dims, 0.0);
  for (std::size_t r = 0; r < inst.n_r; ++r) {
    for (std::size_t t = 0; t < inst.n_t; ++t) {
      const auto v = inst.h(r, t);
      hr[r * dims + t] = v.real();
      hr[(inst.n_r + r) * dims + t] = v.imag();
      if (!c.real_only()) {
        hr[r * dims + inst.n_t + t] = -v.imag();
        hr[(inst.n_r + r) * dims + inst.n_t + t] = v.real();
      }
    }
  }
  std::vector<double> yr(rows);
  for (std::size_t r = 0; r < inst.n_r; ++r) {
    yr[r] = inst.y[r].real();
    yr[inst.n_r + r] = inst.y[r].imag();
  }

  // A = H_r D.
  std::vector<double> a(rows * m, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t d = 0; d < dims; ++d) {
      for (std::size_t k = 0; k < spd; ++k) a[r * m + d * spd + k] = hr[r * dims + d] * weights[k];
    }
  }

  SquareMatrix<double> j(m);
  std::vector<double> h(m, 0.0);
  double constant = 0.0;
  for (double v : yr) constant += v * v;
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) {
      double g = 0.0;
      for (std::size_t r = 0; r < rows; ++r) g += a[r * m + p] * a[r * m + q];
      if (p == q) {
        constant += g;
      } else {
        j(p, q) = -g;
      }
    }
    for (std::size_t r = 0; r < rows; ++r) h[p] += 2.0 * a[r * m + p] * yr[r];
  }
  return {IsingProblem(std::move(j), std::move(h)), constant, inst.n_t, c};
}

struct MldSolution {
  std::vector<std::size_t> symbol_indices;
  Bits bits;
  double residual = 0.0;
};

inline constexpr double kMaxMldSearch = 1e6;

/// Exhaustive maximum-likelihood detection over the constellation lattice.
/// Ties resolve to the lexicographically smallest symbol index tuple.
inline MldSolution mld_oracle(const MimoInstance& inst) {
  const auto& c = inst.constellation;
  const double space = std::pow(static_cast<double>(c.size()), static_cast<double>(inst.n_t));
  if (space > kMaxMldSearch) {
    throw BudgetError("MLD search space " + std::to_string(space) + " exceeds 1e6");
  }
  const auto total = static_cast<std::size_t>(space);
  std::vector<std::size_t> idx(inst.n_t, 0);
  std::vector<Complex> u(inst.n_t);
  MldSolution best;
  for (std::size_t code = 0; code < total; ++code) {
    auto rest = code;
    for (std::size_t t = inst.n_t; t-- > 0;) {
      idx[t] = rest % c.size();
      rest /= c.size();
      u[t] = c.point(idx[t]);
    }
    const double res = residual_norm(inst, u);
    if (code == 0 || res < best.residual) {
      best.symbol_indices = idx;
      best.residual = res;
    }
  }
  for (auto index : best.symbol_indices) {
    const auto b = c.bits(index);
    best.bits.insert(best.bits.end(), b.begin(), b.end());
  }
  return best;
}

inline std::size_t bit_errors(const Bits& tx, const Bits& rx) {
  if (tx.size() != rx.size()) throw DimensionError("bit strings differ in length");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < tx.size(); ++i) errors += tx[i] != rx[i];
  return errors;
}

/// Fraction of positions where the bit strings differ.
inline double ber(const Bits& tx, const Bits& rx) {
  if (tx.size() != rx.size()) {
    throw DimensionError("bit strings differ in length: " + std::to_string(tx.size()) + " vs " +
                         std::to_string(rx.size()));
  }
  if (tx.empty()) return 0.0;
  return static_cast<double>(bit_errors(tx, rx)) / static_cast<double>(tx.size());
}


}  // namespace mdising
