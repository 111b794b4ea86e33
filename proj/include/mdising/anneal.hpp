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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "mdising/detail/ground_state.hpp"
#include "mdising/errors.hpp"
#include "mdising/hardware.hpp"
#include "mdising/ising.hpp"
#include "mdising/matrix.hpp"
#include "mdising/spin_config.hpp"

namespace mdising {

/// SplitMix64 output function.
inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed number `index` of `seed`. Independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// xoshiro256** seeded through SplitMix64. Fixed output sequence on every
/// platform, unlike the standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    for (auto& word : state_) {
      seed += 0x9e3779b97f4a7c15ULL;
      word = mix64(seed);
    }
  }

  std::uint64_t operator()() noexcept {
    const auto result = rotl(state_[1] * 5, 7) * 9;
    const auto t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

struct AnnealParams {
  int n_anneals = 50;
  int sweeps_per_anneal = 200;
  double beta_initial = 0.01;
  double beta_final = 3.0;
  std::uint64_t seed = 0;

  void check() const {
    if (n_anneals < 1) throw InvalidInput("n_anneals must be at least 1");
    if (sweeps_per_anneal < 1) throw InvalidInput("sweeps_per_anneal must be at least 1");
    if (!(beta_initial > 0.0) || !(beta_final >= beta_initial)) {
      throw InvalidInput("need 0 < beta_initial <= beta_final");
    }
  }

  /// Inverse temperature of sweep `t` on the geometric schedule.
  double beta_at(int t) const {
    if (sweeps_per_anneal == 1) return beta_final;
    const double frac = static_cast<double>(t) / (sweeps_per_anneal - 1);
    return beta_initial * std::pow(beta_final / beta_initial, frac);
  }

  friend bool operator==(const AnnealParams&, const AnnealParams&) = default;
};

struct AnnealRun {
  SpinConfig config;
  std::int64_t energy = 0;
  /// Incrementally tracked energy matched a full recomputation.
  bool bookkeeping_ok = true;
};

struct AnnealResult {
  SpinConfig best;
  std::int64_t best_energy = 0;
  std::vector<std::int64_t> anneal_energies;
  std::size_t bookkeeping_failures = 0;
};

namespace detail {

inline SquareMatrix<std::int64_t> pair_weights(const DeviceProgram& program) {
  const auto n = program.size();
  SquareMatrix<std::int64_t> w(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) w(i, j) = std::int64_t{program.coupling(i, j)} + program.coupling(j, i);
    }
  }
  return w;
}

inline AnnealRun anneal_once(const DeviceProgram& program, const SquareMatrix<std::int64_t>& w,
                             const AnnealParams& params, std::uint64_t seed) {
  const auto n = program.size();
  Rng rng(seed);
  SpinConfig s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() & 1U) s.flip(i);
  }

  std::vector<std::int64_t> local(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) local[i] += w(i, j) * s[j];
  }
  std::int64_t e = program_energy(program, s);

  for (int sweep = 0; sweep < params.sweeps_per_anneal; ++sweep) {
    const double beta = params.beta_at(sweep);
    for (std::size_t k = 0; k < n; ++k) {
      const std::int64_t delta = 2 * s[k] * local[k];
      if (delta > 0 && rng.uniform() >= std::exp(-beta * static_cast<double>(delta))) continue;
      const std::int64_t step = -2 * s[k];
      for (std::size_t j = 0; j < n; ++j) local[j] += step * w(j, k);
      s.flip(k);
      e += delta;
    }
  }
  const auto recomputed = program_energy(program, s);
  return {std::move(s), recomputed, recomputed == e};
}

}  // namespace detail

/// Best-of-N Metropolis simulated annealing on an integer device program.
/// Anneal k draws from derive_seed(params.seed, k), so results do not
/// depend on `jobs` and the first m anneals of a longer run reproduce a
/// run with n_anneals = m.
inline AnnealResult solve(const DeviceProgram& program, const AnnealParams& params,
                          unsigned jobs = 1) {
  params.check();
  const auto w = detail::pair_weights(program);
  const auto count = static_cast<std::size_t>(params.n_anneals);
  std::vector<AnnealRun> runs(count);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < count; k += stride) {
      runs[k] = detail::anneal_once(program, w, params, derive_seed(params.seed, k));
    }
  };
  jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(count));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work, t, jobs);
  }

  AnnealResult result;
  result.anneal_energies.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    result.anneal_energies.push_back(runs[k].energy);
    if (!runs[k].bookkeeping_ok) ++result.bookkeeping_failures;
    if (k == 0 || runs[k].energy < result.best_energy) {
      result.best = runs[k].config;
      result.best_energy = runs[k].energy;
    }
  }
  return result;
}

struct ProgramMinimum {
  SpinConfig config;
  std::int64_t energy;
};

/// Exhaustive minimum of a device program, same tie-break as
/// brute_force_ground_state.
inline ProgramMinimum solve_exact(const DeviceProgram& program) {
  const auto n = program.size();
  if (n > kMaxEnumerationSpins) {
    throw BudgetError("exact solve is limited to " + std::to_string(kMaxEnumerationSpins) +
                      " spins, program has " + std::to_string(n));
  }
  if (n == 0) return {SpinConfig{}, 0};
  auto exact = [&program](const SpinConfig& s) { return program_energy(program, s); };
  auto best = detail::gray_code_minimum<std::int64_t>(detail::pair_weights(program), {}, exact, 0);
  return {std::move(best.config), best.energy};
}

}  // namespace mdising
