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
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdising/errors.hpp"
#include "mdising/hardware.hpp"
#include "mdising/ising.hpp"
#include "mdising/matrix.hpp"
#include "mdising/spin_config.hpp"

namespace mdising {

/// Parameters of a multi-digit base-q mapping.
struct MultiDigitConfig {
  int digits = 3;
  int q = 5;
  /// Strength of every replica-alignment coupling. Defaults to c_max.
  std::optional<int> penalty_weight;

  int penalty_for(const HardwareProfile& profile) const {
    return penalty_weight.value_or(profile.c_max);
  }
};

/// Largest magnitude representable with `digits` base-q digits:
/// (q-1)(q+1) for two digits, (q-1)(q^2+q+1) for three. One digit gives q-1.
inline std::int64_t max_magnitude(int digits, int q) {
  if (digits < 1) throw InvalidInput("digits must be positive");
  if (q < 2) throw InvalidInput("base q must be at least 2");
  std::int64_t place = 1;
  std::int64_t sum = 0;
  for (int d = 0; d < digits; ++d) {
    sum += place;
    place *= q;
  }
  return (q - 1) * sum;
}

/// Throws InvalidInput for unusable configurations and returns warnings for
/// legal but borderline ones (q = c_max + 1).
inline std::vector<std::string> check_config(const MultiDigitConfig& cfg,
                                             const HardwareProfile& profile) {
  std::vector<std::string> warnings;
  if (cfg.digits != 2 && cfg.digits != 3) {
    throw InvalidInput("digits must be 2 or 3, got " + std::to_string(cfg.digits));
  }
  if (cfg.q < 2) throw InvalidInput("base q must be at least 2, got " + std::to_string(cfg.q));
  if (cfg.q > profile.c_max + 1) {
    throw InvalidInput("base q = " + std::to_string(cfg.q) + " exceeds c_max + 1 = " +
                       std::to_string(profile.c_max + 1));
  }
  if (cfg.q == profile.c_max + 1) {
    warnings.push_back("base q = c_max + 1 = " + std::to_string(cfg.q) +
                       "; digits reach c_max exactly");
  }
  const int penalty = cfg.penalty_for(profile);
  if (penalty < 1 || penalty > profile.c_max) {
    throw InvalidInput("penalty weight " + std::to_string(penalty) + " must lie in [1, c_max = " +
                       std::to_string(profile.c_max) + "]");
  }
  return warnings;
}

/// K'_ij = ceil(m_q (J_ij + J_ji) / 2), K'_ji = floor(...), for i < j.
inline SquareMatrix<std::int64_t> lifted_quantize(const IsingProblem& problem, std::int64_t m_q) {
  if (m_q < 1) throw InvalidInput("m_q must be positive");
  return detail::split_quantize(problem, m_q);
}

struct DigitTriple {
  int a = 0;
  int b = 0;
  int c = 0;

  friend bool operator==(const DigitTriple&, const DigitTriple&) = default;
};

/// Signed base-q digits of k: q^2 a + q b + c == k, all digits share the
/// sign of k and have magnitude at most q - 1.
inline DigitTriple digit_decompose_3(std::int64_t k, int q) {
  const auto bound = max_magnitude(3, q);
  if (k < -bound || k > bound) {
    throw InvalidInput(std::to_string(k) + " is outside the 3-digit base-" + std::to_string(q) +
                       " range [-" + std::to_string(bound) + ", " + std::to_string(bound) + "]");
  }
  const int sign = k < 0 ? -1 : 1;
  auto m = static_cast<int>(std::llabs(k));
  const int c = m % q;
  m /= q;
  const int b = m % q;
  const int a = m / q;
  return {sign * a, sign * b, sign * c};
}

/// Signed 2-digit split k = q f + g with f, g sharing the sign of k.
struct DigitPair {
  int f = 0;
  int g = 0;

  friend bool operator==(const DigitPair&, const DigitPair&) = default;
};

inline DigitPair digit_decompose_2(std::int64_t k, int q) {
  const auto bound = max_magnitude(2, q);
  if (k < -bound || k > bound) {
    throw InvalidInput(std::to_string(k) + " is outside the 2-digit base-" + std::to_string(q) +
                       " range [-" + std::to_string(bound) + ", " + std::to_string(bound) + "]");
  }
  const int sign = k < 0 ? -1 : 1;
  const auto m = static_cast<int>(std::llabs(k));
  return {sign * (m / q), sign * (m % q)};
}

/// Which identity the product term follows: q f + g (base_q) or
/// (q + 1) f + (g - f) (base_q_plus_one).
enum class Formulation { base_q, base_q_plus_one };

inline const char* to_string(Formulation f) noexcept {
  return f == Formulation::base_q ? "q" : "q+1";
}

/// alpha * beta * gamma == product target, plus a direct residual coupling.
/// beta replicas of the row spin and gamma replicas of the column spin are
/// coupled pairwise with strength alpha.
struct Factorization {
  Formulation formulation = Formulation::base_q;
  int alpha = 0;
  int beta = 1;
  int gamma = 1;
  int residual = 0;

  std::int64_t product() const noexcept { return std::int64_t{alpha} * beta * gamma; }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

struct Triple {
  int alpha;
  int beta;
  int gamma;
};

// Ranking key: fewest replicas on the larger side, then fewest in total,
// then weakest coupling, then smaller beta.
inline auto triple_key(const Triple& t) {
  return std::make_tuple(std::max(t.beta, t.gamma), t.beta + t.gamma, std::abs(t.alpha), t.beta);
}

// Best factorization of a nonzero target with |alpha| <= c_max and
// beta, gamma >= 1. alpha carries the sign of the target.
inline std::optional<Triple> best_triple(std::int64_t target, int c_max) {
  const auto magnitude = std::llabs(target);
  const int sign = target < 0 ? -1 : 1;
  std::optional<Triple> best;
  for (int alpha = 1; alpha <= c_max && alpha <= magnitude; ++alpha) {
    if (magnitude % alpha != 0) continue;
    const auto rest = magnitude / alpha;
    for (std::int64_t beta = 1; beta <= rest; ++beta) {
      if (rest % beta != 0) continue;
      const Triple t{sign * alpha, static_cast<int>(beta), static_cast<int>(rest / beta)};
      if (!best || triple_key(t) < triple_key(*best)) best = t;
    }
  }
  return best;
}

}  // namespace detail

/// Chooses how to realize the high digit f of a 2-digit coefficient
/// (q f + g) with the fewest spin replicas. Both product targets q f and
/// (q + 1) f are factorized with |alpha| <= c_max minimizing max(beta, gamma);
/// the formulation with the smaller maximum wins, ties going to base_q.
inline Factorization factorize_min_copies(int f, int g, int q, int c_max) {
  if (f == 0) throw InvalidInput("f = 0 needs no factorization");
  if (std::abs(f) > q - 1 || std::abs(g) > q - 1) {
    throw InvalidInput("digits must have magnitude at most q - 1");
  }
  if (g != 0 && (g < 0) != (f < 0)) throw InvalidInput("digits f and g must share a sign");
  if (q > c_max + 1) throw InvalidInput("base q exceeds c_max + 1");

  const auto a = detail::best_triple(std::int64_t{q} * f, c_max);
  const auto b = detail::best_triple(std::int64_t{q + 1} * f, c_max);
  if (!a) throw InvariantError("no admissible factorization of q f");

  if (b && std::max(b->beta, b->gamma) < std::max(a->beta, a->gamma)) {
    return {Formulation::base_q_plus_one, b->alpha, b->beta, b->gamma, g - f};
  }
  return {Formulation::base_q, a->alpha, a->beta, a->gamma, g};
}

/// How one ordered pair (i, j) of original spins was encoded.
struct EdgeTerm {
  std::size_t i = 0;
  std::size_t j = 0;
  /// The quantized coefficient K'_ij being represented.
  std::int64_t value = 0;
  /// 3-digit digits (zero otherwise).
  DigitTriple digits3;
  /// 2-digit digits (zero otherwise).
  DigitPair digits2;
  /// Present for 2-digit edges with f != 0.
  std::optional<Factorization> factor;

  friend bool operator==(const EdgeTerm&, const EdgeTerm&) = default;
};

/// Everything needed to interpret a compiled device program in terms of
/// the original spins.
struct MappingPlan {
  /// 1 for the native mapping.
  int digits = 1;
  int q = 0;
  std::int64_t m_q = 0;
  int penalty_weight = 0;
  std::size_t n_original = 0;
  std::size_t n_device = 0;
  /// groups[i][0] == i is the original; the rest are its replicas.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<EdgeTerm> edge_terms;
  /// The integer matrix K' the device program encodes.
  SquareMatrix<std::int64_t> quantized;

  friend bool operator==(const MappingPlan&, const MappingPlan&) = default;
};

struct CompiledProgram {
  DeviceProgram program;
  MappingPlan plan;
  std::vector<std::string> warnings;
};

namespace detail {

inline void require_fits(std::size_t needed, const HardwareProfile& profile) {
  if (needed > static_cast<std::size_t>(profile.max_spins)) {
    throw BudgetError("mapping requires " + std::to_string(needed) + " spins, profile allows " +
                      std::to_string(profile.max_spins));
  }
}

inline void assert_valid(const DeviceProgram& program, const HardwareProfile& profile) {
  const auto report = validate(program, profile);
  if (!report.ok()) {
    throw InvariantError("compiled program violates the profile: " +
                         report.violations.front().message);
  }
}

inline void add_group_penalties(DeviceProgram& program, const std::vector<std::size_t>& group,
                                int weight) {
  for (auto u : group) {
    for (auto v : group) {
      if (u != v) program.set_coupling(u, v, weight);
    }
  }
}

inline MappingPlan singleton_plan(std::size_t n) {
  MappingPlan plan;
  plan.n_original = n;
  plan.n_device = n;
  plan.groups.resize(n);
  for (std::size_t i = 0; i < n; ++i) plan.groups[i] = {i};
  return plan;
}

}  // namespace detail

/// Native ceil/floor mapping wrapped as a plan with one spin per group.
inline CompiledProgram map_native(const IsingProblem& problem, const HardwareProfile& profile) {
  CompiledProgram out{native_quantize(problem, profile), detail::singleton_plan(problem.size()),
                      {}};
  out.plan.q = profile.c_max + 1;
  out.plan.m_q = profile.c_max;
  out.plan.quantized = detail::split_quantize(problem, profile.c_max);
  return out;
}

/// 3-digit mapping. Each original spin i gets q replicas s_{i,1..q}; the
/// term K'_ij s_i s_j becomes
///   a_ij (sum_k s_{i,k})(sum_l s_{j,l}) + b_ij (sum_k s_{i,k}) s_j + c_ij s_i s_j
/// and every replica is tied to the original and to each other replica
/// with the penalty weight.
inline CompiledProgram map_three_digit(const IsingProblem& problem, const HardwareProfile& profile,
                                       const MultiDigitConfig& cfg) {
  if (cfg.digits != 3) throw InvalidInput("map_three_digit needs digits = 3");
  auto warnings = check_config(cfg, profile);
  detail::require_device_ready(problem);

  const auto n = problem.size();
  const auto q = static_cast<std::size_t>(cfg.q);
  detail::require_fits(n * (q + 1), profile);

  MappingPlan plan;
  plan.digits = 3;
  plan.q = cfg.q;
  plan.m_q = max_magnitude(3, cfg.q);
  plan.penalty_weight = cfg.penalty_for(profile);
  plan.n_original = n;
  plan.n_device = n * (q + 1);
  plan.quantized = lifted_quantize(problem, plan.m_q);
  plan.groups.resize(n);
  auto replica = [n, q](std::size_t i, std::size_t k) { return n + i * q + k; };
  for (std::size_t i = 0; i < n; ++i) {
    plan.groups[i].push_back(i);
    for (std::size_t k = 0; k < q; ++k) plan.groups[i].push_back(replica(i, k));
  }

  DeviceProgram program(plan.n_device);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto value = plan.quantized(i, j);
      if (i == j || value == 0) continue;
      const auto d = digit_decompose_3(value, cfg.q);
      plan.edge_terms.push_back({i, j, value, d, {}, std::nullopt});
      for (std::size_t k = 0; k < q; ++k) {
        if (d.a != 0) {
          for (std::size_t l = 0; l < q; ++l) program.add_coupling(replica(i, k), replica(j, l), d.a);
        }
        if (d.b != 0) program.add_coupling(replica(i, k), j, d.b);
      }
      if (d.c != 0) program.add_coupling(i, j, d.c);
    }
  }
  for (const auto& group : plan.groups) {
    detail::add_group_penalties(program, group, plan.penalty_weight);
  }
  detail::assert_valid(program, profile);
  return {std::move(program), std::move(plan), std::move(warnings)};
}

/// 2-digit mapping. K'_ij = q f + g; when f != 0 the product part is
/// realized as alpha between the first beta replicas of i and the first
/// gamma replicas of j (the original counts as replica one), and the
/// residual is packed onto free capacity between the two groups. Replicas
/// are shared by all edges of a spin.
inline CompiledProgram map_two_digit(const IsingProblem& problem, const HardwareProfile& profile,
                                     const MultiDigitConfig& cfg) {
  if (cfg.digits != 2) throw InvalidInput("map_two_digit needs digits = 2");
  auto warnings = check_config(cfg, profile);
  detail::require_device_ready(problem);

  const auto n = problem.size();
  detail::require_fits(n, profile);

  MappingPlan plan;
  plan.digits = 2;
  plan.q = cfg.q;
  plan.m_q = max_magnitude(2, cfg.q);
  plan.penalty_weight = cfg.penalty_for(profile);
  plan.n_original = n;
  plan.quantized = lifted_quantize(problem, plan.m_q);

  std::vector<std::size_t> replicas(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto value = plan.quantized(i, j);
      if (i == j || value == 0) continue;
      EdgeTerm term{i, j, value, {}, digit_decompose_2(value, cfg.q), std::nullopt};
      if (term.digits2.f != 0) {
        term.factor = factorize_min_copies(term.digits2.f, term.digits2.g, cfg.q, profile.c_max);
        replicas[i] = std::max(replicas[i], static_cast<std::size_t>(term.factor->beta));
        replicas[j] = std::max(replicas[j], static_cast<std::size_t>(term.factor->gamma));
      }
      plan.edge_terms.push_back(term);
    }
  }

  plan.groups.resize(n);
  std::size_t next = n;
  for (std::size_t i = 0; i < n; ++i) {
    plan.groups[i].push_back(i);
    for (std::size_t r = 1; r < replicas[i]; ++r) plan.groups[i].push_back(next++);
  }

  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> entries;
  for (const auto& term : plan.edge_terms) {
    if (!term.factor) continue;
    const auto& gi = plan.groups[term.i];
    const auto& gj = plan.groups[term.j];
    for (int k = 0; k < term.factor->beta; ++k) {
      for (int l = 0; l < term.factor->gamma; ++l) entries[{gi[k], gj[l]}] += term.factor->alpha;
    }
  }

  const std::int64_t c_max = profile.c_max;
  for (const auto& term : plan.edge_terms) {
    const std::int64_t residual = term.factor ? term.factor->residual : term.digits2.g;
    if (residual == 0) continue;
    const std::int64_t sign = residual < 0 ? -1 : 1;
    std::int64_t remaining = std::llabs(residual);
    while (remaining > 0) {
      for (const auto& [from, to] : {std::pair{term.i, term.j}, std::pair{term.j, term.i}}) {
        for (auto u : plan.groups[from]) {
          for (auto v : plan.groups[to]) {
            if (remaining == 0) break;
            auto& slot = entries[{u, v}];
            const auto room = c_max - sign * slot;
            if (room <= 0) continue;
            const auto take = std::min(room, remaining);
            slot += sign * take;
            remaining -= take;
          }
        }
      }
      if (remaining > 0) {
        const auto grow = plan.groups[term.i].size() <= plan.groups[term.j].size() ? term.i : term.j;
        plan.groups[grow].push_back(next++);
      }
    }
  }

  plan.n_device = next;
  detail::require_fits(plan.n_device, profile);

  DeviceProgram program(plan.n_device);
  for (const auto& [key, value] : entries) {
    if (value != 0) program.set_coupling(key.first, key.second, static_cast<std::int32_t>(value));
  }
  for (const auto& group : plan.groups) {
    detail::add_group_penalties(program, group, plan.penalty_weight);
  }
  detail::assert_valid(program, profile);
  return {std::move(program), std::move(plan), std::move(warnings)};
}

inline CompiledProgram map_multi_digit(const IsingProblem& problem, const HardwareProfile& profile,
                                       const MultiDigitConfig& cfg) {
  return cfg.digits == 2 ? map_two_digit(problem, profile, cfg)
                         : map_three_digit(problem, profile, cfg);
}

/// Device config in which every replica copies its original spin.
inline SpinConfig coherent_extend(const SpinConfig& original, const MappingPlan& plan) {
  if (original.size() != plan.n_original) {
    throw DimensionError("config has " + std::to_string(original.size()) + " spins, plan has " +
                         std::to_string(plan.n_original) + " original spins");
  }
  SpinConfig device(plan.n_device);
  for (std::size_t i = 0; i < plan.groups.size(); ++i) {
    for (auto u : plan.groups[i]) device.set(u, original[i]);
  }
  return device;
}

/// Majority vote per group; an exact tie keeps the original spin's value.
inline SpinConfig decode(const SpinConfig& device, const MappingPlan& plan) {
  if (device.size() != plan.n_device) {
    throw DimensionError("device config has " + std::to_string(device.size()) +
                         " spins, plan expects " + std::to_string(plan.n_device));
  }
  SpinConfig out(plan.n_original);
  for (std::size_t i = 0; i < plan.groups.size(); ++i) {
    int votes = 0;
    for (auto u : plan.groups[i]) votes += device[u];
    out.set(i, votes > 0 ? 1 : votes < 0 ? -1 : device[plan.groups[i].front()]);
  }
  return out;
}

/// Number of replicas whose value differs from their group's original.
inline std::size_t coherence_violations(const SpinConfig& device, const MappingPlan& plan) {
  std::size_t count = 0;
  for (const auto& group : plan.groups) {
    for (std::size_t r = 1; r < group.size(); ++r) {
      if (device[group[r]] != device[group.front()]) ++count;
    }
  }
  return count;
}

}  // namespace mdising
