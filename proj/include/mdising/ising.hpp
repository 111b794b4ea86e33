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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdising/detail/ground_state.hpp"
#include "mdising/errors.hpp"
#include "mdising/matrix.hpp"
#include "mdising/spin_config.hpp"

namespace mdising {

/// Real-valued Ising problem: directed couplings J (J_ij and J_ji stored
/// separately, diagonal ignored) and an optional linear field h.
///
/// Energy convention: E(s) = -sum_{i != j} J_ij s_i s_j - sum_i h_i s_i.
class IsingProblem {
 public:
  explicit IsingProblem(std::size_t n) : couplings_(n, 0.0) {
    if (n == 0) throw InvalidInput("an Ising problem needs at least one spin");
  }

  IsingProblem(SquareMatrix<double> couplings, std::optional<std::vector<double>> field = {})
      : couplings_(std::move(couplings)), field_(std::move(field)) {
    const auto n = couplings_.size();
    if (n == 0) throw InvalidInput("an Ising problem needs at least one spin");
    if (field_ && field_->size() != n) {
      throw DimensionError("field has " + std::to_string(field_->size()) + " entries for " +
                           std::to_string(n) + " spins");
    }
    for (std::size_t i = 0; i < n; ++i) {
      couplings_(i, i) = 0.0;
      for (std::size_t j = 0; j < n; ++j) check_finite(couplings_(i, j));
      if (field_) check_finite((*field_)[i]);
    }
  }

  std::size_t size() const noexcept { return couplings_.size(); }

  double coupling(std::size_t i, std::size_t j) const noexcept { return couplings_(i, j); }

  /// J_ij + J_ji, the quantity that actually couples spins i and j.
  double pair_coupling(std::size_t i, std::size_t j) const noexcept {
    return couplings_(i, j) + couplings_(j, i);
  }

  void set_coupling(std::size_t i, std::size_t j, double value) {
    check_index(i);
    check_index(j);
    check_finite(value);
    if (i != j) couplings_(i, j) = value;
  }

  const SquareMatrix<double>& couplings() const noexcept { return couplings_; }

  bool has_field() const noexcept { return field_.has_value(); }

  /// True when some h_i is nonzero.
  bool has_linear_terms() const noexcept {
    return field_ && std::any_of(field_->begin(), field_->end(), [](double v) { return v != 0.0; });
  }

  double field(std::size_t i) const noexcept { return field_ ? (*field_)[i] : 0.0; }

  void set_field(std::size_t i, double value) {
    check_index(i);
    check_finite(value);
    if (!field_) field_.emplace(size(), 0.0);
    (*field_)[i] = value;
  }

  std::span<const double> field_values() const noexcept {
    return field_ ? std::span<const double>(*field_) : std::span<const double>{};
  }

  friend bool operator==(const IsingProblem&, const IsingProblem&) = default;

 private:
  static void check_finite(double v) {
    if (!std::isfinite(v)) throw InvalidInput("Ising coefficients must be finite");
  }
  void check_index(std::size_t i) const {
    if (i >= size()) {
      throw InvalidInput("spin index " + std::to_string(i) + " out of range for " +
                         std::to_string(size()) + " spins");
    }
  }

  SquareMatrix<double> couplings_;
  std::optional<std::vector<double>> field_;
};

inline double energy(const IsingProblem& problem, const SpinConfig& config) {
  const auto n = problem.size();
  if (config.size() != n) {
    throw DimensionError("config has " + std::to_string(config.size()) + " spins, problem has " +
                         std::to_string(n));
  }
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) e -= problem.coupling(i, j) * config[i] * config[j];
    }
  }
  for (std::size_t i = 0; i < problem.field_values().size(); ++i) {
    e -= problem.field(i) * config[i];
  }
  return e;
}

// Slack for round-off when checking |J_ij + J_ji| <= 2 after a division.
inline constexpr double kNormalizationSlack = 1e-12;

/// Largest pair coupling |J_ij + J_ji| / 2 or field |h_i|.
inline double coefficient_scale(const IsingProblem& problem) noexcept {
  double scale = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    for (std::size_t j = i + 1; j < problem.size(); ++j) {
      scale = std::max(scale, std::abs(problem.pair_coupling(i, j)) / 2.0);
    }
    scale = std::max(scale, std::abs(problem.field(i)));
  }
  return scale;
}

inline bool is_normalized(const IsingProblem& problem) noexcept {
  return coefficient_scale(problem) <= 1.0 + kNormalizationSlack;
}

struct Normalized {
  IsingProblem problem;
  double scale;
};

/// Divides every coefficient by the largest pair coupling (halved) or field
/// magnitude, so all |J_ij + J_ji| <= 2 and |h_i| <= 1. Positive scaling
/// keeps the energy ordering of configurations.
inline Normalized normalize(const IsingProblem& problem) {
  const double scale = coefficient_scale(problem);
  if (scale == 0.0) throw InvalidInput("cannot normalize an all-zero problem");
  if (scale == 1.0) return {problem, 1.0};

  const auto n = problem.size();
  SquareMatrix<double> j(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) j(a, b) = problem.coupling(a, b) / scale;
  }
  std::optional<std::vector<double>> h;
  if (problem.has_field()) {
    h.emplace(n);
    for (std::size_t a = 0; a < n; ++a) (*h)[a] = problem.field(a) / scale;
  }
  return {IsingProblem(std::move(j), std::move(h)), scale};
}

struct Absorbed {
  IsingProblem problem;
  /// Index of the added ancilla spin (always the last one), if any.
  std::optional<std::size_t> ancilla;
};

/// Replaces the linear field by couplings to one extra ancilla spin a with
/// J_{a,i} = h_i. On configs with s_a = +1 the energies agree exactly.
inline Absorbed absorb_linear_terms(const IsingProblem& problem) {
  if (!problem.has_linear_terms()) return {problem, std::nullopt};

  const auto n = problem.size();
  SquareMatrix<double> j(n + 1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) j(a, b) = problem.coupling(a, b);
    j(n, a) = problem.field(a);
  }
  return {IsingProblem(std::move(j)), n};
}

struct GroundState {
  SpinConfig config;
  double energy;
};

inline constexpr std::size_t kMaxEnumerationSpins = 24;

/// Exhaustive global minimum. Ties go to the lex_less-smallest config.
inline GroundState brute_force_ground_state(const IsingProblem& problem) {
  const auto n = problem.size();
  if (n > kMaxEnumerationSpins) {
    throw BudgetError("brute force is limited to " + std::to_string(kMaxEnumerationSpins) +
                      " spins, problem has " + std::to_string(n));
  }
  SquareMatrix<double> w(n);
  double magnitude = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      w(i, j) = i == j ? 0.0 : problem.pair_coupling(i, j);
      magnitude += std::abs(problem.coupling(i, j));
    }
    magnitude += std::abs(problem.field(i));
  }
  std::vector<double> field(problem.field_values().begin(), problem.field_values().end());
  auto exact = [&problem](const SpinConfig& s) { return energy(problem, s); };
  auto best = detail::gray_code_minimum<double>(w, field, exact, 1e-9 * magnitude);
  return {std::move(best.config), best.energy};
}

}  // namespace mdising
