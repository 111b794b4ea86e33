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
#include <vector>

#include "mdising/errors.hpp"
#include "mdising/ising.hpp"
#include "mdising/matrix.hpp"

namespace mdising {

/// Coupling precision and size limits of an Ising device.
struct HardwareProfile {
  /// Bound on each directed integer entry: |K_ij| <= c_max.
  int c_max = 7;
  int max_spins = 59;

  HardwareProfile() = default;
  HardwareProfile(int c_max_, int max_spins_) : c_max(c_max_), max_spins(max_spins_) {
    if (c_max < 1) throw InvalidInput("c_max must be at least 1");
    if (max_spins < 2) throw InvalidInput("max_spins must be at least 2");
  }

  /// COBI oscillator chip: 29 pair coupling levels in [-14, 14], 59 spins.
  static HardwareProfile cobi() { return {7, 59}; }

  friend bool operator==(const HardwareProfile&, const HardwareProfile&) = default;
};

/// Integer directed couplings for a device. Energy is
/// E(s) = -sum_{i != j} K_ij s_i s_j.
class DeviceProgram {
 public:
  DeviceProgram() = default;
  explicit DeviceProgram(std::size_t n) : k_(n, 0) {}

  std::size_t size() const noexcept { return k_.size(); }

  std::int32_t coupling(std::size_t i, std::size_t j) const noexcept { return k_(i, j); }

  /// Diagonal entries may be stored (so file input can be validated) but
  /// never contribute to the energy.
  void set_coupling(std::size_t i, std::size_t j, std::int32_t value) {
    check_index(i);
    check_index(j);
    k_(i, j) = value;
  }
  void add_coupling(std::size_t i, std::size_t j, std::int32_t delta) {
    check_index(i);
    check_index(j);
    k_(i, j) += delta;
  }

  const SquareMatrix<std::int32_t>& couplings() const noexcept { return k_; }

  friend bool operator==(const DeviceProgram&, const DeviceProgram&) = default;

 private:
  void check_index(std::size_t i) const {
    if (i >= size()) {
      throw InvalidInput("device spin " + std::to_string(i) + " out of range for " +
                         std::to_string(size()) + " spins");
    }
  }

  SquareMatrix<std::int32_t> k_;
};

struct Violation {
  enum class Kind { coupling_bound, non_integer, spin_budget, diagonal };

  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return violations.empty(); }
};

/// Lists every bound the program breaks; an empty report means valid.
inline ValidationReport validate(const DeviceProgram& program, const HardwareProfile& profile) {
  ValidationReport report;
  const auto n = program.size();
  if (n > static_cast<std::size_t>(profile.max_spins)) {
    report.violations.push_back({Violation::Kind::spin_budget, 0, 0, static_cast<double>(n),
                                 "program uses " + std::to_string(n) + " spins, profile allows " +
                                     std::to_string(profile.max_spins)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto k = program.coupling(i, j);
      if (i == j) {
        if (k != 0) {
          report.violations.push_back({Violation::Kind::diagonal, i, j, static_cast<double>(k),
                                       "nonzero diagonal entry (" + std::to_string(i) + "," +
                                           std::to_string(j) + ") = " + std::to_string(k)});
        }
      } else if (std::abs(k) > profile.c_max) {
        report.violations.push_back(
            {Violation::Kind::coupling_bound, i, j, static_cast<double>(k),
             "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(k) +
                 " exceeds c_max " + std::to_string(profile.c_max)});
      }
    }
  }
  return report;
}

inline std::int64_t program_energy(const DeviceProgram& program, const SpinConfig& config) {
  const auto n = program.size();
  if (config.size() != n) {
    throw DimensionError("config has " + std::to_string(config.size()) + " spins, program has " +
                         std::to_string(n));
  }
  std::int64_t e = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) row += static_cast<std::int64_t>(program.coupling(i, j)) * config[j];
    }
    e -= row * config[i];
  }
  return e;
}

namespace detail {

inline void require_device_ready(const IsingProblem& problem) {
  if (problem.has_linear_terms()) {
    throw InvalidInput("problem has linear terms; absorb them into an ancilla first");
  }
  if (!is_normalized(problem)) {
    throw InvalidInput("problem is not normalized: some |J_ij + J_ji| exceeds 2");
  }
}

/// Splits round(range * (J_ij + J_ji) / 2) across the pair as ceil / floor,
/// the larger half on the entry with i < j.
inline SquareMatrix<std::int64_t> split_quantize(const IsingProblem& problem, std::int64_t range) {
  require_device_ready(problem);
  const auto n = problem.size();
  const auto bound = static_cast<double>(range);
  SquareMatrix<std::int64_t> k(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double x = bound * problem.pair_coupling(i, j) / 2.0;
      x = std::clamp(x, -bound, bound);
      // Integral targets must not pick up a spurious ceil step from round-off.
      if (const double r = std::round(x); std::abs(x - r) <= 1e-9 * (1.0 + std::abs(r))) x = r;
      k(i, j) = static_cast<std::int64_t>(std::ceil(x));
      k(j, i) = static_cast<std::int64_t>(std::floor(x));
    }
  }
  return k;
}

}  // namespace detail

/// Baseline mapping: K_ij = ceil(c_max (J_ij + J_ji) / 2), K_ji = floor(...).
/// Expects a normalized problem without linear terms.
inline DeviceProgram native_quantize(const IsingProblem& problem, const HardwareProfile& profile) {
  if (problem.size() > static_cast<std::size_t>(profile.max_spins)) {
    throw BudgetError("problem needs " + std::to_string(problem.size()) +
                      " spins, profile allows " + std::to_string(profile.max_spins));
  }
  const auto k = detail::split_quantize(problem, profile.c_max);
  DeviceProgram program(problem.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      program.set_coupling(i, j, static_cast<std::int32_t>(k(i, j)));
    }
  }
  return program;
}

}  // namespace mdising
