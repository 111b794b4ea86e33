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

#include <cstddef>
#include <optional>
#include <string>

#include "mdising/anneal.hpp"
#include "mdising/errors.hpp"
#include "mdising/hardware.hpp"
#include "mdising/ising.hpp"
#include "mdising/mimo.hpp"
#include "mdising/multidigit.hpp"

namespace mdising {

enum class MappingKind {
  /// Unquantized problem, exhaustive solve. Reference arm.
  exact_float,
  native,
  multi_digit,
};

inline std::string to_string(MappingKind kind) {
  switch (kind) {
    case MappingKind::exact_float: return "float";
    case MappingKind::native: return "native";
    case MappingKind::multi_digit: return "multidigit";
  }
  return {};
}

struct PipelineConfig {
  MappingKind mapping = MappingKind::native;
  MultiDigitConfig multi_digit;
  HardwareProfile profile = HardwareProfile::cobi();
  AnnealParams anneal;
  /// Solve the device program exhaustively instead of annealing.
  bool exact_solver = false;
  unsigned jobs = 1;
};

/// Compile-side state of one detection: the Ising reduction and, for the
/// quantized paths, the device program with its mapping plan.
struct DetectionPlan {
  MldReduction reduction;
  /// Normalized, field-free problem handed to the mapping.
  IsingProblem device_ready;
  std::optional<std::size_t> ancilla;
  std::optional<CompiledProgram> compiled;
};

struct Diagnostics {
  double solver_energy = 0.0;
  std::size_t coherence_violations = 0;
  std::size_t spins_used = 0;
};

struct Detection {
  Bits bits;
  /// Gauge-fixed spins of the reduction (ancilla removed).
  SpinConfig spins;
  Diagnostics diagnostics;
};

inline DetectionPlan prepare_detection(const MimoInstance& instance, const PipelineConfig& config) {
  auto reduction = mld_to_ising(instance);
  auto normalized = normalize(reduction.problem);
  auto absorbed = absorb_linear_terms(normalized.problem);
  DetectionPlan plan{std::move(reduction), std::move(absorbed.problem), absorbed.ancilla,
                     std::nullopt};
  try {
    switch (config.mapping) {
      case MappingKind::exact_float:
        break;
      case MappingKind::native:
        plan.compiled = map_native(plan.device_ready, config.profile);
        break;
      case MappingKind::multi_digit:
        plan.compiled = map_multi_digit(plan.device_ready, config.profile, config.multi_digit);
        break;
    }
  } catch (const BudgetError& e) {
    throw BudgetError(std::to_string(instance.n_t) + "x" + std::to_string(instance.n_r) + " " +
                      instance.constellation.name() + ", " + to_string(config.mapping) +
                      " mapping: " + e.what());
  }
  return plan;
}

/// Maps a solver output (device spins for compiled plans, problem spins
/// otherwise) back to detected spins: majority decode, then flip globally
/// so the ancilla reads +1, then drop the ancilla.
inline SpinConfig interpret(const DetectionPlan& plan, const SpinConfig& solver_output) {
  SpinConfig s = plan.compiled ? decode(solver_output, plan.compiled->plan) : solver_output;
  if (plan.ancilla && s[*plan.ancilla] == -1) s = s.flipped();
  const auto n = plan.reduction.problem.size();
  std::vector<std::int8_t> head(s.values().begin(), s.values().begin() + static_cast<long>(n));
  return SpinConfig(std::move(head));
}

/// MLD through the configured mapping and solver.
inline Detection detect(const MimoInstance& instance, const PipelineConfig& config) {
  const auto plan = prepare_detection(instance, config);
  Detection out;
  SpinConfig raw;
  if (!plan.compiled) {
    auto ground = brute_force_ground_state(plan.device_ready);
    raw = std::move(ground.config);
    out.diagnostics.solver_energy = ground.energy;
    out.diagnostics.spins_used = plan.device_ready.size();
  } else {
    const auto& program = plan.compiled->program;
    if (config.exact_solver) {
      auto best = solve_exact(program);
      raw = std::move(best.config);
      out.diagnostics.solver_energy = static_cast<double>(best.energy);
    } else {
      auto result = solve(program, config.anneal, config.jobs);
      raw = std::move(result.best);
      out.diagnostics.solver_energy = static_cast<double>(result.best_energy);
    }
    out.diagnostics.spins_used = program.size();
    out.diagnostics.coherence_violations = coherence_violations(raw, plan.compiled->plan);
  }
  out.spins = interpret(plan, raw);
  out.bits = plan.reduction.bits(out.spins);
  return out;
}

}  // namespace mdising
