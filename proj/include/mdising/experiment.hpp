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
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mdising/anneal.hpp"
#include "mdising/errors.hpp"
#include "mdising/hardware.hpp"
#include "mdising/io.hpp"
#include "mdising/mimo.hpp"
#include "mdising/pipeline.hpp"
#include "mdising/serialize.hpp"

namespace mdising {

/// One mapping under comparison.
struct ArmSpec {
  MappingKind mapping = MappingKind::native;
  int digits = 0;
  int q = 0;
  std::optional<int> penalty_weight;

  std::string label() const {
    std::string out = to_string(mapping);
    if (mapping == MappingKind::multi_digit) {
      out += " digits=" + std::to_string(digits) + " q=" + std::to_string(q);
      if (penalty_weight) out += " penalty=" + std::to_string(*penalty_weight);
    }
    return out;
  }

  friend bool operator==(const ArmSpec&, const ArmSpec&) = default;
};

/// A replayable BER experiment. Text form is "key = value" lines; `arm`
/// may repeat, e.g.
///
///   n_t = 2
///   n_r = 2
///   constellation = 16-QAM
///   trials = 500
///   seed = 7
///   profile = cobi
///   anneals = 50
///   sweeps = 200
///   arm = native
///   arm = multidigit digits=3 q=5
struct ExperimentSpec {
  std::size_t n_t = 2;
  std::size_t n_r = 2;
  Constellation constellation{Constellation::Kind::qam16};
  double noise_variance = 0.0;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  HardwareProfile profile = HardwareProfile::cobi();
  AnnealParams anneal;
  std::vector<ArmSpec> arms;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

namespace detail {

inline ArmSpec parse_arm(std::string_view text, std::size_t line) {
  const auto tok = io::detail::tokens(text);
  if (tok.empty()) throw ParseError("empty arm", line);
  ArmSpec arm;
  if (tok[0] == "native") {
    arm.mapping = MappingKind::native;
  } else if (tok[0] == "float") {
    arm.mapping = MappingKind::exact_float;
  } else if (tok[0] == "multidigit") {
    arm.mapping = MappingKind::multi_digit;
  } else {
    throw ParseError("unknown arm mapping '" + std::string(tok[0]) + "'", line);
  }
  for (std::size_t k = 1; k < tok.size(); ++k) {
    const auto eq = tok[k].find('=');
    if (eq == std::string_view::npos) throw ParseError("arm option needs key=value", line);
    const auto key = tok[k].substr(0, eq);
    const auto value = io::detail::parse_number<int>(tok[k].substr(eq + 1), line, "integer");
    if (key == "digits") {
      arm.digits = value;
    } else if (key == "q") {
      arm.q = value;
    } else if (key == "penalty") {
      arm.penalty_weight = value;
    } else {
      throw ParseError("unknown arm option '" + std::string(key) + "'", line);
    }
  }
  if (arm.mapping == MappingKind::multi_digit) {
    if (arm.digits != 2 && arm.digits != 3) throw ParseError("multidigit arm needs digits=2 or 3", line);
    if (arm.q < 2) throw ParseError("multidigit arm needs q >= 2", line);
  } else if (arm.digits != 0 || arm.q != 0 || arm.penalty_weight) {
    throw ParseError("only multidigit arms take options", line);
  }
  return arm;
}

}  // namespace detail

inline ExperimentSpec read_experiment(std::istream& in) {
  ExperimentSpec spec;
  std::optional<int> c_max;
  std::optional<int> max_spins;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto eq = view.find('=');
    if (io::detail::tokens(view).empty()) continue;
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const auto key_tok = io::detail::tokens(view.substr(0, eq));
    if (key_tok.size() != 1) throw ParseError("expected a single key", line_no);
    const auto key = key_tok[0];
    const auto rest = view.substr(eq + 1);
    const auto val_tok = io::detail::tokens(rest);
    if (val_tok.empty()) throw ParseError("missing value for '" + std::string(key) + "'", line_no);

    auto single = [&]() {
      if (val_tok.size() != 1) throw ParseError("'" + std::string(key) + "' takes one value", line_no);
      return val_tok[0];
    };
    auto count = [&](const char* what) {
      const auto v = io::detail::parse_number<long long>(single(), line_no, what);
      if (v < 0) throw ParseError(std::string(what) + " must be nonnegative", line_no);
      return static_cast<std::size_t>(v);
    };

    if (key == "scenario") {
      if (single() != "mimo-ber") throw ParseError("only the mimo-ber scenario is supported", line_no);
    } else if (key == "n_t") {
      spec.n_t = count("n_t");
    } else if (key == "n_r") {
      spec.n_r = count("n_r");
    } else if (key == "constellation") {
      try {
        spec.constellation = Constellation::from_name(std::string(single()));
      } catch (const InvalidInput& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (key == "noise_variance") {
      spec.noise_variance = io::detail::parse_number<double>(single(), line_no, "noise_variance");
    } else if (key == "trials") {
      spec.trials = count("trials");
    } else if (key == "seed") {
      spec.seed = io::detail::parse_number<std::uint64_t>(single(), line_no, "seed");
    } else if (key == "profile") {
      if (single() != "cobi") throw ParseError("unknown profile name", line_no);
      spec.profile = HardwareProfile::cobi();
    } else if (key == "c_max") {
      c_max = static_cast<int>(count("c_max"));
    } else if (key == "max_spins") {
      max_spins = static_cast<int>(count("max_spins"));
    } else if (key == "anneals") {
      spec.anneal.n_anneals = static_cast<int>(count("anneals"));
    } else if (key == "sweeps") {
      spec.anneal.sweeps_per_anneal = static_cast<int>(count("sweeps"));
    } else if (key == "beta_initial") {
      spec.anneal.beta_initial = io::detail::parse_number<double>(single(), line_no, "beta_initial");
    } else if (key == "beta_final") {
      spec.anneal.beta_final = io::detail::parse_number<double>(single(), line_no, "beta_final");
    } else if (key == "arm") {
      spec.arms.push_back(detail::parse_arm(rest, line_no));
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_no);
    }
  }
  try {
    if (c_max || max_spins) {
      spec.profile = HardwareProfile(c_max.value_or(spec.profile.c_max),
                                     max_spins.value_or(spec.profile.max_spins));
    }
    spec.anneal.check();
    if (spec.n_t < 1 || spec.n_r < 1) throw InvalidInput("n_t and n_r must be positive");
    if (!(spec.noise_variance >= 0.0)) throw InvalidInput("noise_variance must be nonnegative");
  } catch (const InvalidInput& e) {
    throw ParseError(e.what(), 0);
  }
  if (spec.arms.empty()) throw ParseError("experiment needs at least one arm", 0);
  return spec;
}

inline void write_experiment(std::ostream& out, const ExperimentSpec& spec) {
  out << "scenario = mimo-ber\n"
      << "n_t = " << spec.n_t << "\n"
      << "n_r = " << spec.n_r << "\n"
      << "constellation = " << spec.constellation.name() << "\n"
      << "noise_variance = " << io::detail::format_double(spec.noise_variance) << "\n"
      << "trials = " << spec.trials << "\n"
      << "seed = " << spec.seed << "\n"
      << "c_max = " << spec.profile.c_max << "\n"
      << "max_spins = " << spec.profile.max_spins << "\n"
      << "anneals = " << spec.anneal.n_anneals << "\n"
      << "sweeps = " << spec.anneal.sweeps_per_anneal << "\n"
      << "beta_initial = " << io::detail::format_double(spec.anneal.beta_initial) << "\n"
      << "beta_final = " << io::detail::format_double(spec.anneal.beta_final) << "\n";
  for (const auto& arm : spec.arms) out << "arm = " << arm.label() << "\n";
}

struct TrialRow {
  std::uint64_t trial_seed = 0;
  std::size_t trial = 0;
  std::size_t arm = 0;
  /// Set when the arm's mapping did not fit the profile; the numeric
  /// fields below are then meaningless.
  std::optional<std::string> failure;
  std::size_t spins_used = 0;
  double solver_energy = 0.0;
  std::size_t coherence_violations = 0;
  std::size_t bit_errors = 0;
  std::size_t bits_total = 0;
};

struct ArmSummary {
  ArmSpec arm;
  std::size_t trials_run = 0;
  std::size_t budget_failures = 0;
  std::size_t bit_errors = 0;
  std::size_t bits_total = 0;
  std::size_t trials_with_violations = 0;
  std::size_t coherence_violations = 0;
  std::size_t spins_total = 0;

  std::optional<double> ber() const {
    if (bits_total == 0) return std::nullopt;
    return static_cast<double>(bit_errors) / static_cast<double>(bits_total);
  }
};

struct ExperimentResult {
  /// Ordered by trial, then by arm.
  std::vector<TrialRow> rows;
  std::vector<ArmSummary> arms;
};

inline PipelineConfig pipeline_for(const ExperimentSpec& spec, const ArmSpec& arm,
                                   std::uint64_t trial_seed) {
  PipelineConfig config;
  config.mapping = arm.mapping;
  config.multi_digit = {arm.digits, arm.q, arm.penalty_weight};
  config.profile = spec.profile;
  config.anneal = spec.anneal;
  config.anneal.seed = derive_seed(trial_seed, 1);
  return config;
}

inline TrialRow run_trial(const ExperimentSpec& spec, std::size_t trial, std::size_t arm_index) {
  TrialRow row;
  row.trial = trial;
  row.arm = arm_index;
  row.trial_seed = derive_seed(spec.seed, trial);
  const auto instance =
      generate_instance(spec.n_t, spec.n_r, spec.constellation, spec.noise_variance, row.trial_seed);
  try {
    const auto result = detect(instance, pipeline_for(spec, spec.arms[arm_index], row.trial_seed));
    row.spins_used = result.diagnostics.spins_used;
    row.solver_energy = result.diagnostics.solver_energy;
    row.coherence_violations = result.diagnostics.coherence_violations;
    row.bit_errors = bit_errors(instance.tx_bits, result.bits);
    row.bits_total = instance.tx_bits.size();
  } catch (const BudgetError& e) {
    row.failure = e.what();
  }
  return row;
}

/// Runs every arm on the same seeded channel realizations. Trials fan out
/// over `jobs` threads; the result does not depend on `jobs`.
inline ExperimentResult run_mimo_ber(const ExperimentSpec& spec, unsigned jobs = 1) {
  const auto n_arms = spec.arms.size();
  ExperimentResult result;
  result.rows.resize(spec.trials * n_arms);

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (auto t = next++; t < spec.trials; t = next++) {
      for (std::size_t a = 0; a < n_arms; ++a) result.rows[t * n_arms + a] = run_trial(spec, t, a);
    }
  };
  jobs = std::max(1U, jobs);
  if (jobs == 1 || spec.trials < 2) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < std::min<std::size_t>(jobs, spec.trials); ++k) pool.emplace_back(work);
  }

  for (const auto& arm : spec.arms) result.arms.push_back({arm});
  for (const auto& row : result.rows) {
    auto& s = result.arms[row.arm];
    ++s.trials_run;
    if (row.failure) {
      ++s.budget_failures;
      continue;
    }
    s.bit_errors += row.bit_errors;
    s.bits_total += row.bits_total;
    s.coherence_violations += row.coherence_violations;
    s.trials_with_violations += row.coherence_violations > 0;
    s.spins_total += row.spins_used;
  }
  return result;
}

inline constexpr const char* kCsvHeader =
    "trial_seed,n_t,n_r,constellation,mapping,q,digits,spins_used,solver_energy,"
    "coherence_violations,bit_errors,bits_total";

/// Per-trial rows. Rows whose mapping exceeded the spin budget leave the
/// measurement columns empty.
inline void write_csv(std::ostream& out, const ExperimentSpec& spec, const ExperimentResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& row : result.rows) {
    const auto& arm = spec.arms[row.arm];
    out << row.trial_seed << ',' << spec.n_t << ',' << spec.n_r << ',' << spec.constellation.name()
        << ',' << to_string(arm.mapping) << ',';
    if (arm.mapping == MappingKind::multi_digit) out << arm.q << ',' << arm.digits;
    else out << ',';
    if (row.failure) {
      out << ",,,,,\n";
      continue;
    }
    out << ',' << row.spins_used << ',' << io::detail::format_double(row.solver_energy) << ','
        << row.coherence_violations << ',' << row.bit_errors << ',' << row.bits_total << '\n';
  }
}

inline Json summary_json(const ExperimentSpec& spec, const ExperimentResult& result) {
  std::ostringstream spec_text;
  write_experiment(spec_text, spec);
  auto arms = Json::array();
  for (const auto& s : result.arms) {
    const auto completed = s.trials_run - s.budget_failures;
    Json a{{"label", s.arm.label()},
           {"mapping", to_string(s.arm.mapping)},
           {"trials_run", s.trials_run},
           {"budget_failures", s.budget_failures},
           {"bit_errors", s.bit_errors},
           {"bits_total", s.bits_total}};
    if (s.arm.mapping == MappingKind::multi_digit) {
      a["digits"] = s.arm.digits;
      a["q"] = s.arm.q;
    }
    if (auto b = s.ber()) a["ber"] = *b;
    else a["ber"] = nullptr;
    if (completed > 0) {
      const auto c = static_cast<double>(completed);
      a["coherence_violation_rate"] = static_cast<double>(s.trials_with_violations) / c;
      a["mean_coherence_violations"] = static_cast<double>(s.coherence_violations) / c;
      a["mean_spins"] = static_cast<double>(s.spins_total) / c;
    } else {
      a["coherence_violation_rate"] = nullptr;
      a["mean_coherence_violations"] = nullptr;
      a["mean_spins"] = nullptr;
    }
    arms.push_back(std::move(a));
  }
  return Json{{"spec", spec_text.str()},
              {"trials", spec.trials},
              {"no_data", spec.trials == 0},
              {"arms", std::move(arms)}};
}

}  // namespace mdising
