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

#include <gtest/gtest.h>

#include <sstream>

#include "mdising/experiment.hpp"

namespace {

using mdising::ExperimentSpec;
using mdising::MappingKind;

ExperimentSpec parse(const std::string& text) {
  std::istringstream in(text);
  return mdising::read_experiment(in);
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const mdising::ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return 999;
}

std::string csv_of(const ExperimentSpec& spec, unsigned jobs) {
  std::ostringstream out;
  mdising::write_csv(out, spec, mdising::run_mimo_ber(spec, jobs));
  return out.str();
}

const std::string kSmall =
    "scenario = mimo-ber\n"
    "n_t = 2\n"
    "n_r = 2\n"
    "constellation = 16-QAM   # per-antenna symbols\n"
    "noise_variance = 0.1\n"
    "trials = 6\n"
    "seed = 11\n"
    "anneals = 4\n"
    "sweeps = 30\n"
    "arm = native\n"
    "arm = float\n"
    "arm = multidigit digits=3 q=5\n"
    "arm = multidigit digits=3 q=8 penalty=7\n";

TEST(ReadExperiment, ParsesEveryKey) {
  const auto spec = parse(kSmall);
  EXPECT_EQ(spec.n_t, 2u);
  EXPECT_EQ(spec.constellation.name(), "16-QAM");
  EXPECT_DOUBLE_EQ(spec.noise_variance, 0.1);
  EXPECT_EQ(spec.trials, 6u);
  EXPECT_EQ(spec.seed, 11u);
  EXPECT_EQ(spec.anneal.n_anneals, 4);
  EXPECT_EQ(spec.anneal.sweeps_per_anneal, 30);
  EXPECT_EQ(spec.profile, mdising::HardwareProfile::cobi());
  ASSERT_EQ(spec.arms.size(), 4u);
  EXPECT_EQ(spec.arms[1].mapping, MappingKind::exact_float);
  EXPECT_EQ(spec.arms[2].label(), "multidigit digits=3 q=5");
  EXPECT_EQ(spec.arms[3].penalty_weight, 7);
}

TEST(ReadExperiment, WriteReadRoundTrip) {
  auto spec = parse(kSmall + "c_max = 14\nmax_spins = 100\nbeta_initial = 0.05\n");
  EXPECT_EQ(spec.profile.c_max, 14);
  std::ostringstream out;
  mdising::write_experiment(out, spec);
  EXPECT_EQ(parse(out.str()), spec);
}

TEST(ReadExperiment, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("n_t = 2\nbogus = 1\narm = native\n"), 2u);
  EXPECT_EQ(parse_error_line("trials = -3\narm = native\n"), 1u);
  EXPECT_EQ(parse_error_line("arm = native\nn_t 2\n"), 2u);
  EXPECT_EQ(parse_error_line("arm = multidigit q=5\n"), 1u);
  EXPECT_EQ(parse_error_line("arm = multidigit digits=3 q=five\n"), 1u);
  EXPECT_EQ(parse_error_line("constellation = 8-PSK\narm = native\n"), 1u);
  EXPECT_EQ(parse_error_line("scenario = qubo\narm = native\n"), 1u);
  EXPECT_EQ(parse_error_line("trials = 2\n"), 0u);
  EXPECT_EQ(parse_error_line("anneals = 0\narm = native\n"), 0u);
  EXPECT_EQ(parse_error_line("c_max = 0\narm = native\n"), 0u);
}

TEST(RunMimoBer, ZeroTrialsGivesHeaderOnly) {
  auto spec = parse(kSmall);
  spec.trials = 0;
  const auto result = mdising::run_mimo_ber(spec);
  EXPECT_TRUE(result.rows.empty());
  EXPECT_EQ(csv_of(spec, 1), std::string(mdising::kCsvHeader) + "\n");
  const auto summary = mdising::summary_json(spec, result);
  EXPECT_TRUE(summary["no_data"].get<bool>());
  EXPECT_TRUE(summary["arms"][0]["ber"].is_null());
}

TEST(RunMimoBer, ReplayIsByteIdenticalAcrossJobs) {
  const auto spec = parse(kSmall);
  const auto once = csv_of(spec, 1);
  EXPECT_EQ(csv_of(spec, 1), once);
  EXPECT_EQ(csv_of(spec, 3), once);
  auto other = spec;
  other.seed = 12;
  EXPECT_NE(csv_of(other, 1), once);
}

TEST(RunMimoBer, RowsFollowArms) {
  const auto spec = parse(kSmall);
  const auto result = mdising::run_mimo_ber(spec);
  ASSERT_EQ(result.rows.size(), 24u);
  for (std::size_t k = 0; k < result.rows.size(); ++k) {
    const auto& row = result.rows[k];
    EXPECT_EQ(row.trial, k / 4);
    EXPECT_EQ(row.arm, k % 4);
    EXPECT_EQ(row.trial_seed, mdising::derive_seed(11, row.trial));
    if (row.arm == 3) {
      // 3 digits of base 8 need 81 spins on a 59-spin device.
      ASSERT_TRUE(row.failure);
      continue;
    }
    ASSERT_FALSE(row.failure);
    EXPECT_EQ(row.bits_total, 8u);
    EXPECT_EQ(row.spins_used, row.arm == 2 ? 54u : 9u);
    if (row.arm == 1) {
      EXPECT_EQ(row.coherence_violations, 0u);
    }
  }
  EXPECT_EQ(result.arms[3].budget_failures, 6u);
  EXPECT_FALSE(result.arms[3].ber());
  EXPECT_EQ(result.arms[0].bits_total, 48u);
}

TEST(RunMimoBer, CsvLayout) {
  const auto spec = parse(kSmall);
  std::istringstream csv(csv_of(spec, 1));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, mdising::kCsvHeader);
  std::vector<std::string> lines;
  while (std::getline(csv, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 24u);
  const auto seed0 = std::to_string(mdising::derive_seed(11, 0));
  EXPECT_EQ(lines[0].rfind(seed0 + ",2,2,16-QAM,native,,,9,", 0), 0u) << lines[0];
  EXPECT_EQ(lines[2].rfind(seed0 + ",2,2,16-QAM,multidigit,5,3,54,", 0), 0u) << lines[2];
  EXPECT_EQ(lines[3], seed0 + ",2,2,16-QAM,multidigit,8,3,,,,,");
  for (const auto& l : lines) EXPECT_EQ(std::count(l.begin(), l.end(), ','), 11) << l;
}

TEST(RunMimoBer, SummaryFields) {
  const auto spec = parse(kSmall);
  const auto result = mdising::run_mimo_ber(spec);
  const auto summary = mdising::summary_json(spec, result);
  EXPECT_FALSE(summary["no_data"].get<bool>());
  EXPECT_EQ(summary["arms"].size(), 4u);
  EXPECT_EQ(summary["arms"][1]["ber"].get<double>(), 0.0);
  EXPECT_EQ(summary["arms"][2]["q"].get<int>(), 5);
  EXPECT_DOUBLE_EQ(summary["arms"][2]["mean_spins"].get<double>(), 54.0);
  EXPECT_TRUE(summary["arms"][3]["ber"].is_null());
  EXPECT_EQ(summary["arms"][3]["budget_failures"].get<std::size_t>(), 6u);
  // The embedded spec replays the run.
  EXPECT_EQ(parse(summary["spec"].get<std::string>()), spec);
}

}  // namespace
