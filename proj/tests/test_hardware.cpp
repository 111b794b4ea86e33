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

#include <cmath>
#include <sstream>

#include "mdising/hardware.hpp"
#include "mdising/io.hpp"
#include "oracles.hpp"

namespace {

using mdising::DeviceProgram;
using mdising::HardwareProfile;
using mdising::IsingProblem;
using mdising::SpinConfig;

IsingProblem with_pair_total(double total) {
  IsingProblem p(2);
  p.set_coupling(0, 1, total / 2);
  p.set_coupling(1, 0, total / 2);
  return p;
}

TEST(HardwareProfile, CobiLimits) {
  const auto cobi = HardwareProfile::cobi();
  EXPECT_EQ(cobi.c_max, 7);
  EXPECT_EQ(cobi.max_spins, 59);
  // 2 c_max + 1 pair levels.
  EXPECT_EQ(4 * cobi.c_max + 1, 29);
  EXPECT_THROW(HardwareProfile(0, 10), mdising::InvalidInput);
  EXPECT_THROW(HardwareProfile(3, 1), mdising::InvalidInput);
}

TEST(NativeQuantize, CeilFloorSplit) {
  const auto cobi = HardwareProfile::cobi();
  auto k = mdising::native_quantize(with_pair_total(1.0), cobi);
  EXPECT_EQ(k.coupling(0, 1), 4);
  EXPECT_EQ(k.coupling(1, 0), 3);

  k = mdising::native_quantize(with_pair_total(-0.3), cobi);
  EXPECT_EQ(k.coupling(0, 1), -1);
  EXPECT_EQ(k.coupling(1, 0), -2);
}

TEST(NativeQuantize, MaximalCouplingReachesFourteen) {
  const auto k = mdising::native_quantize(with_pair_total(2.0), HardwareProfile::cobi());
  EXPECT_EQ(k.coupling(0, 1) + k.coupling(1, 0), 14);
  const auto neg = mdising::native_quantize(with_pair_total(-2.0), HardwareProfile::cobi());
  EXPECT_EQ(neg.coupling(0, 1) + neg.coupling(1, 0), -14);
}

TEST(NativeQuantize, Preconditions) {
  const auto cobi = HardwareProfile::cobi();
  EXPECT_THROW(mdising::native_quantize(with_pair_total(2.5), cobi), mdising::InvalidInput);
  IsingProblem field(2);
  field.set_field(0, 0.5);
  EXPECT_THROW(mdising::native_quantize(field, cobi), mdising::InvalidInput);
  EXPECT_THROW(mdising::native_quantize(IsingProblem(60), cobi), mdising::BudgetError);
}

TEST(NativeQuantize, ErrorBoundProperty) {
  for (int c_max : {1, 3, 7, 14}) {
    const HardwareProfile profile(c_max, 100);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto p = mdising::normalize(oracle::random_problem(seed, 8, false)).problem;
      const auto k = mdising::native_quantize(p, profile);
      for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = i + 1; j < 8; ++j) {
          const double target = c_max * p.pair_coupling(i, j);
          EXPECT_LE(std::abs(k.coupling(i, j) + k.coupling(j, i) - target), 1.0 + 1e-9);
          EXPECT_LE(std::abs(k.coupling(i, j)), c_max);
        }
      }
      EXPECT_TRUE(mdising::validate(k, profile).ok());
    }
  }
}

TEST(NativeQuantize, ExactWhenTargetIsEven) {
  for (int m = -7; m <= 7; ++m) {
    // c_max (J_ij + J_ji) == 2m
    const auto k = mdising::native_quantize(with_pair_total(2.0 * m / 7.0), HardwareProfile::cobi());
    EXPECT_EQ(k.coupling(0, 1), m);
    EXPECT_EQ(k.coupling(1, 0), m);
  }
}

TEST(NativeQuantize, NegationGivesNegatedTranspose) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto p = mdising::normalize(oracle::random_problem(seed, 6, false)).problem;
    mdising::SquareMatrix<double> neg(6);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) neg(i, j) = -p.coupling(i, j);
    }
    const auto k = mdising::native_quantize(p, HardwareProfile::cobi());
    const auto kn = mdising::native_quantize(IsingProblem(neg), HardwareProfile::cobi());
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        if (i == j) continue;
        EXPECT_EQ(kn.coupling(i, j), -k.coupling(j, i));
        EXPECT_EQ(kn.coupling(i, j) + kn.coupling(j, i), -(k.coupling(i, j) + k.coupling(j, i)));
      }
    }
  }
}

TEST(Validate, ReportsCouplingBound) {
  DeviceProgram prog(3);
  prog.set_coupling(1, 2, 8);
  const auto report = mdising::validate(prog, HardwareProfile::cobi());
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, mdising::Violation::Kind::coupling_bound);
  EXPECT_EQ(report.violations[0].i, 1u);
  EXPECT_EQ(report.violations[0].j, 2u);
  EXPECT_NE(report.violations[0].message.find("(1,2)"), std::string::npos);
}

TEST(Validate, ValidProgramIsClean) {
  DeviceProgram prog(3);
  prog.set_coupling(0, 1, 7);
  prog.set_coupling(1, 0, -7);
  EXPECT_TRUE(mdising::validate(prog, HardwareProfile::cobi()).ok());
}

TEST(Validate, SpinBudgetAndDiagonal) {
  DeviceProgram prog(60);
  prog.set_coupling(4, 4, 1);
  const auto report = mdising::validate(prog, HardwareProfile::cobi());
  ASSERT_EQ(report.violations.size(), 2u);
  EXPECT_EQ(report.violations[0].kind, mdising::Violation::Kind::spin_budget);
  EXPECT_EQ(report.violations[1].kind, mdising::Violation::Kind::diagonal);
}

TEST(ProgramEnergy, Basics) {
  DeviceProgram prog(2);
  prog.set_coupling(0, 1, 4);
  prog.set_coupling(1, 0, 3);
  EXPECT_EQ(mdising::program_energy(prog, SpinConfig{1, 1}), -7);
  EXPECT_EQ(mdising::program_energy(prog, SpinConfig{1, -1}), 7);
  EXPECT_EQ(mdising::program_energy(DeviceProgram(3), SpinConfig{1, -1, 1}), 0);
  EXPECT_THROW(mdising::program_energy(prog, SpinConfig(3)), mdising::DimensionError);
}

TEST(ProgramEnergy, DiagonalDoesNotCount) {
  DeviceProgram prog(2);
  prog.set_coupling(0, 0, 5);
  EXPECT_EQ(mdising::program_energy(prog, SpinConfig{1, 1}), 0);
}

TEST(ProgramEnergy, AgreesWithRealValuedEnergy) {
  mdising::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    DeviceProgram prog(7);
    mdising::SquareMatrix<double> j(7);
    for (std::size_t a = 0; a < 7; ++a) {
      for (std::size_t b = 0; b < 7; ++b) {
        if (a == b) continue;
        const auto v = static_cast<int>(rng() % 15) - 7;
        prog.set_coupling(a, b, v);
        j(a, b) = v;
      }
    }
    const IsingProblem p(j);
    for (std::uint64_t m = 0; m < 128; ++m) {
      const auto s = SpinConfig::from_mask(7, m);
      EXPECT_EQ(static_cast<double>(mdising::program_energy(prog, s)), mdising::energy(p, s));
    }
  }
}

TEST(ProgramFile, RoundTripAndStrictness) {
  DeviceProgram prog(4);
  prog.set_coupling(0, 3, -5);
  prog.set_coupling(2, 1, 7);
  std::ostringstream out;
  mdising::io::write_program(out, prog);
  EXPECT_EQ(out.str(), "spins 4\n0 3 -5\n2 1 7\n");
  std::istringstream in(out.str());
  EXPECT_EQ(mdising::io::read_program(in), prog);

  std::istringstream frac("spins 2\n0 1 2.5\n");
  EXPECT_THROW(mdising::io::read_program(frac), mdising::ParseError);
  std::istringstream lenient("spins 2\n0 1 2.5\n");
  const auto file = mdising::io::read_program_file(lenient);
  ASSERT_EQ(file.non_integer.size(), 1u);
  EXPECT_EQ(file.non_integer[0].kind, mdising::Violation::Kind::non_integer);

  for (const char* bad : {"spins 2\n0 2 1\n", "2\n0 1 1\n", "spins 0\n", "spins 2\n0 1\n"}) {
    std::istringstream b(bad);
    EXPECT_THROW(mdising::io::read_program(b), mdising::ParseError) << bad;
  }
}

TEST(ProfileFile, Parses) {
  std::istringstream in("# device\nc_max = 3\nmax_spins 20\n");
  const auto p = mdising::io::read_profile(in);
  EXPECT_EQ(p, HardwareProfile(3, 20));
  std::istringstream missing("c_max = 3\n");
  EXPECT_THROW(mdising::io::read_profile(missing), mdising::ParseError);
  std::istringstream unknown("c_max = 3\nmax_spins = 9\nspeed = 2\n");
  EXPECT_THROW(mdising::io::read_profile(unknown), mdising::ParseError);
  std::istringstream invalid("c_max = 0\nmax_spins = 9\n");
  EXPECT_THROW(mdising::io::read_profile(invalid), mdising::ParseError);
}

}  // namespace
