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

// Command-line front end: compile problems to device programs, run the
// annealing emulator, validate programs and run MIMO BER experiments.
//
// Exit codes: 0 success, 1 usage or parse error, 2 validation or budget
// failure, 3 internal invariant failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mdising/mdising.hpp"

namespace fs = std::filesystem;
using namespace mdising;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInternal = 3;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  unsigned jobs = 1;
};

/// Thrown to leave with a specific exit code after output was printed.
struct ExitWith {
  int code;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return in;
}

fs::path output_path(const GlobalOptions& global, const std::string& name) {
  const fs::path dir = global.output_dir.empty() ? fs::path(".") : fs::path(global.output_dir);
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'", 0);
  out << text;
}

HardwareProfile load_profile(const std::string& spec) {
  if (spec == "cobi") return HardwareProfile::cobi();
  auto in = open_input(spec);
  return io::read_profile(in);
}

void print_report(const ValidationReport& report) {
  for (const auto& w : report.warnings) std::cout << "warning: " << w << '\n';
  if (report.ok()) {
    std::cout << "validation: ok\n";
    return;
  }
  std::cout << "validation: " << report.violations.size() << " violation(s)\n";
  for (const auto& v : report.violations) std::cout << "  " << v.message << '\n';
}

struct MapOptions {
  std::string problem;
  std::string profile = "cobi";
  std::string mapping = "multidigit";
  int digits = 3;
  int q = 5;
  std::optional<int> penalty;
};

void cmd_map(const MapOptions& opt, const GlobalOptions& global) {
  auto in = open_input(opt.problem);
  const auto raw = io::read_problem(in);
  const auto profile = load_profile(opt.profile);

  auto normalized = normalize(raw);
  auto absorbed = absorb_linear_terms(normalized.problem);
  std::cout << "problem: " << raw.size() << " spins, scale " << normalized.scale;
  if (absorbed.ancilla) std::cout << ", linear terms absorbed into ancilla spin " << *absorbed.ancilla;
  std::cout << '\n';

  CompiledProgram compiled;
  if (opt.mapping == "native") {
    compiled = map_native(absorbed.problem, profile);
  } else if (opt.mapping == "multidigit") {
    compiled = map_multi_digit(absorbed.problem, profile, {opt.digits, opt.q, opt.penalty});
  } else {
    throw ParseError("unknown mapping '" + opt.mapping + "' (native or multidigit)", 0);
  }

  std::ostringstream program_text;
  io::write_program(program_text, compiled.program);
  const auto program_file = output_path(global, "program.txt");
  const auto plan_file = output_path(global, "plan.json");
  write_file(program_file, program_text.str());
  write_file(plan_file, Json(compiled.plan).dump(1) + "\n");

  std::cout << "spins: " << compiled.program.size() << " of " << profile.max_spins << " ("
            << compiled.plan.n_original << " original)\n"
            << "effective range: [-" << compiled.plan.m_q << ", " << compiled.plan.m_q << "]\n"
            << "wrote " << program_file.string() << " and " << plan_file.string() << '\n';
  auto report = validate(compiled.program, profile);
  report.warnings = compiled.warnings;
  print_report(report);
  if (!report.ok()) throw ExitWith{kExitValidation};
}

struct SolveOptions {
  std::string program;
  AnnealParams anneal;
  bool exact = false;
};

void cmd_solve(SolveOptions opt, const GlobalOptions& global) {
  auto in = open_input(opt.program);
  const auto program = io::read_program(in);
  Json result;
  if (opt.exact) {
    result = result_json(solve_exact(program));
  } else {
    if (global.seed) opt.anneal.seed = *global.seed;
    result = result_json(solve(program, opt.anneal, global.jobs));
    result["seed"] = opt.anneal.seed;
  }
  const auto text = result.dump() + "\n";
  std::cout << text;
  if (!global.output_dir.empty()) write_file(output_path(global, "result.json"), text);
}

struct ValidateOptions {
  std::string program;
  std::string profile = "cobi";
};

void cmd_validate(const ValidateOptions& opt) {
  auto in = open_input(opt.program);
  auto file = io::read_program_file(in);
  auto report = validate(file.program, load_profile(opt.profile));
  report.violations.insert(report.violations.end(), file.non_integer.begin(), file.non_integer.end());
  print_report(report);
  if (!report.ok()) throw ExitWith{kExitValidation};
}

struct BerOptions {
  std::string spec;
  bool dump_instances = false;
};

void cmd_mimo_ber(const BerOptions& opt, const GlobalOptions& global) {
  auto in = open_input(opt.spec);
  auto spec = read_experiment(in);
  if (global.seed) spec.seed = *global.seed;

  const auto result = run_mimo_ber(spec, global.jobs);
  std::ostringstream csv;
  write_csv(csv, spec, result);
  const auto summary = summary_json(spec, result);
  write_file(output_path(global, "results.csv"), csv.str());
  write_file(output_path(global, "summary.json"), summary.dump(1) + "\n");
  if (opt.dump_instances) {
    auto instances = Json::array();
    for (std::size_t t = 0; t < spec.trials; ++t) {
      instances.push_back(instance_json(generate_instance(
          spec.n_t, spec.n_r, spec.constellation, spec.noise_variance, derive_seed(spec.seed, t))));
    }
    write_file(output_path(global, "instances.json"), instances.dump() + "\n");
  }

  if (spec.trials == 0) std::cout << "no trials: no data\n";
  for (const auto& arm : result.arms) {
    std::cout << arm.arm.label() << ": ";
    if (auto b = arm.ber()) std::cout << "BER " << *b;
    else std::cout << "BER n/a";
    if (arm.budget_failures > 0) std::cout << " (" << arm.budget_failures << " budget failures)";
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-digit Ising mapping for low-precision Ising solvers"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Master seed (overrides spec files)");
  app.add_option("--output-dir", global.output_dir, "Directory for output files");
  app.add_option("--jobs", global.jobs, "Worker threads")->check(CLI::PositiveNumber);

  MapOptions map_opt;
  auto* map = app.add_subcommand("map", "Compile a problem file into a device program and plan");
  map->add_option("--problem", map_opt.problem, "Problem file")->required();
  map->add_option("--profile", map_opt.profile, "'cobi' or a profile file");
  map->add_option("--mapping", map_opt.mapping, "native or multidigit");
  map->add_option("--digits", map_opt.digits, "2 or 3");
  map->add_option("--q", map_opt.q, "Digit base");
  map->add_option("--penalty", map_opt.penalty, "Replica penalty weight (default c_max)");

  SolveOptions solve_opt;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a device program");
  solve_cmd->add_option("--program", solve_opt.program, "Device program file")->required();
  solve_cmd->add_option("--anneals", solve_opt.anneal.n_anneals, "Number of anneals");
  solve_cmd->add_option("--sweeps", solve_opt.anneal.sweeps_per_anneal, "Sweeps per anneal");
  solve_cmd->add_option("--beta-initial", solve_opt.anneal.beta_initial, "Initial inverse temperature");
  solve_cmd->add_option("--beta-final", solve_opt.anneal.beta_final, "Final inverse temperature");
  solve_cmd->add_flag("--exact", solve_opt.exact, "Exhaustive solve (at most 24 spins)");

  ValidateOptions validate_opt;
  auto* validate_cmd = app.add_subcommand("validate", "Check a device program against a profile");
  validate_cmd->add_option("--program", validate_opt.program, "Device program file")->required();
  validate_cmd->add_option("--profile", validate_opt.profile, "'cobi' or a profile file");

  BerOptions ber_opt;
  auto* ber_cmd = app.add_subcommand("mimo-ber", "Run a MIMO bit error rate experiment");
  ber_cmd->add_option("--spec", ber_opt.spec, "Experiment spec file")->required();
  ber_cmd->add_flag("--dump-instances", ber_opt.dump_instances, "Also write instances.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*map) cmd_map(map_opt, global);
    if (*solve_cmd) cmd_solve(solve_opt, global);
    if (*validate_cmd) cmd_validate(validate_opt);
    if (*ber_cmd) cmd_mimo_ber(ber_opt, global);
  } catch (const ExitWith& e) {
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
