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

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "mdising/errors.hpp"
#include "mdising/hardware.hpp"
#include "mdising/ising.hpp"

// Plain-text formats. Blank lines and text after '#' are ignored.
//
// Problem:         "n", then "i j J_ij" lines and optional "h i value" lines.
// Device program:  "spins N", then "i j K_ij" per nonzero directed entry.
// Profile:         "key = value" lines with keys c_max and max_spins.
namespace mdising::io {

namespace detail {

inline std::vector<std::string_view> tokens(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const auto start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) out.push_back(line.substr(start, pos - start));
  }
  return out;
}

template <class T>
T parse_number(std::string_view text, std::size_t line, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("expected " + std::string(what) + ", got '" + std::string(text) + "'", line);
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ParseError(std::string(what) + " must be finite", line);
  }
  return value;
}

inline std::size_t parse_index(std::string_view text, std::size_t n, std::size_t line) {
  const auto i = parse_number<long long>(text, line, "spin index");
  if (i < 0 || static_cast<unsigned long long>(i) >= n) {
    throw ParseError("spin index " + std::string(text) + " out of range [0, " + std::to_string(n) + ")",
                     line);
  }
  return static_cast<std::size_t>(i);
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline IsingProblem read_problem(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<IsingProblem> problem;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (!problem) {
      if (tok.size() != 1) throw ParseError("first line must hold the spin count", line_no);
      const auto n = detail::parse_number<long long>(tok[0], line_no, "spin count");
      if (n < 1) throw ParseError("spin count must be positive", line_no);
      problem.emplace(static_cast<std::size_t>(n));
      continue;
    }
    const auto n = problem->size();
    if (tok[0] == "h") {
      if (tok.size() != 3) throw ParseError("expected 'h i value'", line_no);
      problem->set_field(detail::parse_index(tok[1], n, line_no),
                         detail::parse_number<double>(tok[2], line_no, "field value"));
    } else {
      if (tok.size() != 3) throw ParseError("expected 'i j J_ij'", line_no);
      const auto i = detail::parse_index(tok[0], n, line_no);
      const auto j = detail::parse_index(tok[1], n, line_no);
      if (i == j) throw ParseError("diagonal coupling (" + std::to_string(i) + "," + std::to_string(j) + ")", line_no);
      problem->set_coupling(i, j, detail::parse_number<double>(tok[2], line_no, "coupling"));
    }
  }
  if (!problem) throw ParseError("empty problem file", 0);
  return *problem;
}

inline void write_problem(std::ostream& out, const IsingProblem& problem) {
  out << problem.size() << '\n';
  for (std::size_t i = 0; i < problem.size(); ++i) {
    for (std::size_t j = 0; j < problem.size(); ++j) {
      if (i != j && problem.coupling(i, j) != 0.0) {
        out << i << ' ' << j << ' ' << detail::format_double(problem.coupling(i, j)) << '\n';
      }
    }
  }
  for (std::size_t i = 0; i < problem.field_values().size(); ++i) {
    if (problem.field(i) != 0.0) out << "h " << i << ' ' << detail::format_double(problem.field(i)) << '\n';
  }
}

/// A parsed program plus entries whose value was not an integer. Those are
/// stored rounded toward zero so the rest of the file can still be checked.
struct ProgramFile {
  DeviceProgram program;
  std::vector<Violation> non_integer;
};

inline ProgramFile read_program_file(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<ProgramFile> file;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (!file) {
      if (tok.size() != 2 || tok[0] != "spins") throw ParseError("first line must be 'spins N'", line_no);
      const auto n = detail::parse_number<long long>(tok[1], line_no, "spin count");
      if (n < 1) throw ParseError("spin count must be positive", line_no);
      file.emplace(ProgramFile{DeviceProgram(static_cast<std::size_t>(n)), {}});
      continue;
    }
    if (tok.size() != 3) throw ParseError("expected 'i j K_ij'", line_no);
    const auto n = file->program.size();
    const auto i = detail::parse_index(tok[0], n, line_no);
    const auto j = detail::parse_index(tok[1], n, line_no);
    const auto value = detail::parse_number<double>(tok[2], line_no, "coupling");
    if (std::abs(value) > std::numeric_limits<std::int32_t>::max()) {
      throw ParseError("coupling magnitude too large", line_no);
    }
    if (value != std::trunc(value)) {
      file->non_integer.push_back({Violation::Kind::non_integer, i, j, value,
                                   "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                       std::string(tok[2]) + " is not an integer"});
    }
    file->program.set_coupling(i, j, static_cast<std::int32_t>(value));
  }
  if (!file) throw ParseError("empty program file", 0);
  return std::move(*file);
}

/// Strict reader: non-integer entries are a parse error.
inline DeviceProgram read_program(std::istream& in) {
  auto file = read_program_file(in);
  if (!file.non_integer.empty()) throw ParseError(file.non_integer.front().message, 0);
  return std::move(file.program);
}

inline void write_program(std::ostream& out, const DeviceProgram& program) {
  out << "spins " << program.size() << '\n';
  for (std::size_t i = 0; i < program.size(); ++i) {
    for (std::size_t j = 0; j < program.size(); ++j) {
      if (program.coupling(i, j) != 0) out << i << ' ' << j << ' ' << program.coupling(i, j) << '\n';
    }
  }
}

inline HardwareProfile read_profile(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<int> c_max;
  std::optional<int> max_spins;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok.size() == 3 && tok[1] == "=") tok.erase(tok.begin() + 1);
    if (tok.size() != 2) throw ParseError("expected 'key = value'", line_no);
    const auto value = detail::parse_number<int>(tok[1], line_no, "integer");
    if (tok[0] == "c_max") {
      c_max = value;
    } else if (tok[0] == "max_spins") {
      max_spins = value;
    } else {
      throw ParseError("unknown profile key '" + std::string(tok[0]) + "'", line_no);
    }
  }
  if (!c_max || !max_spins) throw ParseError("profile needs both c_max and max_spins", 0);
  try {
    return HardwareProfile(*c_max, *max_spins);
  } catch (const InvalidInput& e) {
    throw ParseError(e.what(), 0);
  }
}

inline void write_profile(std::ostream& out, const HardwareProfile& profile) {
  out << "c_max = " << profile.c_max << "\nmax_spins = " << profile.max_spins << '\n';
}

}  // namespace mdising::io
