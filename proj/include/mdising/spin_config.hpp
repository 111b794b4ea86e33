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
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "mdising/errors.hpp"

namespace mdising {

/// A vector of spins, each exactly -1 or +1.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::size_t n) : values_(n, 1) {}
  explicit SpinConfig(std::vector<std::int8_t> values) : values_(std::move(values)) {
    for (auto v : values_) check(v);
  }
  SpinConfig(std::initializer_list<int> values) {
    values_.reserve(values.size());
    for (int v : values) {
      check(v);
      values_.push_back(static_cast<std::int8_t>(v));
    }
  }

  /// Bit k of `mask` set means spin k is -1.
  static SpinConfig from_mask(std::size_t n, std::uint64_t mask) {
    SpinConfig s(n);
    for (std::size_t k = 0; k < n; ++k) {
      if ((mask >> k) & 1U) s.values_[k] = -1;
    }
    return s;
  }

  std::size_t size() const noexcept { return values_.size(); }
  int operator[](std::size_t i) const noexcept { return values_[i]; }

  void set(std::size_t i, int v) {
    check(v);
    values_[i] = static_cast<std::int8_t>(v);
  }
  void flip(std::size_t i) noexcept { values_[i] = static_cast<std::int8_t>(-values_[i]); }

  /// Global spin flip.
  SpinConfig flipped() const {
    SpinConfig out = *this;
    for (auto& v : out.values_) v = static_cast<std::int8_t>(-v);
    return out;
  }

  std::span<const std::int8_t> values() const noexcept { return values_; }

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

 private:
  static void check(int v) {
    if (v != 1 && v != -1) {
      throw InvalidInput("spin value must be -1 or +1, got " + std::to_string(v));
    }
  }

  std::vector<std::int8_t> values_;
};

/// Lexicographic order reading from index 0, with +1 ranked before -1.
inline bool lex_less(const SpinConfig& a, const SpinConfig& b) noexcept {
  const auto n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return a.size() < b.size();
}

}  // namespace mdising
