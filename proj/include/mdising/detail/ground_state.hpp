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

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "mdising/matrix.hpp"
#include "mdising/spin_config.hpp"

namespace mdising::detail {

template <class Value>
struct Minimum {
  SpinConfig config;
  Value energy;
};

// Exhaustive minimization of E(s) = -sum_{i<j} W_ij s_i s_j - sum_i h_i s_i,
// where W is the symmetrized coupling matrix. Walks configurations in Gray
// code order with local fields, so each step is O(n). Candidates within
// `tolerance` of the incumbent are re-scored with `exact` and ties resolve
// to the lex_less-smallest config. For integer values tolerance is zero and
// the running energy is already exact.
template <class Value, class ExactEnergy>
Minimum<Value> gray_code_minimum(const SquareMatrix<Value>& w, std::span<const Value> field,
                                 ExactEnergy&& exact, Value tolerance) {
  const std::size_t n = w.size();
  SpinConfig s(n);
  std::vector<Value> local(n, Value{});
  for (std::size_t i = 0; i < n; ++i) {
    Value acc = field.empty() ? Value{} : field[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) acc += w(i, j);
    }
    local[i] = acc;
  }

  Value current = exact(s);
  Minimum<Value> best{s, current};
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto k = static_cast<std::size_t>(std::countr_zero(step));
    const int old = s[k];
    current += static_cast<Value>(2 * old) * local[k];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != k) local[j] -= static_cast<Value>(2 * old) * w(j, k);
    }
    s.flip(k);

    if (current <= best.energy + tolerance) {
      if constexpr (!std::is_integral_v<Value>) current = exact(s);
      if (current < best.energy || (current == best.energy && lex_less(s, best.config))) {
        best.config = s;
        best.energy = current;
      }
    }
  }
  return best;
}

}  // namespace mdising::detail
