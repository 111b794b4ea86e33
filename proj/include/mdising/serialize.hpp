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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdising/anneal.hpp"
#include "mdising/errors.hpp"
#include "mdising/matrix.hpp"
#include "mdising/mimo.hpp"
#include "mdising/multidigit.hpp"

// JSON forms of mapping plans, solver results and MIMO instances.
namespace mdising {

using Json = nlohmann::ordered_json;

inline void to_json(Json& j, const SpinConfig& s) {
  j = Json::array();
  for (auto v : s.values()) j.push_back(static_cast<int>(v));
}

inline void from_json(const Json& j, SpinConfig& s) {
  std::vector<std::int8_t> values;
  for (const auto& v : j) values.push_back(static_cast<std::int8_t>(v.get<int>()));
  s = SpinConfig(std::move(values));
}

inline void to_json(Json& j, const EdgeTerm& t) {
  j = Json{{"i", t.i}, {"j", t.j}, {"value", t.value}};
  if (t.digits3 != DigitTriple{}) j["abc"] = {t.digits3.a, t.digits3.b, t.digits3.c};
  if (t.digits2 != DigitPair{}) j["fg"] = {t.digits2.f, t.digits2.g};
  if (t.factor) {
    j["formulation"] = to_string(t.factor->formulation);
    j["alpha"] = t.factor->alpha;
    j["beta"] = t.factor->beta;
    j["gamma"] = t.factor->gamma;
    j["residual"] = t.factor->residual;
  }
}

inline void from_json(const Json& j, EdgeTerm& t) {
  t = EdgeTerm{};
  t.i = j.at("i").get<std::size_t>();
  t.j = j.at("j").get<std::size_t>();
  t.value = j.at("value").get<std::int64_t>();
  if (j.contains("abc")) {
    const auto& d = j["abc"];
    t.digits3 = {d.at(0).get<int>(), d.at(1).get<int>(), d.at(2).get<int>()};
  }
  if (j.contains("fg")) t.digits2 = {j["fg"].at(0).get<int>(), j["fg"].at(1).get<int>()};
  if (j.contains("formulation")) {
    const auto name = j["formulation"].get<std::string>();
    if (name != "q" && name != "q+1") throw InvalidInput("unknown formulation '" + name + "'");
    t.factor = Factorization{name == "q" ? Formulation::base_q : Formulation::base_q_plus_one,
                             j.at("alpha").get<int>(), j.at("beta").get<int>(),
                             j.at("gamma").get<int>(), j.at("residual").get<int>()};
  }
}

inline void to_json(Json& j, const MappingPlan& plan) {
  j = Json{{"digits", plan.digits},       {"q", plan.q},
           {"m_q", plan.m_q},             {"penalty_weight", plan.penalty_weight},
           {"n_original", plan.n_original}, {"n_device", plan.n_device},
           {"groups", plan.groups},       {"edge_terms", plan.edge_terms}};
  auto rows = Json::array();
  for (std::size_t i = 0; i < plan.quantized.size(); ++i) {
    auto row = plan.quantized.row(i);
    rows.push_back(std::vector<std::int64_t>(row.begin(), row.end()));
  }
  j["quantized"] = std::move(rows);
}

inline void from_json(const Json& j, MappingPlan& plan) {
  plan = MappingPlan{};
  plan.digits = j.at("digits").get<int>();
  plan.q = j.at("q").get<int>();
  plan.m_q = j.at("m_q").get<std::int64_t>();
  plan.penalty_weight = j.at("penalty_weight").get<int>();
  plan.n_original = j.at("n_original").get<std::size_t>();
  plan.n_device = j.at("n_device").get<std::size_t>();
  plan.groups = j.at("groups").get<std::vector<std::vector<std::size_t>>>();
  plan.edge_terms = j.at("edge_terms").get<std::vector<EdgeTerm>>();
  const auto& rows = j.at("quantized");
  std::vector<std::int64_t> data;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw DimensionError("quantized matrix is not square");
    for (const auto& v : row) data.push_back(v.get<std::int64_t>());
  }
  plan.quantized = SquareMatrix<std::int64_t>(rows.size(), std::move(data));

  if (plan.groups.size() != plan.n_original) {
    throw DimensionError("plan has " + std::to_string(plan.groups.size()) + " groups for " +
                         std::to_string(plan.n_original) + " original spins");
  }
  for (std::size_t i = 0; i < plan.groups.size(); ++i) {
    if (plan.groups[i].empty() || plan.groups[i].front() != i) {
      throw InvalidInput("group " + std::to_string(i) + " must start with its original spin");
    }
    for (auto u : plan.groups[i]) {
      if (u >= plan.n_device) throw InvalidInput("group member out of device range");
    }
  }
}

inline Json result_json(const AnnealResult& result) {
  return Json{{"energy", result.best_energy},
              {"config", result.best},
              {"anneal_energies", result.anneal_energies},
              {"bookkeeping_failures", result.bookkeeping_failures}};
}

inline Json result_json(const ProgramMinimum& result) {
  return Json{{"energy", result.energy}, {"config", result.config}, {"exact", true}};
}

inline Json complex_json(const std::vector<Complex>& values) {
  auto out = Json::array();
  for (const auto& v : values) out.push_back({v.real(), v.imag()});
  return out;
}

/// Instance dump; complex numbers as [re, im] pairs, H row-major per row.
inline Json instance_json(const MimoInstance& inst) {
  auto h = Json::array();
  for (std::size_t r = 0; r < inst.n_r; ++r) {
    h.push_back(complex_json({inst.H.begin() + static_cast<long>(r * inst.n_t),
                              inst.H.begin() + static_cast<long>((r + 1) * inst.n_t)}));
  }
  return Json{{"n_t", inst.n_t},
              {"n_r", inst.n_r},
              {"constellation", inst.constellation.name()},
              {"noise_variance", inst.noise_variance},
              {"H", std::move(h)},
              {"x", complex_json(inst.x)},
              {"y", complex_json(inst.y)},
              {"tx_bits", inst.tx_bits}};
}

}  // namespace mdising
