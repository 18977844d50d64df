// Copyright 2026 The ddkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "ddkit/linalg.hpp"
#include "ddkit/operators.hpp"
#include "ddkit/rng.hpp"

namespace ddkit {

enum class Structure { pure_dephasing, general, qdd_counterexample, custom };

std::string to_string(Structure s);
Structure structure_from_string(std::string_view s);

// Everything needed to regenerate a model. Matrices are never serialized.
struct ModelDescriptor {
  Structure structure = Structure::general;
  int sys_dim = 2;
  int bath_dim = 4;
  double norm_bound = 1.0;
  std::uint64_t seed = 0;

  // "general:2x4", "pure_dephasing:4x4", "qdd_counterexample:2x4"
  static ModelDescriptor parse(std::string_view text);
  bool operator==(const ModelDescriptor&) const = default;
};

// System (x) bath Hamiltonian, system index slowest.
struct HamiltonianModel {
  ModelDescriptor descriptor;
  CMatrix h_total;

  int dim() const { return descriptor.sys_dim * descriptor.bath_dim; }
};

// Seeded random model with spectral norm rescaled to exactly norm_bound.
//
//   general            dense Gaussian Hermitian on the full space
//   pure_dephasing     sum_l Z_l (x) B_l + I (x) H_B, sys_dim = 2^L
//   qdd_counterexample I(x)J0 + Z(x)J1 + X(x)J2 + Y(x)J12 on one qubit; Y is
//                      the Hermitian form i*Z*X of the Z X product term
HamiltonianModel random_model(const ModelDescriptor& descriptor);

// Wraps a caller-built Hamiltonian; checks Hermiticity and dimensions.
HamiltonianModel custom_model(CMatrix h, int sys_dim, int bath_dim);

// Omega (x) I_bath.
CMatrix lift(const Operator& system_op, int bath_dim);

// (H + W H W) / 2 and (H - W H W) / 2 with W = omega (x) I.
std::pair<CMatrix, CMatrix> decompose(const CMatrix& h, const Operator& omega, int bath_dim);
std::pair<CMatrix, CMatrix> decompose(const HamiltonianModel& model, const Operator& omega);

// Random Hermitian matrix with unit spectral norm.
CMatrix random_hermitian(int dim, CounterRng& rng);

nlohmann::json to_json(const ModelDescriptor& d);
ModelDescriptor descriptor_from_json(const nlohmann::json& j);

}  // namespace ddkit
