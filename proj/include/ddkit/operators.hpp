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

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddkit/linalg.hpp"

namespace ddkit {

using linalg::CMatrix;

// A labelled system operator. MOOS members are additionally unitary and
// Hermitian (Omega^2 = I).
struct Operator {
  std::string label;
  CMatrix matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

enum class Axis { x, y, z };

// Single-qubit Pauli on `qubit` (1-based) of an L-qubit register. Qubit 1 is
// the leftmost (slowest) Kronecker factor. Labels are "X1", "Y2", ...
Operator pauli(Axis axis, int qubit, int num_qubits);

// (-1)^{m_l} on basis state |m>, where m_l is the l-th binary digit of m
// (l = 1 is the least significant bit). Requires 1 <= l <= ceil(log2 M).
Operator sigma_z_level(int l, int dim);

// Swaps |m> and |m + 2^{l-1}> for every m whose l-th bit is zero. Requires
// dim % 2^l == 0.
Operator sigma_x_level(int l, int dim);

// Number of bits needed to index `dim` levels, ceil(log2 dim).
int level_bits(int dim);

struct MoosSpec {
  enum class Kind { qubit_dephasing, qubit_full, mlevel_diagonal, mlevel_full, custom };
  Kind kind = Kind::qubit_full;
  int size = 1;  // L qubits or M levels
  std::vector<Operator> custom;

  // Parses "qubit_full:2", "qubit_dephasing:3", "mlevel_diagonal:5",
  // "mlevel_full:6".
  static MoosSpec parse(std::string_view text);
  std::string to_string() const;
};

// Validated mutually-orthogonal operation set.
class Moos {
 public:
  // Validates unitarity, Hermiticity, pairwise (anti)commutation and the
  // trace condition on anticommuting pairs. Throws PreconditionError naming
  // the offending element or pair.
  static Moos validate(std::vector<Operator> elements);

  const std::vector<Operator>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  int dim() const { return elements_.empty() ? 0 : elements_.front().dim(); }

  // +1 commute, -1 anticommute.
  int signature(std::size_t i, std::size_t j) const { return signature_[i][j]; }
  const std::vector<std::vector<int>>& signature_matrix() const { return signature_; }
  // Measured ||[A,B]|| and ||{A,B}|| for diagnostics.
  double commutator_residual(std::size_t i, std::size_t j) const { return comm_[i][j]; }
  double anticommutator_residual(std::size_t i, std::size_t j) const { return anti_[i][j]; }

  // Throws PreconditionError if the label is absent.
  const Operator& find(std::string_view label) const;
  bool contains(std::string_view label) const;

 private:
  std::vector<Operator> elements_;
  std::vector<std::vector<int>> signature_;
  std::vector<std::vector<double>> comm_;
  std::vector<std::vector<double>> anti_;
};

Moos build_moos(const MoosSpec& spec);

// Orthonormal (Tr(A^dagger B)/dim) basis of the traceless real Lie algebra
// generated from the MOOS by i[.,.], {.,.} and real linear combination.
// Throws PreconditionError when the span grows past max_dim.
std::vector<Operator> lie_closure(const std::vector<Operator>& generators, int max_dim);
std::vector<Operator> lie_closure(const Moos& moos, int max_dim);

// Norm of the component of `op` outside span(basis), trace inner product.
double projection_residual(const CMatrix& op, const std::vector<Operator>& basis);

// {"dim": d, "elements": [{"label", "re", "im"}], "signature": [[...]]}
nlohmann::json to_json(const Operator& op);
nlohmann::json to_json(const Moos& moos);
Operator operator_from_json(const nlohmann::json& j);
Moos moos_from_json(const nlohmann::json& j);

}  // namespace ddkit
