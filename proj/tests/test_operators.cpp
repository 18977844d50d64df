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

#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <string>

#include "ddkit/errors.hpp"
#include "ddkit/operators.hpp"

using namespace ddkit;
using linalg::Complex;

namespace {

CMatrix diag(std::initializer_list<double> d) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

double dist(const CMatrix& a, const CMatrix& b) { return (a - b).norm(); }

// Checks the stated MOOS invariants directly on the matrices.
void check_invariants(const Moos& m) {
  const CMatrix id = linalg::identity(m.dim());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const CMatrix& a = m.elements()[i].matrix;
    CHECK(linalg::hermitian_deviation(a) < 1e-12);
    CHECK(linalg::spectral_norm(a * a - id) < 1e-12);
    for (std::size_t j = 0; j < m.size(); ++j) {
      const CMatrix& b = m.elements()[j].matrix;
      const double comm = linalg::spectral_norm(linalg::commutator(a, b));
      const double anti = linalg::spectral_norm(linalg::anticommutator(a, b));
      CHECK(std::min(comm, anti) < 1e-12);
      CHECK(m.signature(i, j) == (comm < 1e-12 ? 1 : -1));
      if (comm >= 1e-12) {
        CHECK(std::abs(a.trace()) < 1e-12);
        CHECK(std::abs(b.trace()) < 1e-12);
      }
    }
  }
}

}  // namespace

TEST_CASE("pauli matrices and ordering") {
  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(dist(pauli(Axis::x, 1, 1).matrix, x) == 0.0);
  CHECK(dist(pauli(Axis::z, 2, 2).matrix, diag({1, -1, 1, -1})) == 0.0);
  CHECK(dist(pauli(Axis::z, 1, 2).matrix, diag({1, 1, -1, -1})) == 0.0);
  CHECK(pauli(Axis::y, 2, 3).label == "Y2");
  const CMatrix anti = pauli(Axis::x, 1, 1).matrix * pauli(Axis::y, 1, 1).matrix +
                       pauli(Axis::y, 1, 1).matrix * pauli(Axis::x, 1, 1).matrix;
  CHECK(anti.norm() == 0.0);
  CHECK_THROWS_AS(pauli(Axis::x, 3, 2), PreconditionError);
  CHECK_THROWS_AS(pauli(Axis::x, 1, 9), PreconditionError);
}

TEST_CASE("sigma_z_level") {
  CHECK(dist(sigma_z_level(1, 3).matrix, diag({1, -1, 1})) == 0.0);
  CHECK(dist(sigma_z_level(2, 4).matrix, diag({1, 1, -1, -1})) == 0.0);
  CHECK(dist(sigma_z_level(1, 2).matrix, pauli(Axis::z, 1, 1).matrix) == 0.0);
  CHECK_THROWS_AS(sigma_z_level(3, 4), PreconditionError);
}

TEST_CASE("sigma_x_level") {
  const CMatrix s = sigma_x_level(1, 4).matrix;
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 1) = expected(1, 0) = expected(2, 3) = expected(3, 2) = 1.0;
  CHECK(dist(s, expected) == 0.0);
  CHECK_THROWS_AS(sigma_x_level(1, 3), PreconditionError);
  const CMatrix z = sigma_z_level(1, 4).matrix;
  CHECK((s * z + z * s).norm() == 0.0);
}

TEST_CASE("level operators reduce to Paulis on 2^L levels") {
  // Bit l (least significant first) of the level index is qubit L + 1 - l.
  for (int qubits = 1; qubits <= 3; ++qubits) {
    const int dim = 1 << qubits;
    for (int l = 1; l <= qubits; ++l) {
      const int q = qubits + 1 - l;
      CHECK(dist(sigma_z_level(l, dim).matrix, pauli(Axis::z, q, qubits).matrix) == 0.0);
      CHECK(dist(sigma_x_level(l, dim).matrix, pauli(Axis::x, q, qubits).matrix) == 0.0);
    }
  }
}

TEST_CASE("qubit_full MOOS structure") {
  const Moos m = build_moos(MoosSpec::parse("qubit_full:2"));
  REQUIRE(m.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const bool same_qubit = i / 2 == j / 2;
      const int expected = i == j || !same_qubit ? 1 : -1;
      CHECK(m.signature(i, j) == expected);
    }
  }
  check_invariants(m);
}

TEST_CASE("mlevel_diagonal has the minimum number of elements") {
  CHECK(build_moos(MoosSpec::parse("mlevel_diagonal:5")).size() == 3);
  for (int dim = 2; dim <= 17; ++dim) {
    const Moos m = build_moos({MoosSpec::Kind::mlevel_diagonal, dim, {}});
    CHECK(static_cast<int>(m.size()) == static_cast<int>(std::ceil(std::log2(dim))));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) CHECK(m.signature(i, j) == 1);
  }
}

TEST_CASE("every built MOOS satisfies the invariants") {
  for (int n = 1; n <= 3; ++n) {
    check_invariants(build_moos({MoosSpec::Kind::qubit_dephasing, n, {}}));
    check_invariants(build_moos({MoosSpec::Kind::qubit_full, n, {}}));
  }
  for (int dim = 2; dim <= 12; ++dim) {
    check_invariants(build_moos({MoosSpec::Kind::mlevel_diagonal, dim, {}}));
    check_invariants(build_moos({MoosSpec::Kind::mlevel_full, dim, {}}));
  }
}

TEST_CASE("mlevel_full(6) drops the second level flip") {
  const Moos m = build_moos(MoosSpec::parse("mlevel_full:6"));
  CHECK(m.contains("SX1"));
  CHECK_FALSE(m.contains("SX2"));
  CHECK(m.contains("SZ2"));
  CHECK_FALSE(m.contains("SZ3"));
}

TEST_CASE("custom set with a non-orthogonal pair is rejected with both residuals") {
  const Operator x = pauli(Axis::x, 1, 1);
  const Operator w{"W", (x.matrix + pauli(Axis::y, 1, 1).matrix) / std::numbers::sqrt2};
  // ||[X, W]|| = ||{X, W}|| = sqrt 2 by direct algebra.
  CHECK(linalg::spectral_norm(linalg::commutator(x.matrix, w.matrix)) ==
        doctest::Approx(std::numbers::sqrt2));
  std::string message;
  try {
    build_moos({MoosSpec::Kind::custom, 0, {x, w}});
  } catch (const PreconditionError& e) {
    message = e.what();
  }
  CHECK(message.find("X1") != std::string::npos);
  CHECK(message.find("W") != std::string::npos);
  CHECK(message.find("1.414") != std::string::npos);
}

TEST_CASE("non-unitary or non-Hermitian members are rejected") {
  const CMatrix z = pauli(Axis::z, 1, 1).matrix;
  CHECK_THROWS_AS(Moos::validate({{"H", z * 0.5}}), PreconditionError);
  CHECK_THROWS_AS(Moos::validate({{"iZ", z * Complex(0, 1)}}), PreconditionError);
  CHECK_THROWS_AS(Moos::validate({}), PreconditionError);
}

TEST_CASE("lie_closure dimensions") {
  const Operator x = pauli(Axis::x, 1, 1), y = pauli(Axis::y, 1, 1), z = pauli(Axis::z, 1, 1);
  CHECK(lie_closure(std::vector<Operator>{z}, 10).size() == 1);
  CHECK(lie_closure(std::vector<Operator>{x, y}, 10).size() == 3);
  CHECK(lie_closure(build_moos(MoosSpec::parse("qubit_full:1")), 10).size() == 3);
  CHECK(lie_closure(build_moos(MoosSpec::parse("qubit_full:2")), 20).size() == 15);
  CHECK_THROWS_AS(lie_closure(build_moos(MoosSpec::parse("qubit_full:2")), 10), PreconditionError);
}

TEST_CASE("lie_closure does not depend on generator order") {
  const Moos m = build_moos(MoosSpec::parse("qubit_full:2"));
  std::vector<Operator> forward = m.elements();
  std::vector<Operator> backward(forward.rbegin(), forward.rend());
  const auto a = lie_closure(forward, 20);
  const auto b = lie_closure(backward, 20);
  REQUIRE(a.size() == b.size());
  for (const auto& op : a) CHECK(projection_residual(op.matrix, b) < 1e-9);
  for (const auto& op : b) CHECK(projection_residual(op.matrix, a) < 1e-9);
}

TEST_CASE("encoded closure keeps the ZZ generator as a symmetry") {
  const Operator x1 = pauli(Axis::x, 1, 2), x2 = pauli(Axis::x, 2, 2);
  const Operator z1 = pauli(Axis::z, 1, 2), z2 = pauli(Axis::z, 2, 2);
  const Moos enc = Moos::validate({{"XX", x1.matrix * x2.matrix}, z1, z2});
  const auto basis = lie_closure(enc, 15);
  const CMatrix zz = z1.matrix * z2.matrix;
  CHECK(projection_residual(zz, basis) < 1e-9);
  for (const auto& b : basis) CHECK(linalg::spectral_norm(linalg::commutator(b.matrix, zz)) < 1e-9);
  CHECK(projection_residual(x1.matrix, basis) > 0.5);
}

TEST_CASE("products of MOOS elements as composed pulses") {
  // Commuting members multiply to a unitary Hermitian operator directly; an
  // anticommuting pair needs the phase i to stay Hermitian.
  const Moos m = build_moos(MoosSpec::parse("qubit_full:2"));
  const CMatrix id = linalg::identity(4);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      CMatrix p = m.elements()[i].matrix * m.elements()[j].matrix;
      if (m.signature(i, j) < 0) p *= Complex(0, 1);
      CHECK(linalg::hermitian_deviation(p) < 1e-14);
      CHECK(linalg::spectral_norm(p * p - id) < 1e-14);
    }
  }
}

TEST_CASE("MOOS JSON round trip") {
  const Moos m = build_moos(MoosSpec::parse("mlevel_full:6"));
  const Moos back = moos_from_json(nlohmann::json::parse(to_json(m).dump()));
  REQUIRE(back.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(back.elements()[i].label == m.elements()[i].label);
    CHECK(dist(back.elements()[i].matrix, m.elements()[i].matrix) == 0.0);
  }
  CHECK(back.signature_matrix() == m.signature_matrix());
  CHECK(MoosSpec::parse("qubit_dephasing:3").to_string() == "qubit_dephasing:3");
  CHECK_THROWS_AS(MoosSpec::parse("qutrit:2"), PreconditionError);
}
