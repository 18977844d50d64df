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

#include <complex>

#include <Eigen/Dense>

namespace ddkit::linalg {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Shared numerical tolerances. Tests compare against these names rather
// than literals so that library and checks never drift apart.
struct Tolerances {
  static constexpr double kHermitian = 1e-10;
  static constexpr double kUnitary = 1e-12;
};

// Largest absolute entry of h - h^dagger.
double hermitian_deviation(const CMatrix& h);

// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
struct EigenSystem {
  RVector values;
  CMatrix vectors;

  // exp(-i * H * t) assembled from the stored decomposition.
  CMatrix evolve(double t) const;
};

// Throws PreconditionError when h deviates from Hermitian by more than
// Tolerances::kHermitian, reporting the deviation.
EigenSystem eigh(const CMatrix& h);

// exp(-i h t) for Hermitian h via its eigendecomposition.
CMatrix expm_i(const CMatrix& h, double t);

// Largest singular value.
double spectral_norm(const CMatrix& m);

// Kronecker product, a's index varying slowest.
CMatrix kron(const CMatrix& a, const CMatrix& b);

CMatrix identity(Eigen::Index dim);
CMatrix commutator(const CMatrix& a, const CMatrix& b);
CMatrix anticommutator(const CMatrix& a, const CMatrix& b);

// || U^dagger U - I || in spectral norm.
double unitarity_defect(const CMatrix& u);

}  // namespace ddkit::linalg
