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

#include "ddkit/linalg.hpp"

#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ddkit/errors.hpp"

namespace ddkit::linalg {

double hermitian_deviation(const CMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

EigenSystem eigh(const CMatrix& h) {
  const double dev = hermitian_deviation(h);
  if (!(dev <= Tolerances::kHermitian)) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max |h - h^dagger| = " << dev << " exceeds "
        << Tolerances::kHermitian;
    throw PreconditionError(msg.str());
  }
  // Symmetrize so that sub-tolerance noise does not leak into the solver.
  const CMatrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm);
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix EigenSystem::evolve(double t) const {
  Eigen::VectorXcd phases(values.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    phases(k) = std::polar(1.0, -values(k) * t);
  }
  return vectors * phases.asDiagonal() * vectors.adjoint();
}

CMatrix expm_i(const CMatrix& h, double t) { return eigh(h).evolve(t); }

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix identity(Eigen::Index dim) { return CMatrix::Identity(dim, dim); }

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) { return a * b + b * a; }

double unitarity_defect(const CMatrix& u) {
  return spectral_norm(u.adjoint() * u - identity(u.rows()));
}

}  // namespace ddkit::linalg
