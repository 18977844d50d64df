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

#include "ddkit/operators.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "ddkit/errors.hpp"

namespace ddkit {

namespace {

using linalg::Complex;
using linalg::Tolerances;

constexpr double kRankTol = 1e-9;

CMatrix pauli_2x2(Axis axis) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (axis) {
    case Axis::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Axis::y:
      m(0, 1) = Complex(0.0, -1.0);
      m(1, 0) = Complex(0.0, 1.0);
      break;
    case Axis::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

char axis_letter(Axis axis) {
  switch (axis) {
    case Axis::x:
      return 'X';
    case Axis::y:
      return 'Y';
    case Axis::z:
      return 'Z';
  }
  return '?';
}

// Real trace inner product Re Tr(A^dagger B) / dim. All closure elements are
// Hermitian, so this is the natural real-Lie-algebra metric.
double inner(const CMatrix& a, const CMatrix& b) {
  return (a.adjoint() * b).trace().real() / static_cast<double>(a.rows());
}

CMatrix traceless_part(const CMatrix& m) {
  const Complex tr = m.trace() / static_cast<double>(m.rows());
  return m - tr * linalg::identity(m.rows());
}

CMatrix orthogonalize(CMatrix m, const std::vector<Operator>& basis) {
  // Two passes of modified Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) m -= inner(b.matrix, m) * b.matrix;
  }
  return m;
}

}  // namespace

int level_bits(int dim) {
  int bits = 0;
  while ((1 << bits) < dim) ++bits;
  return bits;
}

Operator pauli(Axis axis, int qubit, int num_qubits) {
  if (num_qubits < 1 || num_qubits > 8 || qubit < 1 || qubit > num_qubits) {
    std::ostringstream msg;
    msg << "pauli: qubit index " << qubit << " out of range for " << num_qubits
        << " qubits (need 1 <= index <= L <= 8)";
    throw PreconditionError(msg.str());
  }
  CMatrix m = linalg::identity(1);
  for (int q = 1; q <= num_qubits; ++q) {
    m = linalg::kron(m, q == qubit ? pauli_2x2(axis) : linalg::identity(2));
  }
  return Operator{std::string(1, axis_letter(axis)) + std::to_string(qubit), std::move(m)};
}

Operator sigma_z_level(int l, int dim) {
  if (dim < 2 || dim > 256) throw PreconditionError("sigma_z_level: dimension must be in 2..256");
  const int bits = level_bits(dim);
  if (l < 1 || l > bits) {
    std::ostringstream msg;
    msg << "sigma_z_level: bit index " << l << " outside 1.." << bits << " for M = " << dim;
    throw PreconditionError(msg.str());
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) m(k, k) = ((k >> (l - 1)) & 1) ? -1.0 : 1.0;
  return Operator{"SZ" + std::to_string(l), std::move(m)};
}

Operator sigma_x_level(int l, int dim) {
  if (dim < 2 || dim > 256) throw PreconditionError("sigma_x_level: dimension must be in 2..256");
  if (l < 1 || l > level_bits(dim)) {
    throw PreconditionError("sigma_x_level: bit index " + std::to_string(l) + " out of range");
  }
  const int period = 1 << l;
  if (dim % period != 0) {
    std::ostringstream msg;
    msg << "sigma_x_level: M / 2^l must be an integer, but " << dim << " mod " << period
        << " = " << dim % period;
    throw PreconditionError(msg.str());
  }
  const int half = period / 2;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    if (((k >> (l - 1)) & 1) == 0) {
      m(k + half, k) = 1.0;
      m(k, k + half) = 1.0;
    }
  }
  return Operator{"SX" + std::to_string(l), std::move(m)};
}

MoosSpec MoosSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw PreconditionError("MOOS spec must look like kind:size, got '" + std::string(text) + "'");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view num = text.substr(colon + 1);
  MoosSpec spec;
  if (kind == "qubit_dephasing") {
    spec.kind = Kind::qubit_dephasing;
  } else if (kind == "qubit_full") {
    spec.kind = Kind::qubit_full;
  } else if (kind == "mlevel_diagonal") {
    spec.kind = Kind::mlevel_diagonal;
  } else if (kind == "mlevel_full") {
    spec.kind = Kind::mlevel_full;
  } else {
    throw PreconditionError("unknown MOOS kind '" + std::string(kind) + "'");
  }
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), spec.size);
  if (ec != std::errc() || ptr != num.data() + num.size() || spec.size < 1) {
    throw PreconditionError("MOOS size must be a positive integer, got '" + std::string(num) + "'");
  }
  return spec;
}

std::string MoosSpec::to_string() const {
  switch (kind) {
    case Kind::qubit_dephasing:
      return "qubit_dephasing:" + std::to_string(size);
    case Kind::qubit_full:
      return "qubit_full:" + std::to_string(size);
    case Kind::mlevel_diagonal:
      return "mlevel_diagonal:" + std::to_string(size);
    case Kind::mlevel_full:
      return "mlevel_full:" + std::to_string(size);
    case Kind::custom:
      return "custom";
  }
  return "?";
}

Moos Moos::validate(std::vector<Operator> elements) {
  if (elements.empty()) throw PreconditionError("MOOS must contain at least one operator");
  const int dim = elements.front().dim();
  for (const auto& op : elements) {
    if (op.matrix.rows() != op.matrix.cols() || op.dim() != dim) {
      throw PreconditionError("MOOS operator '" + op.label + "' does not act on dimension " +
                              std::to_string(dim));
    }
    const double herm = linalg::hermitian_deviation(op.matrix);
    const double square = linalg::spectral_norm(op.matrix * op.matrix - linalg::identity(dim));
    if (herm > Tolerances::kHermitian || square > Tolerances::kHermitian) {
      std::ostringstream msg;
      msg << "MOOS operator '" << op.label << "' is not unitary Hermitian: max|A - A^dagger| = "
          << herm << ", ||A^2 - I|| = " << square;
      throw PreconditionError(msg.str());
    }
  }

  const std::size_t n = elements.size();
  Moos moos;
  moos.signature_.assign(n, std::vector<int>(n, 1));
  moos.comm_.assign(n, std::vector<double>(n, 0.0));
  moos.anti_.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& a = elements[i].matrix;
      const auto& b = elements[j].matrix;
      const double comm = linalg::spectral_norm(linalg::commutator(a, b));
      const double anti = linalg::spectral_norm(linalg::anticommutator(a, b));
      moos.comm_[i][j] = comm;
      moos.anti_[i][j] = anti;
      if (comm <= Tolerances::kHermitian) {
        moos.signature_[i][j] = 1;
      } else if (anti <= Tolerances::kHermitian) {
        moos.signature_[i][j] = -1;
        for (const auto* op : {&elements[i], &elements[j]}) {
          const double tr = std::abs(op->matrix.trace());
          if (tr > Tolerances::kHermitian) {
            std::ostringstream msg;
            msg << "MOOS operator '" << op->label << "' anticommutes with a partner but has trace "
                << tr << " (anticommuting members must be traceless)";
            throw PreconditionError(msg.str());
          }
        }
      } else {
        std::ostringstream msg;
        msg << "operators '" << elements[i].label << "' and '" << elements[j].label
            << "' neither commute nor anticommute: ||[A,B]|| = " << comm
            << ", ||{A,B}|| = " << anti;
        throw PreconditionError(msg.str());
      }
    }
  }
  moos.elements_ = std::move(elements);
  return moos;
}

const Operator& Moos::find(std::string_view label) const {
  for (const auto& op : elements_) {
    if (op.label == label) return op;
  }
  throw PreconditionError("label '" + std::string(label) + "' is not an element of the MOOS");
}

bool Moos::contains(std::string_view label) const {
  for (const auto& op : elements_) {
    if (op.label == label) return true;
  }
  return false;
}

Moos build_moos(const MoosSpec& spec) {
  std::vector<Operator> ops;
  switch (spec.kind) {
    case MoosSpec::Kind::qubit_dephasing:
      for (int l = 1; l <= spec.size; ++l) ops.push_back(pauli(Axis::x, l, spec.size));
      break;
    case MoosSpec::Kind::qubit_full:
      for (int l = 1; l <= spec.size; ++l) {
        ops.push_back(pauli(Axis::z, l, spec.size));
        ops.push_back(pauli(Axis::x, l, spec.size));
      }
      break;
    case MoosSpec::Kind::mlevel_diagonal:
      for (int l = 1; l <= level_bits(spec.size); ++l) ops.push_back(sigma_z_level(l, spec.size));
      break;
    case MoosSpec::Kind::mlevel_full:
      for (int l = 1; l <= level_bits(spec.size); ++l) {
        if ((1 << l) <= spec.size) ops.push_back(sigma_z_level(l, spec.size));
        if (spec.size % (1 << l) == 0) ops.push_back(sigma_x_level(l, spec.size));
      }
      break;
    case MoosSpec::Kind::custom:
      ops = spec.custom;
      break;
  }
  return Moos::validate(std::move(ops));
}

double projection_residual(const CMatrix& op, const std::vector<Operator>& basis) {
  const CMatrix rest = orthogonalize(traceless_part(op), basis);
  return std::sqrt(std::max(0.0, inner(rest, rest)));
}

std::vector<Operator> lie_closure(const std::vector<Operator>& generators, int max_dim) {
  std::vector<Operator> basis;
  auto add = [&](const CMatrix& candidate) {
    CMatrix rest = orthogonalize(traceless_part(candidate), basis);
    const double norm = std::sqrt(std::max(0.0, inner(rest, rest)));
    if (norm <= kRankTol) return;
    if (static_cast<int>(basis.size()) >= max_dim) {
      throw PreconditionError("Lie closure exceeds max_dim = " + std::to_string(max_dim) +
                              " (reached " + std::to_string(basis.size() + 1) + ")");
    }
    rest /= norm;
    basis.push_back(Operator{"L" + std::to_string(basis.size() + 1), std::move(rest)});
  };

  for (const auto& g : generators) add(g.matrix);
  const Complex i_unit(0.0, 1.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const CMatrix a = basis[i].matrix;
      const CMatrix b = basis[j].matrix;
      add(i_unit * linalg::commutator(a, b));
      add(linalg::anticommutator(a, b));
    }
  }
  return basis;
}

std::vector<Operator> lie_closure(const Moos& moos, int max_dim) {
  return lie_closure(moos.elements(), max_dim);
}

nlohmann::json to_json(const Operator& op) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int r = 0; r < op.dim(); ++r) {
    for (int c = 0; c < op.dim(); ++c) {
      re.push_back(op.matrix(r, c).real());
      im.push_back(op.matrix(r, c).imag());
    }
  }
  return {{"label", op.label}, {"re", re}, {"im", im}};
}

nlohmann::json to_json(const Moos& moos) {
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& op : moos.elements()) elements.push_back(to_json(op));
  return {{"dim", moos.dim()}, {"elements", elements}, {"signature", moos.signature_matrix()}};
}

Operator operator_from_json(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != im.size()) throw PreconditionError("operator re/im lengths differ");
  const auto dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(re.size()))));
  if (dim < 1 || static_cast<std::size_t>(dim * dim) != re.size()) {
    throw PreconditionError("operator entry count is not a perfect square");
  }
  Operator op{j.at("label").get<std::string>(), CMatrix(dim, dim)};
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const auto k = static_cast<std::size_t>(r * dim + c);
      op.matrix(r, c) = Complex(re[k].get<double>(), im[k].get<double>());
    }
  }
  return op;
}

Moos moos_from_json(const nlohmann::json& j) {
  std::vector<Operator> ops;
  for (const auto& e : j.at("elements")) ops.push_back(operator_from_json(e));
  Moos moos = Moos::validate(std::move(ops));
  if (j.contains("dim") && j.at("dim").get<int>() != moos.dim()) {
    throw PreconditionError("MOOS document dim does not match its elements");
  }
  return moos;
}

}  // namespace ddkit
