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

#include "ddkit/model.hpp"

#include <charconv>
#include <sstream>

#include "ddkit/errors.hpp"

namespace ddkit {

namespace {

using linalg::Complex;

constexpr int kMaxTotalDim = 256;

int parse_int(std::string_view s, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw PreconditionError(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
  }
  return value;
}

void check_dims(int sys_dim, int bath_dim) {
  if (sys_dim < 1 || bath_dim < 1 || sys_dim * bath_dim > kMaxTotalDim) {
    std::ostringstream msg;
    msg << "model dimension " << sys_dim << " x " << bath_dim << " outside the budget (total <= "
        << kMaxTotalDim << ")";
    throw PreconditionError(msg.str());
  }
}

}  // namespace

std::string to_string(Structure s) {
  switch (s) {
    case Structure::pure_dephasing:
      return "pure_dephasing";
    case Structure::general:
      return "general";
    case Structure::qdd_counterexample:
      return "qdd_counterexample";
    case Structure::custom:
      return "custom";
  }
  return "?";
}

Structure structure_from_string(std::string_view s) {
  if (s == "pure_dephasing") return Structure::pure_dephasing;
  if (s == "general") return Structure::general;
  if (s == "qdd_counterexample") return Structure::qdd_counterexample;
  if (s == "custom") return Structure::custom;
  throw PreconditionError("unknown model structure '" + std::string(s) + "'");
}

ModelDescriptor ModelDescriptor::parse(std::string_view text) {
  const auto colon = text.find(':');
  const auto times = text.find('x', colon == std::string_view::npos ? 0 : colon);
  if (colon == std::string_view::npos || times == std::string_view::npos) {
    throw PreconditionError("model spec must look like structure:SYSxBATH, got '" +
                            std::string(text) + "'");
  }
  ModelDescriptor d;
  d.structure = structure_from_string(text.substr(0, colon));
  d.sys_dim = parse_int(text.substr(colon + 1, times - colon - 1), "system dimension");
  d.bath_dim = parse_int(text.substr(times + 1), "bath dimension");
  check_dims(d.sys_dim, d.bath_dim);
  return d;
}

CMatrix random_hermitian(int dim, CounterRng& rng) {
  CMatrix a(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const double re = rng.normal();
      const double im = rng.normal();
      a(r, c) = Complex(re, im);
    }
  }
  CMatrix h = 0.5 * (a + a.adjoint());
  const double norm = linalg::spectral_norm(h);
  return h / norm;
}

CMatrix lift(const Operator& system_op, int bath_dim) {
  return linalg::kron(system_op.matrix, linalg::identity(bath_dim));
}

HamiltonianModel random_model(const ModelDescriptor& d) {
  check_dims(d.sys_dim, d.bath_dim);
  if (!(d.norm_bound > 0.0)) throw PreconditionError("norm_bound must be positive");
  CounterRng rng(d.seed);
  const CMatrix bath_id = linalg::identity(d.bath_dim);
  CMatrix h;
  switch (d.structure) {
    case Structure::general: {
      h = random_hermitian(d.sys_dim * d.bath_dim, rng);
      break;
    }
    case Structure::pure_dephasing: {
      const int qubits = level_bits(d.sys_dim);
      if ((1 << qubits) != d.sys_dim) {
        throw PreconditionError("pure_dephasing needs a qubit register (sys_dim = 2^L)");
      }
      h = linalg::kron(linalg::identity(d.sys_dim), random_hermitian(d.bath_dim, rng));
      for (int l = 1; l <= qubits; ++l) {
        h += linalg::kron(pauli(Axis::z, l, qubits).matrix, random_hermitian(d.bath_dim, rng));
      }
      break;
    }
    case Structure::qdd_counterexample: {
      if (d.sys_dim != 2) throw PreconditionError("qdd_counterexample is a single-qubit model");
      const CMatrix z = pauli(Axis::z, 1, 1).matrix;
      const CMatrix x = pauli(Axis::x, 1, 1).matrix;
      const CMatrix zx_herm = Complex(0.0, 1.0) * z * x;
      const double quarter = 0.25;
      h = linalg::kron(linalg::identity(2), quarter * random_hermitian(d.bath_dim, rng));
      h += linalg::kron(z, quarter * random_hermitian(d.bath_dim, rng));
      h += linalg::kron(x, quarter * random_hermitian(d.bath_dim, rng));
      h += linalg::kron(zx_herm, quarter * random_hermitian(d.bath_dim, rng));
      break;
    }
    case Structure::custom:
      throw PreconditionError("custom models are built with custom_model(), not from a seed");
  }
  h = 0.5 * (h + h.adjoint());
  h *= d.norm_bound / linalg::spectral_norm(h);
  return HamiltonianModel{d, std::move(h)};
}

HamiltonianModel custom_model(CMatrix h, int sys_dim, int bath_dim) {
  check_dims(sys_dim, bath_dim);
  if (h.rows() != sys_dim * bath_dim || h.cols() != h.rows()) {
    throw PreconditionError("custom Hamiltonian has the wrong dimension");
  }
  const double dev = linalg::hermitian_deviation(h);
  if (dev > linalg::Tolerances::kHermitian) {
    throw PreconditionError("custom Hamiltonian is not Hermitian (deviation " + std::to_string(dev) +
                            ")");
  }
  ModelDescriptor d{Structure::custom, sys_dim, bath_dim, linalg::spectral_norm(h), 0};
  return HamiltonianModel{d, std::move(h)};
}

std::pair<CMatrix, CMatrix> decompose(const CMatrix& h, const Operator& omega, int bath_dim) {
  const CMatrix w = lift(omega, bath_dim);
  if (w.rows() != h.rows()) throw PreconditionError("decompose: operator/model dimension mismatch");
  const CMatrix mirrored = w * h * w;
  return {0.5 * (h + mirrored), 0.5 * (h - mirrored)};
}

std::pair<CMatrix, CMatrix> decompose(const HamiltonianModel& model, const Operator& omega) {
  return decompose(model.h_total, omega, model.descriptor.bath_dim);
}

nlohmann::json to_json(const ModelDescriptor& d) {
  return {{"structure", to_string(d.structure)},
          {"sys_dim", d.sys_dim},
          {"bath_dim", d.bath_dim},
          {"norm_bound", d.norm_bound},
          {"seed", d.seed}};
}

ModelDescriptor descriptor_from_json(const nlohmann::json& j) {
  ModelDescriptor d;
  d.structure = structure_from_string(j.at("structure").get<std::string>());
  d.sys_dim = j.at("sys_dim").get<int>();
  d.bath_dim = j.at("bath_dim").get<int>();
  d.norm_bound = j.at("norm_bound").get<double>();
  d.seed = j.at("seed").get<std::uint64_t>();
  return d;
}

}  // namespace ddkit
