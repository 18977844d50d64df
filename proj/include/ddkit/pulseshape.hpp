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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddkit/model.hpp"
#include "ddkit/operators.hpp"
#include "ddkit/simulate.hpp"

namespace ddkit {

struct Segment {
  double len_frac = 0.0;  // fraction of tau_p
  double amp = 0.0;       // v(t) on this segment

  bool operator==(const Segment&) const = default;
};

// Piecewise-constant control envelope v(t) on [0, tau_p]. The pulse
// Hamiltonian is v(t) * Omega; tau_s is the instant the ideal pulse stands in
// for.
struct PulseShape {
  double tau_p = 1.0;
  double tau_s = 0.5;
  std::vector<Segment> segments;

  // Integral of v over [0, tau_p].
  double area() const;
  // Integral of v over [0, t].
  double cumulative_area(double t) const;
  double amplitude_at(double t) const;
  // Segment boundaries in absolute time, including 0 and tau_p.
  std::vector<double> breakpoints() const;
  // Same pulse stretched to a new duration with its area preserved.
  PulseShape rescaled(double new_tau_p) const;

  bool operator==(const PulseShape&) const = default;
};

// Area of a pi pulse: exp(-i (pi/2) Omega) = -i Omega.
inline constexpr double kPiPulseArea = 1.57079632679489661923;

struct EtaIntegrals {
  double eta11 = 0.0;
  double eta12 = 0.0;
};

// First-order error coefficients
//   eta11 = int (t - tau_s) v(t) cos(phi0 - psi(t)) dt
//   eta12 = int (t - tau_s) v(t) sin(phi0 - psi(t)) dt
// with psi(t) = 2 int_{tau_s}^t v and phi0 = int_{tau_s}^{tau_p} v - int_0^{tau_s} v.
// Uses per-segment antiderivatives.
EtaIntegrals eta_integrals(const PulseShape& shape);

// Same integrals for an arbitrary envelope by adaptive Gauss-Kronrod
// quadrature (absolute tolerance ~1e-12). `breakpoints` are optional hints.
EtaIntegrals eta_integrals(const std::function<double(double)>& envelope, double tau_p,
                           double tau_s, const std::vector<double>& breakpoints = {});

struct PulseFamily {
  enum class Kind { rect, symmetric, piecewise };
  Kind kind = Kind::symmetric;
  int segments = 3;

  // "rect", "sym3", "sym4", "pc4", ...
  static PulseFamily parse(std::string_view text);
  std::string to_string() const;
  // Parameters left after the area constraint (symmetric families also have
  // eta11 = 0 automatically).
  int free_parameters() const;
};

// Envelope of `family` on tau_p = 1, tau_s = 1/2 built from its parameter
// vector (one amplitude per independent segment).
PulseShape shape_from_parameters(const PulseFamily& family, const std::vector<double>& params);
std::vector<double> parameters_of(const PulseFamily& family, const PulseShape& shape);

// Rectangular pi pulse of duration tau_p centred at tau_p / 2.
PulseShape rectangular_pulse(double tau_p);

struct DesignOptions {
  int max_iterations = 200;
  int restarts = 20;
  double tolerance = 1e-12;
  std::uint64_t seed = 2024;
};

struct PulseDesign {
  PulseShape shape;
  int iterations = 0;  // Newton iterations of the successful start
  int starts = 0;      // starting points tried
  double residual = 0.0;
};

// Damped Newton (least-squares step, finite-difference Jacobian) on
// [area - pi/2, eta11, eta12]. Throws NumericalError carrying the best
// residual when no start converges.
PulseDesign design_pulse(const PulseFamily& family, const DesignOptions& options = {});

// Newton iterations from a given envelope (used to check that a design is a
// fixed point).
PulseDesign refine_pulse(const PulseFamily& family, const PulseShape& start,
                         const DesignOptions& options = {});

struct PulseIntegration {
  int steps = 1000;
  // Maximum allowed || U(steps) - U(2 steps) ||.
  double halving_tolerance = 1e-11;
};

// Time-ordered propagator under H + v(t) Omega (x) I over [0, tau_p] by the
// midpoint-exponential product rule on a grid aligned with the segments.
CMatrix pulse_propagator(const PulseShape& shape, const HamiltonianModel& model,
                         const Operator& omega, int steps);

// || U(tau_p) - exp(-i (tau_p - tau_s) H) (P (x) I) exp(-i tau_s H) || with
// P = exp(-i area Omega). Throws NumericalError when step halving disagrees.
double pulse_error(const PulseShape& shape, const HamiltonianModel& model, const Operator& omega,
                   const PulseIntegration& integration = {});

// pulse_error over a tau_p grid and the seeds of `config`, reduced and fitted
// like an order scan. config.t_grid is ignored in favour of tau_grid.
ScalingResult pulse_error_scan(const PulseShape& shape, const ModelDescriptor& model,
                               const Operator& omega, const std::vector<double>& tau_grid,
                               const RunConfig& config, const PulseIntegration& integration = {});

// {"tau_p", "tau_s", "segments": [{"len_frac", "amp"}]}
nlohmann::json to_json(const PulseShape& shape);
PulseShape pulse_from_json(const nlohmann::json& j);

}  // namespace ddkit
