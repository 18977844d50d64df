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

#include "ddkit/pulseshape.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/QR>

#include "ddkit/errors.hpp"
#include "ddkit/parallel.hpp"
#include "ddkit/rng.hpp"

namespace ddkit {

namespace {

using linalg::Complex;

// Below this |2 a L| the closed-form antiderivatives lose digits to
// cancellation, so the segment is integrated by Gauss-Legendre instead.
constexpr double kSmallPhase = 0.5;

struct SegmentSpan {
  double start;
  double stop;
  double amp;
};

std::vector<SegmentSpan> spans_of(const PulseShape& shape) {
  std::vector<SegmentSpan> spans;
  double t = 0.0;
  for (std::size_t k = 0; k < shape.segments.size(); ++k) {
    const double stop = k + 1 == shape.segments.size()
                            ? shape.tau_p
                            : t + shape.segments[k].len_frac * shape.tau_p;
    spans.push_back({t, stop, shape.segments[k].amp});
    t = stop;
  }
  return spans;
}

Eigen::Vector3d design_residual(const PulseFamily& family, const std::vector<double>& params) {
  const PulseShape shape = shape_from_parameters(family, params);
  const EtaIntegrals eta = eta_integrals(shape);
  return {shape.area() - kPiPulseArea, eta.eta11, eta.eta12};
}

// Damped Gauss-Newton from one starting point. Returns the iteration count
// and leaves the best parameters in `params`.
int newton(const PulseFamily& family, std::vector<double>& params, const DesignOptions& options,
           double& residual) {
  Eigen::Vector3d r = design_residual(family, params);
  residual = r.cwiseAbs().maxCoeff();
  const auto n = static_cast<Eigen::Index>(params.size());
  for (int it = 0; it < options.max_iterations; ++it) {
    if (residual <= options.tolerance) return it;
    Eigen::MatrixXd jac(3, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(params[k]));
      std::vector<double> plus = params, minus = params;
      plus[k] += h;
      minus[k] -= h;
      jac.col(k) = (design_residual(family, plus) - design_residual(family, minus)) / (2.0 * h);
    }
    const Eigen::VectorXd step = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(jac).solve(-r);
    double damping = 1.0;
    bool improved = false;
    for (int halvings = 0; halvings < 30; ++halvings, damping *= 0.5) {
      std::vector<double> trial = params;
      for (Eigen::Index k = 0; k < n; ++k) trial[k] += damping * step(k);
      const Eigen::Vector3d rt = design_residual(family, trial);
      if (rt.norm() < r.norm()) {
        params = std::move(trial);
        r = rt;
        improved = true;
        break;
      }
    }
    residual = r.cwiseAbs().maxCoeff();
    if (!improved) return it + 1;
  }
  return options.max_iterations;
}

}  // namespace

double PulseShape::area() const {
  double a = 0.0;
  for (const auto& s : spans_of(*this)) a += (s.stop - s.start) * s.amp;
  return a;
}

double PulseShape::cumulative_area(double t) const {
  double a = 0.0;
  for (const auto& s : spans_of(*this)) {
    if (t <= s.start) break;
    a += (std::min(t, s.stop) - s.start) * s.amp;
  }
  return a;
}

double PulseShape::amplitude_at(double t) const {
  if (t < 0.0 || t > tau_p) return 0.0;
  for (const auto& s : spans_of(*this)) {
    if (t < s.stop) return s.amp;
  }
  return segments.empty() ? 0.0 : segments.back().amp;
}

std::vector<double> PulseShape::breakpoints() const {
  std::vector<double> points{0.0};
  for (const auto& s : spans_of(*this)) points.push_back(s.stop);
  return points;
}

PulseShape PulseShape::rescaled(double new_tau_p) const {
  if (!(new_tau_p > 0.0)) throw PreconditionError("pulse duration must be positive");
  PulseShape out = *this;
  const double factor = tau_p / new_tau_p;
  out.tau_p = new_tau_p;
  out.tau_s = tau_s / factor;
  for (auto& s : out.segments) s.amp *= factor;
  return out;
}

EtaIntegrals eta_integrals(const PulseShape& shape) {
  const double area_before = shape.cumulative_area(shape.tau_s);
  const double phi0 = (shape.area() - area_before) - area_before;
  EtaIntegrals eta;
  for (const auto& s : spans_of(shape)) {
    const double len = s.stop - s.start;
    if (len <= 0.0 || s.amp == 0.0) continue;
    const double k = 2.0 * s.amp;
    const double theta0 = phi0 - 2.0 * (shape.cumulative_area(s.start) - area_before);
    const double x0 = s.start - shape.tau_s;
    if (std::abs(k * len) >= kSmallPhase) {
      // d/ds of these give (s + x0) cos(theta0 - k s) and (s + x0) sin(theta0 - k s).
      const auto fc = [&](double u) {
        return -(u + x0) * std::sin(theta0 - k * u) / k + std::cos(theta0 - k * u) / (k * k);
      };
      const auto fs = [&](double u) {
        return (u + x0) * std::cos(theta0 - k * u) / k + std::sin(theta0 - k * u) / (k * k);
      };
      eta.eta11 += s.amp * (fc(len) - fc(0.0));
      eta.eta12 += s.amp * (fs(len) - fs(0.0));
    } else {
      using Gauss = boost::math::quadrature::gauss<double, 20>;
      eta.eta11 += s.amp * Gauss::integrate(
                               [&](double u) { return (u + x0) * std::cos(theta0 - k * u); }, 0.0,
                               len);
      eta.eta12 += s.amp * Gauss::integrate(
                               [&](double u) { return (u + x0) * std::sin(theta0 - k * u); }, 0.0,
                               len);
    }
  }
  return eta;
}

EtaIntegrals eta_integrals(const std::function<double(double)>& envelope, double tau_p,
                           double tau_s, const std::vector<double>& breakpoints) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr unsigned kDepth = 15;
  constexpr double kTol = 1e-12;
  std::vector<double> cuts{0.0, tau_p};
  for (double b : breakpoints) {
    if (b > 0.0 && b < tau_p) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto integrate = [&](const std::function<double(double)>& f, double a, double b) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double lo = std::max(a, cuts[k]);
      const double hi = std::min(b, cuts[k + 1]);
      if (hi > lo) total += Kronrod::integrate(f, lo, hi, kDepth, kTol);
    }
    return total;
  };
  const double before = integrate(envelope, 0.0, tau_s);
  const double after = integrate(envelope, tau_s, tau_p);
  const double phi0 = after - before;
  const auto psi = [&](double t) {
    return t >= tau_s ? 2.0 * integrate(envelope, tau_s, t) : -2.0 * integrate(envelope, t, tau_s);
  };
  EtaIntegrals eta;
  eta.eta11 = integrate(
      [&](double t) { return (t - tau_s) * envelope(t) * std::cos(phi0 - psi(t)); }, 0.0, tau_p);
  eta.eta12 = integrate(
      [&](double t) { return (t - tau_s) * envelope(t) * std::sin(phi0 - psi(t)); }, 0.0, tau_p);
  return eta;
}

PulseFamily PulseFamily::parse(std::string_view text) {
  PulseFamily f;
  if (text == "rect") {
    f.kind = Kind::rect;
    f.segments = 1;
    return f;
  }
  std::string_view digits;
  if (text.starts_with("sym")) {
    f.kind = Kind::symmetric;
    digits = text.substr(3);
  } else if (text.starts_with("pc")) {
    f.kind = Kind::piecewise;
    digits = text.substr(2);
  } else {
    throw PreconditionError("unknown pulse family '" + std::string(text) + "'");
  }
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), f.segments);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || f.segments < 1 ||
      f.segments > 64) {
    throw PreconditionError("pulse family needs a segment count in 1..64, got '" +
                            std::string(text) + "'");
  }
  return f;
}

std::string PulseFamily::to_string() const {
  switch (kind) {
    case Kind::rect:
      return "rect";
    case Kind::symmetric:
      return "sym" + std::to_string(segments);
    case Kind::piecewise:
      return "pc" + std::to_string(segments);
  }
  return "?";
}

int PulseFamily::free_parameters() const {
  switch (kind) {
    case Kind::rect:
      return 0;
    case Kind::symmetric:
      return (segments + 1) / 2 - 1;
    case Kind::piecewise:
      return segments - 1;
  }
  return 0;
}

PulseShape shape_from_parameters(const PulseFamily& family, const std::vector<double>& params) {
  const int expected = family.free_parameters() + 1;
  if (static_cast<int>(params.size()) != expected) {
    throw PreconditionError("pulse family " + family.to_string() + " takes " +
                            std::to_string(expected) + " parameters");
  }
  PulseShape shape;
  shape.tau_p = 1.0;
  shape.tau_s = 0.5;
  const int n = family.kind == PulseFamily::Kind::rect ? 1 : family.segments;
  for (int j = 0; j < n; ++j) {
    const int p = family.kind == PulseFamily::Kind::symmetric ? std::min(j, n - 1 - j) : j;
    shape.segments.push_back({1.0 / n, params[static_cast<std::size_t>(p)]});
  }
  return shape;
}

std::vector<double> parameters_of(const PulseFamily& family, const PulseShape& shape) {
  const int expected = family.free_parameters() + 1;
  const PulseShape unit = shape.rescaled(1.0);
  std::vector<double> params;
  for (int j = 0; j < expected && j < static_cast<int>(unit.segments.size()); ++j) {
    params.push_back(unit.segments[static_cast<std::size_t>(j)].amp);
  }
  if (static_cast<int>(params.size()) != expected) {
    throw PreconditionError("pulse does not match family " + family.to_string());
  }
  return params;
}

PulseShape rectangular_pulse(double tau_p) {
  return shape_from_parameters(PulseFamily{PulseFamily::Kind::rect, 1}, {kPiPulseArea})
      .rescaled(tau_p);
}

PulseDesign refine_pulse(const PulseFamily& family, const PulseShape& start,
                         const DesignOptions& options) {
  std::vector<double> params = parameters_of(family, start);
  PulseDesign design;
  design.iterations = newton(family, params, options, design.residual);
  design.starts = 1;
  design.shape = shape_from_parameters(family, params);
  return design;
}

PulseDesign design_pulse(const PulseFamily& family, const DesignOptions& options) {
  const int n = family.free_parameters() + 1;
  CounterRng rng(options.seed);
  PulseDesign best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int start = 0; start < options.restarts; ++start) {
    CounterRng stream = rng.split(static_cast<std::uint64_t>(start));
    std::vector<double> params(static_cast<std::size_t>(n));
    for (auto& p : params) p = kPiPulseArea * (1.0 + (start == 0 ? 0.0 : 2.0 * stream.normal()));
    double residual = 0.0;
    const int iterations = newton(family, params, options, residual);
    if (residual < best.residual) {
      best.shape = shape_from_parameters(family, params);
      best.iterations = iterations;
      best.residual = residual;
    }
    best.starts = start + 1;
    if (residual <= options.tolerance) return best;
  }
  std::ostringstream msg;
  msg << "pulse design for family " << family.to_string() << " found no root after "
      << options.restarts << " starts; best max-residual " << best.residual;
  const Eigen::Vector3d r = design_residual(family, parameters_of(family, best.shape));
  msg << " (area - pi/2 = " << r(0) << ", eta11 = " << r(1) << ", eta12 = " << r(2) << ")";
  throw NumericalError(msg.str());
}

CMatrix pulse_propagator(const PulseShape& shape, const HamiltonianModel& model,
                         const Operator& omega, int steps) {
  if (steps < 1) throw PreconditionError("pulse integration needs at least one step");
  const CMatrix w = lift(omega, model.descriptor.bath_dim);
  if (w.rows() != model.h_total.rows()) {
    throw PreconditionError("pulse operator does not act on the model's system");
  }
  CMatrix u = linalg::identity(model.dim());
  for (const auto& s : spans_of(shape)) {
    const double len = s.stop - s.start;
    if (len <= 0.0) continue;
    const int n = std::max(1, static_cast<int>(std::lround(steps * len / shape.tau_p)));
    const double dt = len / n;
    CMatrix step;
    double cached_v = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j < n; ++j) {
      const double v = shape.amplitude_at(s.start + (j + 0.5) * dt);
      if (v != cached_v) {
        step = linalg::expm_i(model.h_total + v * w, dt);
        cached_v = v;
      }
      u = step * u;
    }
  }
  return u;
}

double pulse_error(const PulseShape& shape, const HamiltonianModel& model, const Operator& omega,
                   const PulseIntegration& integration) {
  const CMatrix coarse = pulse_propagator(shape, model, omega, integration.steps);
  const CMatrix fine = pulse_propagator(shape, model, omega, 2 * integration.steps);
  const double disagreement = linalg::spectral_norm(coarse - fine);
  if (disagreement > integration.halving_tolerance) {
    std::ostringstream msg;
    msg << "pulse integration not converged: step halving changes the propagator by "
        << disagreement << " (> " << integration.halving_tolerance << ") at tau_p = " << shape.tau_p;
    throw NumericalError(msg.str());
  }
  const double area = shape.area();
  const int bath = model.descriptor.bath_dim;
  const CMatrix ideal_pulse =
      lift(Operator{"P", std::cos(area) * linalg::identity(omega.dim()) -
                             Complex(0.0, std::sin(area)) * omega.matrix},
           bath);
  const linalg::EigenSystem spectrum = linalg::eigh(model.h_total);
  const CMatrix reference =
      spectrum.evolve(shape.tau_p - shape.tau_s) * ideal_pulse * spectrum.evolve(shape.tau_s);
  return linalg::spectral_norm(fine - reference);
}

ScalingResult pulse_error_scan(const PulseShape& shape, const ModelDescriptor& model,
                               const Operator& omega, const std::vector<double>& tau_grid,
                               const RunConfig& config, const PulseIntegration& integration) {
  if (tau_grid.empty() || config.seeds.empty()) {
    throw PreconditionError("pulse scan needs a non-empty tau grid and seed list");
  }
  const std::size_t nt = tau_grid.size();
  const std::size_t ns = config.seeds.size();
  std::vector<ScanPoint> points(nt * ns);
  parallel_for(ns, config.threads, [&](std::size_t s) {
    ModelDescriptor d = model;
    d.seed = config.seeds[s];
    const HamiltonianModel h = random_model(d);
    for (std::size_t k = 0; k < nt; ++k) {
      points[k * ns + s] = ScanPoint{tau_grid[k], d.seed, omega.label,
                                     pulse_error(shape.rescaled(tau_grid[k]), h, omega, integration)};
    }
  });
  return reduce_scan(std::move(points), {omega.label}, config);
}

nlohmann::json to_json(const PulseShape& shape) {
  nlohmann::json segments = nlohmann::json::array();
  for (const auto& s : shape.segments) segments.push_back({{"len_frac", s.len_frac}, {"amp", s.amp}});
  return {{"tau_p", shape.tau_p}, {"tau_s", shape.tau_s}, {"segments", segments}};
}

PulseShape pulse_from_json(const nlohmann::json& j) {
  PulseShape shape;
  shape.tau_p = j.at("tau_p").get<double>();
  shape.tau_s = j.at("tau_s").get<double>();
  double total = 0.0;
  for (const auto& s : j.at("segments")) {
    shape.segments.push_back({s.at("len_frac").get<double>(), s.at("amp").get<double>()});
    total += shape.segments.back().len_frac;
  }
  if (!(shape.tau_p > 0.0) || shape.tau_s < 0.0 || shape.tau_s > shape.tau_p) {
    throw PreconditionError("pulse needs tau_p > 0 and 0 <= tau_s <= tau_p");
  }
  if (shape.segments.empty() || std::abs(total - 1.0) > 1e-12) {
    throw PreconditionError("pulse segment fractions must sum to 1");
  }
  return shape;
}

}  // namespace ddkit
