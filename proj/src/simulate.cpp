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

#include "ddkit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ddkit/errors.hpp"
#include "ddkit/parallel.hpp"

namespace ddkit {

namespace {

const Operator& lookup(std::span<const Operator> table, const std::string& label) {
  for (const auto& op : table) {
    if (op.label == label) return op;
  }
  throw PreconditionError("schedule label '" + label + "' does not resolve to a known operator");
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int count) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw PreconditionError("log_grid needs 0 < lo < hi and at least two points");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / (count - 1);
  for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = lo * std::exp(step * k);
  grid.back() = hi;
  return grid;
}

LogLogFit fit_loglog(std::span<const std::pair<double, double>> points, double floor,
                     double ceiling) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [t, err] : points) {
    if (t > 0.0 && err > floor && err < ceiling) logs.emplace_back(std::log(t), std::log(err));
  }
  if (logs.size() < 2) {
    std::ostringstream msg;
    msg << "log-log fit needs at least 2 points inside (" << floor << ", " << ceiling << "), got "
        << logs.size();
    throw NumericalError(msg.str());
  }
  const double n = static_cast<double>(logs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("log-log fit needs at least two distinct T values");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [x, y] : logs) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  fit.points_used = static_cast<int>(logs.size());
  return fit;
}

std::string to_string(FitStatus s) {
  switch (s) {
    case FitStatus::ok:
      return "ok";
    case FitStatus::exact:
      return "exact";
    case FitStatus::unfittable:
      return "unfittable";
  }
  return "?";
}

const OperatorFit& ScalingResult::fit(const std::string& label) const {
  for (const auto& f : fits) {
    if (f.label == label) return f;
  }
  throw PreconditionError("no fit recorded for operator '" + label + "'");
}

bool ScalingResult::all_fitted() const {
  return std::all_of(fits.begin(), fits.end(),
                     [](const OperatorFit& f) { return f.status != FitStatus::unfittable; });
}

ControlledEvolution::ControlledEvolution(const Schedule& schedule, const HamiltonianModel& model,
                                         std::span<const Operator> table)
    : spectrum_(linalg::eigh(model.h_total)) {
  check_schedule(schedule);
  const int bath = model.descriptor.bath_dim;
  const auto lifted = [&](const std::string& label) {
    const Operator& op = lookup(table, label);
    if (op.dim() != model.descriptor.sys_dim) {
      throw PreconditionError("pulse '" + label + "' does not act on the model's system");
    }
    return lift(op, bath);
  };
  const CMatrix id = linalg::identity(model.dim());
  for (const auto& e : schedule.events) {
    CMatrix kick = id;
    for (const auto& label : e.ops) kick = lifted(label) * kick;
    times_.push_back(e.time);
    kicks_.push_back(std::move(kick));
  }
  closing_ = id;
  for (const auto& label : schedule.closing) closing_ = lifted(label) * closing_;
}

CMatrix ControlledEvolution::propagator(double total_time) const {
  double last = 0.0;
  CMatrix u = linalg::identity(spectrum_.vectors.rows());
  for (std::size_t k = 0; k < times_.size(); ++k) {
    u = kicks_[k] * (spectrum_.evolve((times_[k] - last) * total_time) * u);
    last = times_[k];
  }
  u = closing_ * (spectrum_.evolve((1.0 - last) * total_time) * u);
  return u;
}

CMatrix propagate(const Schedule& schedule, const HamiltonianModel& model,
                  std::span<const Operator> table, double total_time) {
  return ControlledEvolution(schedule, model, table).propagator(total_time);
}

CMatrix propagate(const Schedule& schedule, const HamiltonianModel& model, const Moos& moos,
                  double total_time) {
  return propagate(schedule, model, std::span<const Operator>(moos.elements()), total_time);
}

double preservation_error(const CMatrix& propagator, const Operator& omega,
                          const Operator& net_pulse) {
  if (omega.dim() == 0 || propagator.rows() % omega.dim() != 0) {
    throw PreconditionError("preservation_error: operator does not divide the propagator dimension");
  }
  const int bath = static_cast<int>(propagator.rows()) / omega.dim();
  const CMatrix w = lift(omega, bath);
  const CMatrix p = lift(net_pulse, bath);
  return linalg::spectral_norm(propagator.adjoint() * w * propagator - p.adjoint() * w * p);
}

ScanRequest make_scan_request(const Schedule& schedule, const Moos& moos,
                              const ModelDescriptor& model) {
  ScanRequest req{schedule, moos.elements(), {}, model};
  const auto counts = schedule.pulse_counts();
  for (const auto& op : moos.elements()) {
    if (counts.empty() || counts.contains(op.label)) req.targets.push_back(op);
  }
  return req;
}

ScalingResult reduce_scan(std::vector<ScanPoint> points, const std::vector<std::string>& labels,
                          const RunConfig& config) {
  std::sort(points.begin(), points.end(), [&](const ScanPoint& a, const ScanPoint& b) {
    const auto ia = std::find(labels.begin(), labels.end(), a.op) - labels.begin();
    const auto ib = std::find(labels.begin(), labels.end(), b.op) - labels.begin();
    if (ia != ib) return ia < ib;
    if (a.t != b.t) return a.t < b.t;
    return a.seed < b.seed;
  });
  ScalingResult result;
  for (const auto& label : labels) {
    OperatorFit of;
    of.label = label;
    std::vector<double> ts;
    for (const auto& p : points) {
      if (p.op == label && (ts.empty() || ts.back() != p.t)) ts.push_back(p.t);
    }
    double max_err = 0.0;
    for (double t : ts) {
      std::vector<double> errs;
      for (const auto& p : points) {
        if (p.op == label && p.t == t) errs.push_back(p.error);
      }
      const double m = median(std::move(errs));
      max_err = std::max(max_err, m);
      of.medians.emplace_back(t, m);
    }
    if (max_err <= config.exact_threshold) {
      of.status = FitStatus::exact;
      of.diagnostic = "error vanishes to numerical precision at every T";
      result.fits.push_back(std::move(of));
      continue;
    }
    std::vector<std::pair<double, double>> window;
    for (const auto& tm : of.medians) {
      if (tm.first >= config.fit_t_min && tm.first <= config.fit_t_max) window.push_back(tm);
    }
    std::ostringstream diag;
    try {
      of.fit = fit_loglog(window, config.error_floor, config.error_ceiling);
      if (of.fit.points_used < 4) {
        diag << "only " << of.fit.points_used << " points inside the error window";
      } else if (of.fit.rms_residual > 0.1) {
        diag << "log-log residual " << of.fit.rms_residual << " exceeds 0.1";
      } else {
        of.status = FitStatus::ok;
      }
    } catch (const NumericalError& e) {
      diag << e.what();
    }
    if (of.status == FitStatus::unfittable) {
      diag << "; medians:";
      for (const auto& [t, m] : of.medians) diag << " (" << t << ", " << m << ")";
    }
    of.diagnostic = diag.str();
    result.fits.push_back(std::move(of));
  }
  result.points = std::move(points);
  return result;
}

ScalingResult order_scan(const ScanRequest& request, const RunConfig& config) {
  if (config.t_grid.empty() || config.seeds.empty()) {
    throw PreconditionError("order_scan needs a non-empty T grid and seed list");
  }
  for (std::size_t k = 1; k < config.t_grid.size(); ++k) {
    if (!(config.t_grid[k] > config.t_grid[k - 1])) {
      throw PreconditionError("T grid must be strictly increasing");
    }
  }
  const double work = double(request.schedule.interval_count()) * double(config.t_grid.size()) *
                      double(config.seeds.size());
  if (work > 1e6) throw PreconditionError("scan exceeds the 1e6 exponential budget");
  if (request.targets.empty()) throw PreconditionError("scan has no target operators");

  const Operator net = net_pulse_operator(request.schedule, request.table);
  const std::size_t nt = config.t_grid.size();
  const std::size_t ns = config.seeds.size();
  const std::size_t nops = request.targets.size();
  std::vector<ScanPoint> points(nt * ns * nops);

  // One task per seed: the model's eigensystem is shared across its T grid.
  parallel_for(ns, config.threads, [&](std::size_t s) {
    ModelDescriptor d = request.model;
    d.seed = config.seeds[s];
    const HamiltonianModel model = random_model(d);
    const ControlledEvolution evolution(request.schedule, model, request.table);
    for (std::size_t k = 0; k < nt; ++k) {
      const CMatrix u = evolution.propagator(config.t_grid[k]);
      for (std::size_t o = 0; o < nops; ++o) {
        points[(o * nt + k) * ns + s] = ScanPoint{config.t_grid[k], d.seed, request.targets[o].label,
                                                  preservation_error(u, request.targets[o], net)};
      }
    }
  });

  std::vector<std::string> labels;
  for (const auto& t : request.targets) labels.push_back(t.label);
  return reduce_scan(std::move(points), labels, config);
}

}  // namespace ddkit
