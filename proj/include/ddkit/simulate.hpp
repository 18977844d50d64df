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
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ddkit/linalg.hpp"
#include "ddkit/model.hpp"
#include "ddkit/operators.hpp"
#include "ddkit/sequences.hpp"

namespace ddkit {

// `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

struct RunConfig {
  std::vector<double> t_grid = log_grid(0.02, 0.6, 12);
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  double error_floor = 1e-12;
  double error_ceiling = 1e-2;
  // Fit window in T, applied on top of the floor/ceiling filter.
  double fit_t_min = 0.0;
  double fit_t_max = std::numeric_limits<double>::infinity();
  // Errors at or below this everywhere are reported as an exact symmetry.
  double exact_threshold = 1e-13;
  unsigned threads = 0;
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  int points_used = 0;
};

// Ordinary least squares of log(error) against log(T) over the points with
// floor < error < ceiling. Throws NumericalError with fewer than two.
LogLogFit fit_loglog(std::span<const std::pair<double, double>> points, double floor,
                     double ceiling);

enum class FitStatus { ok, exact, unfittable };
std::string to_string(FitStatus s);

struct ScanPoint {
  double t = 0.0;
  std::uint64_t seed = 0;
  std::string op;
  double error = 0.0;
};

struct OperatorFit {
  std::string label;
  FitStatus status = FitStatus::unfittable;
  LogLogFit fit;
  std::vector<std::pair<double, double>> medians;  // (T, median error over seeds)
  std::string diagnostic;
};

struct ScalingResult {
  std::vector<ScanPoint> points;  // ordered by (operator, T, seed)
  std::vector<OperatorFit> fits;

  // Throws PreconditionError for an unknown label.
  const OperatorFit& fit(const std::string& label) const;
  bool all_fitted() const;
};

// Time-ordered product of free evolutions exp(-i H tau) and instantaneous
// pulses (op (x) I_bath) for total duration T.
CMatrix propagate(const Schedule& schedule, const HamiltonianModel& model,
                  std::span<const Operator> table, double total_time);
CMatrix propagate(const Schedule& schedule, const HamiltonianModel& model, const Moos& moos,
                  double total_time);

// Schedule bound to one model: the Hamiltonian eigensystem and the lifted
// event unitaries are computed once and reused for every T.
class ControlledEvolution {
 public:
  ControlledEvolution(const Schedule& schedule, const HamiltonianModel& model,
                      std::span<const Operator> table);
  CMatrix propagator(double total_time) const;

 private:
  linalg::EigenSystem spectrum_;
  std::vector<double> times_;
  std::vector<CMatrix> kicks_;  // composed pulse per event
  CMatrix closing_;
};

// || U^dagger (W (x) I) U - P^dagger (W (x) I) P || with P = net_pulse (x) I.
double preservation_error(const CMatrix& propagator, const Operator& omega,
                          const Operator& net_pulse);

struct ScanRequest {
  Schedule schedule;
  // Operators the schedule labels resolve to.
  std::vector<Operator> table;
  // Operators whose preservation is measured.
  std::vector<Operator> targets;
  // Seed is replaced by each entry of RunConfig::seeds.
  ModelDescriptor model;
};

// Builds a request whose targets are the MOOS elements the schedule uses
// (all elements for a pulse-free schedule).
ScanRequest make_scan_request(const Schedule& schedule, const Moos& moos,
                              const ModelDescriptor& model);

// Median over seeds per T, then a log-log fit per target.
ScalingResult order_scan(const ScanRequest& request, const RunConfig& config);

// Shared reduction used by every scan: `points` must hold one error per
// (label, T, seed). Medians and fits follow RunConfig's filters.
ScalingResult reduce_scan(std::vector<ScanPoint> points, const std::vector<std::string>& labels,
                          const RunConfig& config);

}  // namespace ddkit
