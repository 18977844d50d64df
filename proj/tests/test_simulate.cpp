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
#include <cmath>
#include <numbers>
#include <random>

#include "ddkit/errors.hpp"
#include "ddkit/simulate.hpp"

using namespace ddkit;
using linalg::Complex;

namespace {

Moos qubit1() { return build_moos(MoosSpec::parse("qubit_full:1")); }

const ModelDescriptor kGeneral{Structure::general, 2, 4, 1.0, 0};

double slope(const Schedule& s, const std::string& target, RunConfig rc = {}) {
  const Moos m = qubit1();
  ScanRequest req = make_scan_request(s, m, kGeneral);
  req.targets = {m.find(target)};
  const ScalingResult r = order_scan(req, rc);
  const OperatorFit& f = r.fit(target);
  REQUIRE(f.status == FitStatus::ok);
  return f.fit.slope;
}

}  // namespace

TEST_CASE("log_grid") {
  const auto g = log_grid(0.01, 1.0, 3);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == 0.01);
  CHECK(g[1] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(g[2] == 1.0);
}

TEST_CASE("pulse-free propagation is the free evolution") {
  const HamiltonianModel m = random_model(kGeneral);
  const Schedule empty{"free", {}, {}, {}};
  const Moos q = qubit1();
  CHECK((propagate(empty, m, q, 0.37) - linalg::expm_i(m.h_total, 0.37)).norm() < 1e-12);
}

TEST_CASE("Hahn echo refocuses a static field exactly") {
  const Operator z = pauli(Axis::z, 1, 1);
  for (double omega : {0.3, 1.7}) {
    const HamiltonianModel m = custom_model(omega * z.matrix, 2, 1);
    const Schedule echo = udd("X1", 1);
    for (double t : {0.1, 2.0, 17.0}) {
      CHECK((propagate(echo, m, qubit1(), t) - pauli(Axis::x, 1, 1).matrix).norm() < 1e-12);
    }
  }
}

TEST_CASE("propagators stay unitary") {
  const HamiltonianModel m = random_model(kGeneral);
  const std::vector<int> orders{2, 3};
  for (const Schedule& s : {udd("Z1", 4), nudd(qubit1(), orders), cdd_uniform(qubit1(), 3)}) {
    for (double t : {0.01, 1.0, 30.0}) CHECK(linalg::unitarity_defect(propagate(s, m, qubit1(), t)) < 1e-11);
  }
}

TEST_CASE("cached evolution agrees with direct propagation") {
  const HamiltonianModel m = random_model(kGeneral);
  const Moos q = qubit1();
  const std::vector<int> orders{2, 2};
  const Schedule s = nudd(q, orders);
  const ControlledEvolution ce(s, m, q.elements());
  for (double t : {0.05, 0.8}) CHECK((ce.propagator(t) - propagate(s, m, q, t)).norm() < 1e-12);
}

TEST_CASE("preservation error closed forms") {
  const Operator z = pauli(Axis::z, 1, 1), x = pauli(Axis::x, 1, 1);
  const Operator id{"I", linalg::identity(2)};
  CHECK(preservation_error(x.matrix, z, x) < 1e-15);
  // U = exp(-i theta X) with X anticommuting with Z: U^dag Z U = Z exp(2 i theta X),
  // so the defect is ||Z (exp(2 i theta X) - I)|| = 2 |sin theta|.
  for (double theta : {1e-3, 1e-2, 0.1, 0.5}) {
    const CMatrix u = linalg::expm_i(x.matrix, theta);
    CHECK(preservation_error(u, z, id) == doctest::Approx(2 * std::abs(std::sin(theta))).epsilon(1e-12));
  }
  const HamiltonianModel commuting = custom_model(linalg::kron(z.matrix, CMatrix::Identity(3, 3)), 2, 3);
  for (double t : {0.1, 5.0}) {
    const CMatrix u = propagate(Schedule{"free", {}, {}, {}}, commuting, qubit1(), t);
    CHECK(preservation_error(u, z, id) < 1e-14);
  }
}

TEST_CASE("log-log fit") {
  const std::vector<std::pair<double, double>> cubic{{1, 1}, {2, 8}};
  CHECK(fit_loglog(cubic, 1e-12, 1e3).slope == doctest::Approx(3.0).epsilon(1e-14));

  std::vector<std::pair<double, double>> quartic;
  for (double t : log_grid(0.01, 0.5, 10)) quartic.push_back({t, 0.37 * std::pow(t, 4)});
  CHECK(std::abs(fit_loglog(quartic, 1e-15, 1.0).slope - 4.0) < 1e-9);

  const std::vector<std::pair<double, double>> tiny{{1, 1e-20}};
  CHECK_THROWS_AS(fit_loglog(tiny, 1e-12, 1.0), NumericalError);

  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<std::pair<double, double>> noisy;
  for (double t : log_grid(0.01, 1.0, 20)) noisy.push_back({t, 2.0 * std::pow(t, 2.5) * (1 + noise(gen))});
  CHECK(std::abs(fit_loglog(noisy, 1e-15, 10.0).slope - 2.5) < 0.05);
}

TEST_CASE("reduce_scan applies floor, ceiling and status rules") {
  RunConfig rc;
  rc.t_grid = {0.1, 0.2, 0.4, 0.8};
  rc.seeds = {1, 2, 3};
  std::vector<ScanPoint> pts;
  for (double t : rc.t_grid)
    for (auto seed : rc.seeds) {
      pts.push_back({t, seed, "A", 1e-3 * t * t * (1.0 + 0.1 * static_cast<double>(seed))});
      pts.push_back({t, seed, "B", 0.0});
      pts.push_back({t, seed, "C", t > 0.15 ? 0.5 : 1e-4});
    }
  const ScalingResult r = reduce_scan(pts, {"A", "B", "C"}, rc);
  CHECK(r.fit("A").status == FitStatus::ok);
  CHECK(r.fit("A").fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.fit("A").medians[1].second == doctest::Approx(1e-3 * 0.04 * 1.2));
  CHECK(r.fit("B").status == FitStatus::exact);
  CHECK(r.fit("C").status == FitStatus::unfittable);
  CHECK_FALSE(r.fit("C").diagnostic.empty());
  CHECK_FALSE(r.all_fitted());
  CHECK_THROWS_AS(r.fit("D"), PreconditionError);
}

TEST_CASE("scan output is ordered and reproducible") {
  const Moos q = qubit1();
  const ScanRequest req = make_scan_request(udd("Z1", 2), q, kGeneral);
  CHECK(req.targets.size() == 1);
  RunConfig one_thread;
  one_thread.threads = 1;
  RunConfig many;
  many.threads = 8;
  const ScalingResult a = order_scan(req, one_thread), b = order_scan(req, many);
  REQUIRE(a.points.size() == 12 * 8);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].error == b.points[i].error);
    CHECK(a.points[i].t == b.points[i].t);
    CHECK(a.points[i].seed == b.points[i].seed);
  }
}

TEST_CASE("measured orders") {
  CHECK(slope(udd("Z1", 2), "Z1") == doctest::Approx(3.0).epsilon(0.1));
  for (int n = 1; n <= 4; ++n) CHECK(std::abs(slope(udd("Z1", n), "Z1") - (n + 1)) < 0.1);

  RunConfig small_t;
  small_t.t_grid = log_grid(1e-4, 1e-2, 12);
  const double free_slope = slope(Schedule{"free", {}, {}, {}}, "Z1", small_t);
  CHECK(free_slope >= 0.8);
  CHECK(free_slope <= 1.2);
}

TEST_CASE("outer nesting leaves the inner order alone") {
  const std::vector<int> orders{2, 2};
  const Schedule s = nudd(qubit1(), orders);
  CHECK(std::abs(slope(s, "Z1") - slope(udd("Z1", 2), "Z1")) <= 0.3);
  CHECK(slope(s, "X1") >= 2.7);
}

TEST_CASE("conjugating free blocks by a MOOS partner keeps the order") {
  const double base = slope(udd("Z1", 2), "Z1");
  CHECK(std::abs(slope(conjugate_blocks(udd("Z1", 2), "X1"), "Z1") - base) <= 0.3);
  CHECK(std::abs(slope(conjugate_blocks(udd("X1", 3), "Z1"), "X1") - slope(udd("X1", 3), "X1")) <= 0.3);
}

TEST_CASE("echo by a non-MOOS operator spoils the protected order") {
  const Operator x = pauli(Axis::x, 1, 1);
  const Operator w{"W", (x.matrix + pauli(Axis::y, 1, 1).matrix) / std::numbers::sqrt2};
  const std::vector<Operator> table{x, w};
  RunConfig rc;
  rc.t_grid = log_grid(1e-3, 0.2, 12);
  const ScanRequest req{echo_wrap(udd("X1", 2), "W"), table, {x}, kGeneral};
  const ScalingResult r = order_scan(req, rc);
  REQUIRE(r.fit("X1").status == FitStatus::ok);
  CHECK(std::abs(r.fit("X1").fit.slope - 1.0) < 0.2);
}

TEST_CASE("errors grow with T inside the fit window") {
  const Moos q = qubit1();
  const std::vector<int> orders{2, 3};
  const ScalingResult r = order_scan(make_scan_request(nudd(q, orders), q, kGeneral), RunConfig{});
  for (const auto& f : r.fits) {
    int pairs = 0, rising = 0;
    for (std::size_t i = 1; i < f.medians.size(); ++i) {
      if (f.medians[i].second >= 1e-2 || f.medians[i - 1].second <= 1e-12) continue;
      ++pairs;
      if (f.medians[i].second >= f.medians[i - 1].second) ++rising;
    }
    REQUIRE(pairs > 0);
    CHECK(rising >= 0.9 * pairs);
  }
}
