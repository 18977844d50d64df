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
#include <map>
#include <numbers>
#include <vector>

#include "ddkit/errors.hpp"
#include "ddkit/sequences.hpp"

using namespace ddkit;

namespace {

Moos qubit1() { return build_moos(MoosSpec::parse("qubit_full:1")); }  // {Z1, X1}

// Commuting placeholder set whose labels are O1..On.
Moos labels(int n) {
  std::vector<Operator> ops;
  for (int k = 1; k <= n; ++k) ops.push_back({"O" + std::to_string(k), pauli(Axis::z, 1, 1).matrix});
  return Moos::validate(ops);
}

std::vector<double> times_of(const Schedule& s, const std::string& label) {
  std::vector<double> out;
  for (const auto& e : s.events)
    for (const auto& op : e.ops)
      if (op == label) out.push_back(e.time);
  return out;
}

void check_times(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-15) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

bool is_identity(const Operator& op) {
  return (op.matrix - linalg::identity(op.dim())).norm() < 1e-14;
}

}  // namespace

TEST_CASE("udd_times small orders") {
  check_times(udd_times(1), {0.5});
  check_times(udd_times(2), {0.25, 0.75});
  check_times(udd_times(3), {(1 - std::numbers::sqrt2 / 2) / 2, 0.5, (1 + std::numbers::sqrt2 / 2) / 2});
  CHECK(udd_times(0).empty());
  CHECK_THROWS_AS(udd_times(-1), PreconditionError);
}

TEST_CASE("udd_times are mirror symmetric and increasing") {
  for (int n = 1; n <= 40; ++n) {
    const auto t = udd_times(n);
    REQUIRE(static_cast<int>(t.size()) == n);
    for (int k = 0; k < n; ++k) CHECK(t[k] + t[n - 1 - k] == 1.0);
    CHECK(std::is_sorted(t.begin(), t.end()));
  }
}

TEST_CASE("first-order schedules") {
  const Schedule one = first_order_schedule(labels(1), false);
  REQUIRE(one.events.size() == 1);
  CHECK(one.events[0] == PulseEvent{0.5, {"O1"}});

  const Schedule two = first_order_schedule(labels(2), false);
  REQUIRE(two.events.size() == 3);
  CHECK(two.events[0] == PulseEvent{0.25, {"O1"}});
  CHECK(two.events[1] == PulseEvent{0.5, {"O2"}});
  CHECK(two.events[2] == PulseEvent{0.75, {"O1"}});

  const Schedule three = first_order_schedule(labels(3), false);
  CHECK(three.interval_count() == 8);
  CHECK(three.events.size() == 7);
  const auto counts = three.pulse_counts();
  CHECK(counts.at("O1") == 4);
  CHECK(counts.at("O2") == 2);
  CHECK(counts.at("O3") == 1);
}

TEST_CASE("first-order schedule with closing pulses nets to the identity") {
  for (int n = 1; n <= 2; ++n) {
    const Moos m = build_moos({MoosSpec::Kind::qubit_full, n, {}});
    CHECK(is_identity(net_pulse_operator(first_order_schedule(m, true), m)));
    CHECK(first_order_schedule(m, true).interval_count() == (std::size_t{1} << (2 * n)));
  }
}

TEST_CASE("SDD of a Hahn echo") {
  const Schedule s = sdd_schedule(first_order_schedule(labels(1), false));
  REQUIRE(s.events.size() == 2);
  CHECK(s.events[0] == PulseEvent{0.25, {"O1"}});
  CHECK(s.events[1] == PulseEvent{0.75, {"O1"}});
}

TEST_CASE("SDD is time-reversal symmetric") {
  for (bool closing : {false, true}) {
    const Schedule s = sdd_schedule(first_order_schedule(labels(2), closing));
    CHECK(s.interval_count() == (closing ? 8u : 7u));
    std::map<double, std::vector<std::string>> by_time;
    for (const auto& e : s.events) {
      auto ops = e.ops;
      std::sort(ops.begin(), ops.end());
      by_time[e.time] = ops;
    }
    for (const auto& [t, ops] : by_time) {
      const auto mirror = by_time.find(1.0 - t);
      REQUIRE(mirror != by_time.end());
      CHECK(mirror->second == ops);
    }
  }
}

TEST_CASE("CDD unrolling") {
  const Schedule echo = cdd_uniform(labels(1), 1);
  REQUIRE(echo.events.size() == 1);
  CHECK(echo.events[0].time == 0.5);

  const Schedule two = cdd_uniform(labels(1), 2);
  CHECK(two.interval_count() == 4);
  check_times({two.events[0].time, two.events[1].time, two.events[2].time}, {0.25, 0.5, 0.75});
  CHECK(two.events[1].ops == std::vector<std::string>{"O1", "O1"});
  CHECK(cdd_uniform(labels(2), 2).interval_count() == 16);
  CHECK_THROWS_AS(cdd_uniform(labels(3), 7), PreconditionError);
}

TEST_CASE("nested CDD") {
  const std::vector<int> one{1};
  CHECK(cdd_nested(labels(1), one).events.size() == 1);
  const std::vector<int> ones{1, 1};
  const Schedule s = cdd_nested(labels(2), ones);
  const Schedule f = first_order_schedule(labels(2), true);
  CHECK(s.events == f.events);
  CHECK(s.closing == f.closing);
  const std::vector<int> o23{2, 3};
  CHECK(cdd_nested(labels(2), o23).interval_count() == 32);
}

TEST_CASE("nudd (2, 2) event times") {
  const std::vector<int> orders{2, 2};
  const Schedule s = nudd(qubit1(), orders);
  CHECK(s.interval_count() == 9);
  check_times(times_of(s, "X1"), {0.25, 0.75}, 1e-15);
  check_times(times_of(s, "Z1"), {0.0625, 0.1875, 0.375, 0.625, 0.8125, 0.9375}, 1e-15);
  CHECK(s.closing.empty());
  CHECK(is_identity(net_pulse_operator(s, qubit1())));
}

TEST_CASE("nudd interval counts") {
  // The middle level is odd, so the count is checked on the permissive build.
  const std::vector<int> orders{2, 3, 2};
  CHECK(nudd(labels(3), orders, true).interval_count() == 36);
  for (int a = 0; a <= 4; a += 2)
    for (int b = 0; b <= 5; ++b) {
      const std::vector<int> v{a, b};
      CHECK(nudd(labels(2), v).interval_count() == static_cast<std::size_t>((a + 1) * (b + 1)));
    }
}

TEST_CASE("nudd rejects odd inner orders") {
  const std::vector<int> orders{1, 2};
  std::string message;
  try {
    nudd(qubit1(), orders);
  } catch (const PreconditionError& e) {
    message = e.what();
  }
  CHECK(message.find("even") != std::string::npos);
  // The outermost order may be odd.
  const std::vector<int> odd_outer{2, 3};
  CHECK_NOTHROW(nudd(qubit1(), odd_outer));
}

TEST_CASE("odd inner counterexample structure") {
  // (O1 f(t) O1 f(t)) O2 (O1 f(2t) O1 f(2t)) O2 (O1 f(t) O1 f(t)), t = T/8,
  // read right to left.
  const std::vector<int> orders{1, 2};
  const Schedule s = nudd(qubit1(), orders, true);
  REQUIRE(s.events.size() == 5);
  const std::vector<double> t{1.0 / 8, 2.0 / 8, 4.0 / 8, 6.0 / 8, 7.0 / 8};
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(s.events[i].time - t[i]) < 1e-15);
  CHECK(s.events[0].ops == std::vector<std::string>{"Z1"});
  CHECK(s.events[1].ops == std::vector<std::string>{"Z1", "X1"});
  CHECK(s.events[2].ops == std::vector<std::string>{"Z1"});
  CHECK(s.events[3].ops == std::vector<std::string>{"Z1", "X1"});
  CHECK(s.events[4].ops == std::vector<std::string>{"Z1"});
  CHECK(s.closing == std::vector<std::string>{"Z1"});
}

TEST_CASE("nudd inner blocks are self-similar and mirror symmetric") {
  const std::vector<int> orders{4, 3};
  const Schedule s = nudd(qubit1(), orders);
  std::vector<double> bounds{0.0};
  for (double t : times_of(s, "X1")) bounds.push_back(t);
  bounds.push_back(1.0);
  const auto inner = times_of(s, "Z1");
  std::vector<double> reference;
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    std::vector<double> rel;
    for (double t : inner)
      if (t > bounds[b] && t < bounds[b + 1]) rel.push_back((t - bounds[b]) / (bounds[b + 1] - bounds[b]));
    if (b == 0) reference = rel;
    check_times(rel, reference, 1e-12);
    for (std::size_t k = 0; k < rel.size(); ++k) CHECK(std::abs(rel[k] + rel[rel.size() - 1 - k] - 1) < 1e-12);
  }
  check_times(reference, udd_times(4), 1e-12);
}

TEST_CASE("net pulse operator") {
  const Moos m = qubit1();
  CHECK((net_pulse_operator(udd("Z1", 1), m).matrix - m.find("Z1").matrix).norm() == 0.0);
  CHECK(is_identity(net_pulse_operator(udd("Z1", 2), m)));
}

TEST_CASE("schedule JSON round trip is bit exact") {
  const std::vector<int> orders{2, 3};
  for (const Schedule& s : {nudd(qubit1(), orders), cdd_uniform(qubit1(), 2), udd("Z1", 7),
                            sdd_schedule(first_order_schedule(qubit1(), true))}) {
    const nlohmann::json j = to_json(s);
    CHECK(j.at("intervals") == s.interval_count());
    const Schedule back = schedule_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == s);
  }
}

TEST_CASE("malformed schedules are rejected") {
  Schedule s = udd("Z1", 2);
  std::swap(s.events[0], s.events[1]);
  CHECK_THROWS_AS(check_schedule(s), PreconditionError);
  nlohmann::json j = to_json(udd("Z1", 2));
  j["intervals"] = 5;
  CHECK_THROWS_AS(schedule_from_json(j), PreconditionError);
}
