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

#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddkit/operators.hpp"

namespace ddkit {

// One pulse instant. Several operators at the same instant are applied in
// list order (ops[0] first) and act as a single composed unitary.
struct PulseEvent {
  double time = 0.0;
  std::vector<std::string> ops;

  bool operator==(const PulseEvent&) const = default;
};

// Pulse schedule on normalized time [0, 1]; the physical duration is
// supplied at simulation time.
struct Schedule {
  std::string scheme;
  std::vector<int> orders;
  std::vector<PulseEvent> events;     // strictly increasing times in (0, 1)
  std::vector<std::string> closing;   // applied at t = 1, in order

  std::size_t interval_count() const { return events.size() + 1; }
  // Number of applications of each label, closing pulses included.
  std::map<std::string, int> pulse_counts() const;

  bool operator==(const Schedule&) const = default;
};

// sin^2(n pi / (2N + 2)) for n = 1..N.
std::vector<double> udd_times(int order);

// Iterated first-order scheme over all MOOS elements: 2^L equal intervals
// following the ruler sequence. With include_closing, the optional bracketed
// pulses are emitted as well (and net pulse becomes the identity).
Schedule first_order_schedule(const Moos& moos, bool include_closing);

// Inner schedule on [0, 1/2] followed by its time mirror on [1/2, 1].
Schedule sdd_schedule(const Schedule& inner);

// Uniform concatenation: every free interval of the first-order pattern is
// replaced by the (N-1)-th order sequence. 2^{N L} intervals.
Schedule cdd_uniform(const Moos& moos, int order);

// Per-operator concatenation depths; orders[l] applies to MOOS element l,
// lower indices innermost. 2^{sum N_l} intervals.
Schedule cdd_nested(const Moos& moos, std::span<const int> orders);

// Nested Uhrig sequences; orders[l] applies to MOOS element l with element 0
// innermost. Inner orders must be even unless allow_odd_inner is set.
Schedule nudd(const Moos& moos, std::span<const int> orders, bool allow_odd_inner = false);

// Single-operator Uhrig sequence of `label`.
Schedule udd(const std::string& label, int order);

// Replaces every free block B by W B W, except that the leading W before the
// first block is dropped (it does not change any conjugation-defect norm).
Schedule conjugate_blocks(const Schedule& inner, const std::string& label);

// W inner(T/2) W inner(T/2): a Hahn echo of `label` around `inner`.
Schedule echo_wrap(const Schedule& inner, const std::string& label);

// Ordered product O_last ... O_first of every pulse, closing included.
Operator net_pulse_operator(const Schedule& schedule, const Moos& moos);
Operator net_pulse_operator(const Schedule& schedule, std::span<const Operator> table);

// Structural checks: times strictly increasing in (0, 1), no empty events.
void check_schedule(const Schedule& schedule);

// {"scheme", "orders", "events": [{"t", "ops"}], "closing", "intervals"}
nlohmann::json to_json(const Schedule& schedule);
Schedule schedule_from_json(const nlohmann::json& j);

}  // namespace ddkit
