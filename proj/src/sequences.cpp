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

#include "ddkit/sequences.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "ddkit/errors.hpp"

namespace ddkit {

namespace {

constexpr int kMaxDoublings = 20;

// Sequence on [0, 1] whose closing pulses are kept apart from the interior
// events, so that nesting can merge them into the enclosing boundary event
// without comparing floating-point times.
struct Block {
  std::vector<PulseEvent> events;
  std::vector<std::string> closing;
};

void append_scaled(std::vector<PulseEvent>& out, const Block& block, double a, double b) {
  for (const auto& e : block.events) out.push_back({a + (b - a) * e.time, e.ops});
}

std::vector<std::string> concat(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

// op inner(1/2) op inner(1/2), the basic echo step of every concatenated
// construction.
Block halves(const Block& inner, const std::string& op) {
  Block out;
  out.events.reserve(2 * inner.events.size() + 1);
  append_scaled(out.events, inner, 0.0, 0.5);
  out.events.push_back({0.5, concat(inner.closing, {op})});
  append_scaled(out.events, inner, 0.5, 1.0);
  out.closing = concat(inner.closing, {op});
  return out;
}

Schedule to_schedule(Block block, std::string scheme, std::vector<int> orders) {
  Schedule s;
  s.scheme = std::move(scheme);
  s.orders = std::move(orders);
  s.events = std::move(block.events);
  s.closing = std::move(block.closing);
  return s;
}

Block as_block(const Schedule& s) { return Block{s.events, s.closing}; }

const Operator& lookup(std::span<const Operator> table, const std::string& label) {
  for (const auto& op : table) {
    if (op.label == label) return op;
  }
  throw PreconditionError("schedule label '" + label + "' does not resolve to a known operator");
}

}  // namespace

std::map<std::string, int> Schedule::pulse_counts() const {
  std::map<std::string, int> counts;
  for (const auto& e : events) {
    for (const auto& op : e.ops) ++counts[op];
  }
  for (const auto& op : closing) ++counts[op];
  return counts;
}

std::vector<double> udd_times(int order) {
  if (order < 0) throw PreconditionError("UDD order must be non-negative");
  std::vector<double> times(static_cast<std::size_t>(order));
  // Fill the first half and mirror it so t_n + t_{N+1-n} = 1 holds exactly.
  for (int n = 1; 2 * n <= order + 1; ++n) {
    const double s = std::sin(n * std::numbers::pi / (2.0 * order + 2.0));
    const double t = 2 * n == order + 1 ? 0.5 : s * s;
    times[static_cast<std::size_t>(n - 1)] = t;
    times[static_cast<std::size_t>(order - n)] = 1.0 - t;
  }
  return times;
}

Schedule first_order_schedule(const Moos& moos, bool include_closing) {
  const int levels = static_cast<int>(moos.size());
  if (levels > 12) throw PreconditionError("first-order scheme supports at most 12 MOOS elements");
  std::vector<int> orders(moos.size(), 1);
  if (include_closing) {
    Block block;
    for (const auto& op : moos.elements()) block = halves(block, op.label);
    return to_schedule(std::move(block), "first_order", std::move(orders));
  }
  // Ruler sequence: boundary k carries element (number of trailing zeros of k).
  const unsigned count = 1u << levels;
  Schedule s;
  s.scheme = "first_order";
  s.orders = std::move(orders);
  s.events.reserve(count - 1);
  for (unsigned k = 1; k < count; ++k) {
    const auto level = static_cast<std::size_t>(std::countr_zero(k));
    s.events.push_back({static_cast<double>(k) / count, {moos.elements()[level].label}});
  }
  return s;
}

Schedule sdd_schedule(const Schedule& inner) {
  check_schedule(inner);
  Schedule out;
  out.scheme = "sdd";
  out.orders = inner.orders;
  out.events.reserve(2 * inner.events.size() + 1);
  for (const auto& e : inner.events) out.events.push_back({0.5 * e.time, e.ops});
  // The mirrored half undoes the frame changes in reverse order; a closing
  // pulse of the forward half meets its own mirror image at the midpoint.
  if (!inner.closing.empty()) {
    std::vector<std::string> mid = inner.closing;
    mid.insert(mid.end(), inner.closing.rbegin(), inner.closing.rend());
    out.events.push_back({0.5, std::move(mid)});
  }
  for (auto it = inner.events.rbegin(); it != inner.events.rend(); ++it) {
    out.events.push_back({1.0 - 0.5 * it->time, {it->ops.rbegin(), it->ops.rend()}});
  }
  return out;
}

Schedule cdd_uniform(const Moos& moos, int order) {
  const auto levels = static_cast<int>(moos.size());
  if (order < 1) throw PreconditionError("CDD order must be at least 1");
  if (order * levels > kMaxDoublings) {
    std::ostringstream msg;
    msg << "CDD budget exceeded: N * L = " << order * levels << " > " << kMaxDoublings;
    throw PreconditionError(msg.str());
  }
  Block block;
  for (int n = 0; n < order; ++n) {
    for (const auto& op : moos.elements()) block = halves(block, op.label);
  }
  return to_schedule(std::move(block), "cdd", std::vector<int>(moos.size(), order));
}

Schedule cdd_nested(const Moos& moos, std::span<const int> orders) {
  if (orders.empty() || orders.size() > moos.size()) {
    throw PreconditionError("cdd_nested needs between 1 and " + std::to_string(moos.size()) +
                            " orders");
  }
  int total = 0;
  for (int n : orders) {
    if (n < 0) throw PreconditionError("CDD orders must be non-negative");
    total += n;
  }
  if (total > kMaxDoublings) {
    throw PreconditionError("CDD budget exceeded: sum of orders " + std::to_string(total) + " > " +
                            std::to_string(kMaxDoublings));
  }
  Block block;
  for (std::size_t l = 0; l < orders.size(); ++l) {
    for (int n = 0; n < orders[l]; ++n) block = halves(block, moos.elements()[l].label);
  }
  return to_schedule(std::move(block), "cdd_nested", {orders.begin(), orders.end()});
}

Schedule nudd(const Moos& moos, std::span<const int> orders, bool allow_odd_inner) {
  if (orders.empty() || orders.size() > moos.size()) {
    throw PreconditionError("nudd needs between 1 and " + std::to_string(moos.size()) + " orders");
  }
  const std::size_t outer = orders.size() - 1;
  for (std::size_t l = 0; l < orders.size(); ++l) {
    if (orders[l] < 0) throw PreconditionError("UDD orders must be non-negative");
    if (l < outer && orders[l] % 2 != 0 && !allow_odd_inner) {
      std::ostringstream msg;
      msg << "inner order N" << l + 1 << " = " << orders[l] << " (operator '"
          << moos.elements()[l].label
          << "') is odd; nested UDD requires every inner level to be an even order so that each "
             "inner block is mirror-symmetric and self-similar (use allow_odd_inner to override)";
      throw PreconditionError(msg.str());
    }
  }
  double budget = 1.0;
  for (int n : orders) budget *= n + 1;
  if (budget > double(1 << kMaxDoublings)) throw PreconditionError("nudd interval budget exceeded");

  Block block;
  for (std::size_t l = 0; l < orders.size(); ++l) {
    const std::string& label = moos.elements()[l].label;
    const std::vector<double> times = udd_times(orders[l]);
    Block level;
    double start = 0.0;
    for (std::size_t n = 0; n <= times.size(); ++n) {
      const double stop = n < times.size() ? times[n] : 1.0;
      append_scaled(level.events, block, start, stop);
      if (n < times.size()) level.events.push_back({stop, concat(block.closing, {label})});
      start = stop;
    }
    level.closing = block.closing;
    // Inner blocks carry their Omega^N prefactor; the outermost one is left
    // to the net-pulse bookkeeping.
    if (l < outer && orders[l] % 2 != 0) level.closing.push_back(label);
    block = std::move(level);
  }
  return to_schedule(std::move(block), "nudd", {orders.begin(), orders.end()});
}

Schedule udd(const std::string& label, int order) {
  Schedule s;
  s.scheme = "udd";
  s.orders = {order};
  for (double t : udd_times(order)) s.events.push_back({t, {label}});
  return s;
}

Schedule conjugate_blocks(const Schedule& inner, const std::string& label) {
  Schedule out = inner;
  out.scheme = inner.scheme + "+conj:" + label;
  for (auto& e : out.events) {
    e.ops.insert(e.ops.begin(), label);
    e.ops.push_back(label);
  }
  out.closing.insert(out.closing.begin(), label);
  return out;
}

Schedule echo_wrap(const Schedule& inner, const std::string& label) {
  Schedule out = to_schedule(halves(as_block(inner), label), inner.scheme + "+echo:" + label,
                             inner.orders);
  return out;
}

Operator net_pulse_operator(const Schedule& schedule, std::span<const Operator> table) {
  if (table.empty()) throw PreconditionError("empty operator table");
  CMatrix p = linalg::identity(table.front().dim());
  for (const auto& e : schedule.events) {
    for (const auto& op : e.ops) p = lookup(table, op).matrix * p;
  }
  for (const auto& op : schedule.closing) p = lookup(table, op).matrix * p;
  return Operator{"P", std::move(p)};
}

Operator net_pulse_operator(const Schedule& schedule, const Moos& moos) {
  return net_pulse_operator(schedule, std::span<const Operator>(moos.elements()));
}

void check_schedule(const Schedule& schedule) {
  double prev = 0.0;
  for (std::size_t k = 0; k < schedule.events.size(); ++k) {
    const auto& e = schedule.events[k];
    if (!(e.time > prev) || !(e.time < 1.0)) {
      std::ostringstream msg;
      msg << "schedule event " << k << " at t = " << e.time
          << " breaks the strictly increasing (0, 1) time order";
      throw PreconditionError(msg.str());
    }
    if (e.ops.empty()) throw PreconditionError("schedule event " + std::to_string(k) + " has no ops");
    prev = e.time;
  }
}

nlohmann::json to_json(const Schedule& schedule) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : schedule.events) events.push_back({{"t", e.time}, {"ops", e.ops}});
  return {{"scheme", schedule.scheme},
          {"orders", schedule.orders},
          {"events", events},
          {"closing", schedule.closing},
          {"intervals", schedule.interval_count()}};
}

Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  s.scheme = j.at("scheme").get<std::string>();
  s.orders = j.at("orders").get<std::vector<int>>();
  for (const auto& e : j.at("events")) {
    s.events.push_back({e.at("t").get<double>(), e.at("ops").get<std::vector<std::string>>()});
  }
  s.closing = j.value("closing", std::vector<std::string>{});
  check_schedule(s);
  if (j.contains("intervals") && j.at("intervals").get<std::size_t>() != s.interval_count()) {
    throw PreconditionError("schedule 'intervals' does not match its event count");
  }
  return s;
}

}  // namespace ddkit
