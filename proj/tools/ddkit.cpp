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

// ddkit command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 precondition violated, 3 unfittable scan.
// `accept` returns the number of failed criteria instead.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ddkit/acceptance.hpp"
#include "ddkit/config.hpp"
#include "ddkit/errors.hpp"
#include "ddkit/model.hpp"
#include "ddkit/operators.hpp"
#include "ddkit/pulseshape.hpp"
#include "ddkit/sequences.hpp"
#include "ddkit/simulate.hpp"

namespace {

using namespace ddkit;

constexpr int kUsage = 1;
constexpr int kPrecondition = 2;
constexpr int kUnfittable = 3;

struct Overrides {
  std::optional<std::string> config_path;
  std::optional<int> seeds;
  std::optional<double> t_min, t_max;
  std::optional<int> t_points;
  std::optional<unsigned> threads;
};

Config resolve_config(const Overrides& o) {
  Config c = load_config(o.config_path);
  if (o.seeds) c.seeds = *o.seeds;
  if (o.t_min) c.t_min = *o.t_min;
  if (o.t_max) c.t_max = *o.t_max;
  if (o.t_points) c.t_points = *o.t_points;
  if (o.threads) c.threads = *o.threads;
  return c;
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::logic_error&) {
      throw PreconditionError("orders must be a comma-separated list of integers, got '" + text + "'");
    }
  }
  if (out.empty()) throw PreconditionError("orders must not be empty");
  return out;
}

std::string join_orders(const std::vector<int>& orders) {
  std::string s;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(orders[i]);
  }
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open '" + path + "' for writing");
  f << text;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw PreconditionError("'" + path + "' is not valid JSON: " + e.what());
  }
}

struct SequenceArgs {
  std::string scheme = "udd";
  std::string orders = "1";
  std::string moos = "qubit_full:1";
  std::string label;
  bool closing = false;
  bool allow_odd_inner = false;
};

Schedule build_schedule(const SequenceArgs& a, const Moos& moos) {
  const std::vector<int> orders = a.scheme == "first_order" || a.scheme == "sdd" || a.scheme == "free"
                                      ? std::vector<int>{}
                                      : parse_orders(a.orders);
  const auto single = [&] {
    if (orders.size() != 1) throw PreconditionError(a.scheme + " takes exactly one order");
    return orders.front();
  };
  if (a.scheme == "udd") {
    const std::string label = a.label.empty() ? moos.elements().front().label : a.label;
    if (!moos.contains(label)) throw PreconditionError("operator '" + label + "' is not in the MOOS");
    return udd(label, single());
  }
  if (a.scheme == "first_order") return first_order_schedule(moos, a.closing);
  if (a.scheme == "sdd") return sdd_schedule(first_order_schedule(moos, a.closing));
  if (a.scheme == "cdd") return cdd_uniform(moos, single());
  if (a.scheme == "cdd_nested") return cdd_nested(moos, orders);
  if (a.scheme == "nudd") return nudd(moos, orders, a.allow_odd_inner);
  if (a.scheme == "free") return Schedule{"free", {}, {}, {}};
  throw PreconditionError("unknown scheme '" + a.scheme +
                          "' (udd, first_order, sdd, cdd, cdd_nested, nudd, free)");
}

void add_sequence_options(CLI::App* cmd, SequenceArgs& a) {
  cmd->add_option("--scheme", a.scheme, "udd, first_order, sdd, cdd, cdd_nested, nudd, free")
      ->capture_default_str();
  cmd->add_option("--orders", a.orders, "comma-separated orders, innermost first")->capture_default_str();
  cmd->add_option("--moos", a.moos, "qubit_full:L, qubit_dephasing:L, mlevel_full:M, mlevel_diagonal:M")
      ->capture_default_str();
  cmd->add_option("--op", a.label, "operator for udd (default: first MOOS element)");
  cmd->add_flag("--closing", a.closing, "emit the optional closing pulses of first-order blocks");
  cmd->add_flag("--allow-odd-inner", a.allow_odd_inner, "permit odd inner NUDD orders");
}

int cmd_sequence(const SequenceArgs& a, const std::string& out) {
  const Moos moos = build_moos(MoosSpec::parse(a.moos));
  const Schedule s = build_schedule(a, moos);
  if (!out.empty()) write_text(out, to_json(s).dump(2) + "\n");
  std::cout << "scheme " << s.scheme << "\nintervals " << s.interval_count() << "\npulses";
  for (const auto& [label, count] : s.pulse_counts()) std::cout << ' ' << label << 'x' << count;
  std::cout << '\n';
  if (out.empty()) std::cout << to_json(s).dump(2) << '\n';
  return 0;
}

int cmd_moos(const std::string& spec, int closure, const std::string& out) {
  const Moos moos = build_moos(MoosSpec::parse(spec));
  nlohmann::json j = to_json(moos);
  std::cout << "moos " << spec << ": " << moos.size() << " elements, dim " << moos.dim() << '\n';
  for (const auto& op : moos.elements()) std::cout << "  " << op.label << '\n';
  if (closure > 0) {
    const auto basis = lie_closure(moos, closure);
    j["closure_dim"] = basis.size();
    std::cout << "closure dimension " << basis.size() << '\n';
  }
  if (!out.empty()) write_text(out, j.dump(2) + "\n");
  return 0;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json fits_json(const ScalingResult& r) {
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : r.fits) {
    nlohmann::json j{{"operator", f.label}, {"status", to_string(f.status)}};
    if (f.status == FitStatus::ok) {
      j["slope"] = f.fit.slope;
      j["intercept"] = f.fit.intercept;
      j["rms_residual"] = f.fit.rms_residual;
      j["points_used"] = f.fit.points_used;
    }
    nlohmann::json med = nlohmann::json::array();
    for (const auto& [t, e] : f.medians) med.push_back({t, e});
    j["medians"] = med;
    if (!f.diagnostic.empty()) j["diagnostic"] = f.diagnostic;
    fits.push_back(j);
  }
  return fits;
}

std::string companion_path(const std::string& out) {
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of('/');
  const std::string stem =
      dot != std::string::npos && (slash == std::string::npos || dot > slash) ? out.substr(0, dot) : out;
  return stem + ".fits.json";
}

// Writes the CSV and its fit companion; returns the exit code.
int emit_scan(const ScalingResult& r, const std::string& scheme, const std::string& orders,
              const std::string& out, nlohmann::json meta) {
  std::string csv = "scheme,orders,operator,T,seed,error\n";
  for (const auto& p : r.points) {
    csv += scheme + ',' + orders + ',' + p.op + ',' + format_double(p.t) + ',' +
           std::to_string(p.seed) + ',' + format_double(p.error) + '\n';
  }
  meta["fits"] = fits_json(r);
  if (!out.empty()) {
    write_text(out, csv);
    write_text(companion_path(out), meta.dump(2) + "\n");
  }
  int code = 0;
  for (const auto& f : r.fits) {
    std::cout << f.label << ": " << to_string(f.status);
    if (f.status == FitStatus::ok) {
      std::cout << " slope " << format_double(f.fit.slope) << " (" << f.fit.points_used
                << " points, rms " << f.fit.rms_residual << ")";
    }
    if (!f.diagnostic.empty()) std::cout << " - " << f.diagnostic;
    std::cout << '\n';
    if (f.status == FitStatus::unfittable) code = kUnfittable;
  }
  return code;
}

ModelDescriptor resolve_model(const std::string& text, const Config& c) {
  ModelDescriptor d = ModelDescriptor::parse(text);
  d.norm_bound = c.norm_bound;
  return d;
}

int cmd_scan(const SequenceArgs& a, const std::string& model_text, const Overrides& o,
             const std::string& out) {
  const Config c = resolve_config(o);
  const Moos moos = build_moos(MoosSpec::parse(a.moos));
  const Schedule s = build_schedule(a, moos);
  const ModelDescriptor model = resolve_model(model_text, c);
  if (model.sys_dim != moos.dim()) {
    throw PreconditionError("model system dimension " + std::to_string(model.sys_dim) +
                            " does not match MOOS dimension " + std::to_string(moos.dim()));
  }
  const ScalingResult r = order_scan(make_scan_request(s, moos, model), c.run_config());
  nlohmann::json meta{{"schedule", to_json(s)}, {"model", to_json(model)}, {"config", c.to_json()}};
  return emit_scan(r, s.scheme, join_orders(s.orders), out, meta);
}

int cmd_pulse_design(const std::string& family_text, const std::string& out) {
  const PulseFamily family = PulseFamily::parse(family_text);
  const PulseDesign d = design_pulse(family);
  const EtaIntegrals eta = eta_integrals(d.shape);
  std::cout << "family " << family.to_string() << ": converged after " << d.iterations
            << " iterations (start " << d.starts << ")\n";
  std::cout << "area " << format_double(d.shape.area()) << "  eta11 " << format_double(eta.eta11)
            << "  eta12 " << format_double(eta.eta12) << '\n';
  for (const auto& seg : d.shape.segments) {
    std::cout << "  len " << format_double(seg.len_frac) << "  amp " << format_double(seg.amp) << '\n';
  }
  const std::string text = to_json(d.shape).dump(2) + "\n";
  if (!out.empty()) write_text(out, text);
  else std::cout << text;
  return 0;
}

int cmd_pulse_scan(const std::string& pulse_path, const std::string& model_text,
                   const std::string& omega_label, const Overrides& o, const std::string& out) {
  const Config c = resolve_config(o);
  const PulseShape shape = pulse_from_json(read_json(pulse_path));
  const ModelDescriptor model = resolve_model(model_text, c);
  int qubits = 0;
  while ((1 << qubits) < model.sys_dim) ++qubits;
  if ((1 << qubits) != model.sys_dim) {
    throw PreconditionError("pulse scans need a qubit system, got dimension " +
                            std::to_string(model.sys_dim));
  }
  const Moos moos = build_moos({MoosSpec::Kind::qubit_full, qubits, {}});
  if (!moos.contains(omega_label)) {
    throw PreconditionError("operator '" + omega_label + "' is not in qubit_full:" + std::to_string(qubits));
  }
  const Operator& omega = moos.find(omega_label);
  PulseIntegration integration;
  integration.steps = c.pulse_steps;
  const ScalingResult r = pulse_error_scan(shape, model, omega, c.tau_grid(), c.run_config(), integration);
  nlohmann::json meta{{"pulse", to_json(shape)}, {"model", to_json(model)}, {"config", c.to_json()}};
  return emit_scan(r, "pulse", "", out, meta);
}

int cmd_accept(int criterion, const Overrides& o) {
  const Config c = resolve_config(o);
  AcceptanceOptions options;
  options.threads = c.threads;
  std::vector<CriterionResult> results;
  if (criterion > 0) results.push_back(run_criterion(criterion, options));
  else results = run_acceptance(options);
  int failures = 0;
  for (const auto& r : results) {
    std::cout << format_result(r) << std::endl;
    if (!r.passed) ++failures;
  }
  std::cout << results.size() - failures << "/" << results.size() << " criteria passed\n";
  return failures;
}

void add_run_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seeds", o.seeds, "number of random models (seeds 1..n)");
  cmd->add_option("--t-min", o.t_min, "smallest total time T");
  cmd->add_option("--t-max", o.t_max, "largest total time T");
  cmd->add_option("--t-points", o.t_points, "log-spaced T values");
  cmd->add_option("--threads", o.threads, "worker thread cap (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ddkit: dynamical decoupling schedules, order scans and pulse design"};
  app.require_subcommand(1);
  Overrides overrides;
  app.add_option("--config", overrides.config_path, "JSON config file (else $DDKIT_CONFIG)");

  std::string out;
  SequenceArgs seq;

  auto* sequence = app.add_subcommand("sequence", "compile a pulse schedule to JSON");
  add_sequence_options(sequence, seq);
  sequence->add_option("--out", out, "schedule JSON path (default: stdout)");

  std::string moos_spec = "qubit_full:1";
  int closure = 0;
  auto* moos = app.add_subcommand("moos", "build and validate a MOOS");
  moos->add_option("--spec", moos_spec, "MOOS spec")->capture_default_str();
  moos->add_option("--closure", closure, "also report the Lie closure, up to this dimension");
  moos->add_option("--out", out, "MOOS JSON path");

  std::string model = "general:2x4";
  auto* scan = app.add_subcommand("scan", "measure the decoupling order of a schedule");
  add_sequence_options(scan, seq);
  scan->add_option("--model", model, "random model, e.g. general:2x4")->capture_default_str();
  scan->add_option("--out", out, "CSV path; fits go to <stem>.fits.json");
  add_run_options(scan, overrides);

  auto* pulse = app.add_subcommand("pulse", "finite-width pulse design");
  pulse->require_subcommand(1);
  std::string family = "sym3";
  auto* design = pulse->add_subcommand("design", "solve for a second-order pulse envelope");
  design->add_option("--family", family, "rect, symN or pcN")->capture_default_str();
  design->add_option("--out", out, "pulse JSON path (default: stdout)");
  std::string pulse_path, omega = "X1";
  auto* pscan = pulse->add_subcommand("scan", "pulse error against duration");
  pscan->add_option("--pulse", pulse_path, "pulse JSON")->required();
  pscan->add_option("--model", model, "random model")->capture_default_str();
  pscan->add_option("--omega", omega, "pulsed operator")->capture_default_str();
  pscan->add_option("--out", out, "CSV path; fits go to <stem>.fits.json");
  pscan->add_option("--seeds", overrides.seeds, "number of random models");
  pscan->add_option("--threads", overrides.threads, "worker thread cap");

  int criterion = 0;
  auto* accept = app.add_subcommand("accept", "run the acceptance criteria");
  accept->add_option("--criterion", criterion, "run only this criterion")->check(
      CLI::Range(1, kCriterionCount));
  accept->add_option("--threads", overrides.threads, "worker thread cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*sequence) return cmd_sequence(seq, out);
    if (*moos) return cmd_moos(moos_spec, closure, out);
    if (*scan) return cmd_scan(seq, model, overrides, out);
    if (*design) return cmd_pulse_design(family, out);
    if (*pscan) return cmd_pulse_scan(pulse_path, model, omega, overrides, out);
    if (*accept) return cmd_accept(criterion, overrides);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kUnfittable;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return kPrecondition;
  }
  return kUsage;
}
