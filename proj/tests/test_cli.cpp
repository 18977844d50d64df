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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "ddkit/pulseshape.hpp"
#include "ddkit/sequences.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "ddkit_cli_test";
  fs::create_directories(dir);
  return dir;
}

Run run_cli(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
  const std::string cmd = "env -u DDKIT_CONFIG " + std::string(DDKIT_CLI) + " " + args + " >" +
                          out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

}  // namespace

TEST_CASE("sequence writes a loadable schedule") {
  const fs::path file = scratch() / "udd3.json";
  const Run r = run_cli("sequence --scheme udd --orders 3 --out " + file.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("intervals 4") != std::string::npos);
  CHECK(r.out.find("Z1x3") != std::string::npos);
  const ddkit::Schedule s = ddkit::schedule_from_json(nlohmann::json::parse(slurp(file)));
  CHECK(s == ddkit::udd("Z1", 3));
}

TEST_CASE("odd inner order is a precondition failure") {
  const Run r = run_cli("sequence --scheme nudd --orders 1,2");
  CHECK(r.code == 2);
  CHECK(r.err.find("even") != std::string::npos);
  const Run ok = run_cli("sequence --scheme nudd --orders 1,2 --allow-odd-inner");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("intervals 6") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("sequence --bogus").code == 1);
  CHECK(run_cli("sequence --scheme zigzag").code == 2);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("moos command") {
  const Run r = run_cli("moos --spec qubit_full:2 --closure 20");
  CHECK(r.code == 0);
  CHECK(r.out.find("closure dimension 15") != std::string::npos);
  CHECK(run_cli("moos --spec mlevel_full:0").code == 2);
}

TEST_CASE("scan output contract and determinism") {
  const fs::path a = scratch() / "scan_a.csv", b = scratch() / "scan_b.csv";
  const Run r1 = run_cli("scan --scheme udd --orders 2 --threads 1 --out " + a.string());
  const Run r2 = run_cli("scan --scheme udd --orders 2 --threads 4 --out " + b.string());
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  const std::string csv = slurp(a);
  CHECK(csv == slurp(b));
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "scheme,orders,operator,T,seed,error");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 12 * 8);
  const auto fits = nlohmann::json::parse(slurp(scratch() / "scan_a.fits.json"));
  REQUIRE(fits.at("fits").size() == 1);
  CHECK(fits["fits"][0]["status"] == "ok");
  CHECK(std::abs(fits["fits"][0]["slope"].get<double>() - 3.0) < 0.1);
}

TEST_CASE("free evolution scan") {
  const Run coarse = run_cli("scan --scheme free");
  CHECK(coarse.code == 3);
  CHECK(coarse.out.find("unfittable") != std::string::npos);
  const fs::path csv = scratch() / "free.csv";
  const Run fine = run_cli("scan --scheme free --t-min 1e-4 --t-max 1e-2 --out " + csv.string());
  REQUIRE(fine.code == 0);
  const auto fits = nlohmann::json::parse(slurp(scratch() / "free.fits.json"));
  for (const auto& f : fits["fits"]) CHECK(std::abs(f["slope"].get<double>() - 1.0) < 0.2);
}

TEST_CASE("config file is honoured and validated") {
  const fs::path cfg = scratch() / "cfg.json", bad = scratch() / "bad.json";
  std::ofstream(cfg) << R"({"seeds": 2, "t_points": 5})";
  std::ofstream(bad) << R"({"seedz": 2})";
  const fs::path csv = scratch() / "cfg.csv";
  REQUIRE(run_cli("--config " + cfg.string() + " scan --scheme udd --orders 2 --out " + csv.string()).code == 0);
  const std::string text = slurp(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 5 * 2);
  const Run r = run_cli("--config " + bad.string() + " scan --scheme udd --orders 2");
  CHECK(r.code == 2);
  CHECK(r.err.find("seedz") != std::string::npos);
}

TEST_CASE("pulse design and scan") {
  const fs::path pulse = scratch() / "pulse.json", csv = scratch() / "pulse.csv";
  REQUIRE(run_cli("pulse design --family sym3 --out " + pulse.string()).code == 0);
  const ddkit::PulseShape s = ddkit::pulse_from_json(nlohmann::json::parse(slurp(pulse)));
  CHECK(s.segments.size() == 3);
  CHECK(std::abs(ddkit::eta_integrals(s).eta12) < 1e-10);
  REQUIRE(run_cli("pulse scan --pulse " + pulse.string() + " --out " + csv.string()).code == 0);
  const auto fits = nlohmann::json::parse(slurp(scratch() / "pulse.fits.json"));
  const double slope = fits["fits"][0]["slope"].get<double>();
  CHECK(slope >= 1.8);
  CHECK(slope <= 2.3);
  CHECK(run_cli("pulse design --family rect").code == 3);
}

TEST_CASE("accept runs a single criterion") {
  const Run r = run_cli("accept --criterion 7");
  CHECK(r.code == 0);
  CHECK(r.out.find("[PASS] C7") != std::string::npos);
}
