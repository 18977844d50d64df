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

#include <functional>
#include <string>
#include <vector>

namespace ddkit {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  // measured values next to their tolerances
  double seconds = 0.0;
};

struct AcceptanceOptions {
  unsigned threads = 0;
  // Pulse timing used by the UDD ladder; replaceable to check that the ladder
  // catches a broken timing formula.
  std::function<std::vector<double>(int)> udd_timing;
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

// "[PASS] C1  title  (1.2 s)\n        detail"
std::string format_result(const CriterionResult& result);

}  // namespace ddkit
