/*
 * Copyright 2026 The fmnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <vector>

namespace fmnet {

struct VerifyLine {
  int n = 0;
  bool pass = false;
  bool skipped = false;
  std::string detail;  // counts on PASS, a counterexample on FAIL
};

struct VerifyReport {
  std::string subject;
  std::vector<VerifyLine> lines;
  // Every checked n passed and at least one n was checked.
  bool pass() const;
};

// "a..b" or a single "n". Throws config_error("range", ...) when malformed
// or when a > b.
std::pair<int, int> parse_range(const std::string& text);

// Subjects:
//   theorem1          sRINR arcs all carry n-2 allowed 2-paths and the total
//                     is n(n-1)(n-2)/2; sRINR labels tie, so it reports
//                     FAIL with the actual count and utilization range
//   claim             minimum intermediates per pair under sRINR, even n
//   cdg:<routing>     the routing's channel dependency graph on K_n is acyclic
//   escape:<service>  TERA with that service passes the escape check on K_n
// Throws config_error for an unknown subject.
VerifyReport verify_subject(const std::string& subject, int n_lo, int n_hi);

}  // namespace fmnet
