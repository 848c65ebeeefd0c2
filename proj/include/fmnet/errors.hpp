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

#include <stdexcept>
#include <string>

namespace fmnet {

// Precondition failures on domain objects (bad sizes, mismatched embeddings,
// malformed orderings). Callers can catch std::invalid_argument generically.
class invalid_size : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class embedding_mismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class malformed_ordering : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class invalid_pair : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class unsupported_size : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Experiment configuration could not be parsed or names something unknown.
// `field` is the dotted path of the offending entry when known.
class config_error : public std::runtime_error {
 public:
  config_error(const std::string& field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A simulator or routing invariant was broken (buffer overflow, credit
// underflow, hop bound exceeded, lost packet).
class invariant_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class deadlock_detected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fmnet
