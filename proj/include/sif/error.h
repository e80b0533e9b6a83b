/*
 * Copyright 2026 The SIF Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SIF_ERROR_H_
#define SIF_ERROR_H_

#include <stdexcept>
#include <string>

namespace sif {

// Source position, 1-based. Zero means unknown.
struct Location {
  int line = 0;
  int column = 0;
};

std::string to_string(const Location& loc);

// Base class of every error the toolkit reports. Leaks are not errors; they
// are a normal RunOutcome.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, Location loc);
  const Location& location() const { return loc_; }
  const std::string& bare_message() const { return bare_; }

 private:
  Location loc_;
  std::string bare_;
};

// Semantic problem in a lattice, program or specification.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A template dependency could not be resolved to a value.
class UnresolvedDependency : public Error {
 public:
  using Error::Error;
};

// Dynamic failure while interpreting a program (type error, division by
// zero, stack overflow). Distinct from a Leak.
class RunError : public Error {
 public:
  using Error::Error;
};

}  // namespace sif

#endif  // SIF_ERROR_H_
