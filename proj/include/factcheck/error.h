// Copyright 2026 The Factcheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FACTCHECK_ERROR_H_
#define FACTCHECK_ERROR_H_

#include <stdexcept>
#include <string>

namespace factcheck {

// Base class for every error raised by the library. The CLI maps these to
// exit status 1 and prints what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (a bad JSON line, a bad key/value entry).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input whose content violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad configuration: unknown keys, out-of-range settings, missing columns.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace factcheck

#endif  // FACTCHECK_ERROR_H_
