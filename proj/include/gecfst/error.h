// Copyright 2026 The gecfst Authors
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

#ifndef GECFST_ERROR_H_
#define GECFST_ERROR_H_

#include <stdexcept>
#include <string>

namespace gecfst {

// Base class for every error raised by the library. The C API maps each
// subclass onto a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration: mismatched symbol tables, bad parameters, missing
// resources, non-acceptor input where an acceptor is required.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The operation is well-defined in general but not supported here, e.g.
// determinizing a cyclic automaton.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string &what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed tokens in an invalid arrangement, e.g. a dangling subword
// continuation marker.
class FormatError : public Error {
 public:
  using Error::Error;
};

// No hypothesis could be produced.
class DecodeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gecfst

#endif  // GECFST_ERROR_H_
