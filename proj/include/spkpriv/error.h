// Copyright (c) 2026 The spkpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPKPRIV_ERROR_H_
#define SPKPRIV_ERROR_H_

#include <stdexcept>
#include <string>

namespace spkpriv {

// Base class for everything the toolkit throws. The three subclasses map
// onto the distinct CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a format or invariant (malformed line, duplicate id,
// zero-norm embedding, unknown phone label, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A computation was asked for on inputs that do not meet its preconditions
// (empty score list, zero variance, too few speakers, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace spkpriv

#endif  // SPKPRIV_ERROR_H_
