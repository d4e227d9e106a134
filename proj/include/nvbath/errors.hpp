// Copyright 2026 The nvbath Authors
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

#include <stdexcept>
#include <string>

namespace nvbath {

enum class ErrorKind { config, numerical, io };

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define NVBATH_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, #Name ": " + what) {} \
  };

NVBATH_DEFINE_ERROR(DimensionMismatch, numerical)
NVBATH_DEFINE_ERROR(NegativeRate, numerical)
NVBATH_DEFINE_ERROR(DegenerateSteadyState, numerical)
NVBATH_DEFINE_ERROR(NoStationaryState, numerical)
NVBATH_DEFINE_ERROR(SingularResolvent, numerical)
NVBATH_DEFINE_ERROR(DivergentSqueezingTime, numerical)
NVBATH_DEFINE_ERROR(NoFixedPoint, numerical)
NVBATH_DEFINE_ERROR(FactorNonpositive, numerical)
NVBATH_DEFINE_ERROR(InvalidArgument, numerical)
NVBATH_DEFINE_ERROR(ConfigError, config)
NVBATH_DEFINE_ERROR(IoError, io)

#undef NVBATH_DEFINE_ERROR

}  // namespace nvbath
