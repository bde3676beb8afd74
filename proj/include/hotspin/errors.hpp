// Copyright 2026 The hotspin Authors
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

namespace hotspin {

// Base class for all library errors. `kind()` is a stable machine-readable
// tag used in CLI error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define HOTSPIN_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(tag, what) {}          \
  };

HOTSPIN_DEFINE_ERROR(NormalizationError, "normalization")
HOTSPIN_DEFINE_ERROR(NotUnitaryError, "not_unitary")
HOTSPIN_DEFINE_ERROR(BranchAmbiguityError, "branch_ambiguity")
HOTSPIN_DEFINE_ERROR(IntegrationError, "integration")
HOTSPIN_DEFINE_ERROR(CompilationError, "compilation")
HOTSPIN_DEFINE_ERROR(FitError, "fit")
HOTSPIN_DEFINE_ERROR(ConvergenceError, "convergence")
HOTSPIN_DEFINE_ERROR(UnknownGateError, "unknown_gate")
HOTSPIN_DEFINE_ERROR(ValidationError, "validation")
HOTSPIN_DEFINE_ERROR(ProfileError, "profile")
HOTSPIN_DEFINE_ERROR(UnknownKindError, "unknown_kind")
HOTSPIN_DEFINE_ERROR(LockError, "lock")

#undef HOTSPIN_DEFINE_ERROR

}  // namespace hotspin
