// Copyright 2026 The fogres Authors
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

#ifndef FOGRES_ERRORS_HPP
#define FOGRES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fogres {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FOGRES_DEFINE_ERROR(Name)        \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

// topology
FOGRES_DEFINE_ERROR(ParseError);
FOGRES_DEFINE_ERROR(ValidationError);
FOGRES_DEFINE_ERROR(InvalidConfig);
FOGRES_DEFINE_ERROR(UnknownNode);

// demand / parameters
FOGRES_DEFINE_ERROR(InvalidFraction);
FOGRES_DEFINE_ERROR(InfeasibleDeadline);
FOGRES_DEFINE_ERROR(ZeroRate);
FOGRES_DEFINE_ERROR(NoServer);

// energy
FOGRES_DEFINE_ERROR(OverCapacity);
FOGRES_DEFINE_ERROR(InconsistentSolution);

// routing
FOGRES_DEFINE_ERROR(NoPath);
FOGRES_DEFINE_ERROR(CapacityExceeded);

// optimisers
FOGRES_DEFINE_ERROR(Infeasible);
FOGRES_DEFINE_ERROR(NoFeasibleAssignment);
FOGRES_DEFINE_ERROR(NoDisjointNodes);
FOGRES_DEFINE_ERROR(NoDisjointRoute);

// harness
FOGRES_DEFINE_ERROR(MisalignedRows);
FOGRES_DEFINE_ERROR(IoError);

#undef FOGRES_DEFINE_ERROR

}  // namespace fogres

#endif  // FOGRES_ERRORS_HPP
