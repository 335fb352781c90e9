// Copyright 2026 The lossyflow Authors.
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

#ifndef LOSSYFLOW_ERRORS_HPP_
#define LOSSYFLOW_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace lossyflow {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input that violates a documented precondition (bad sign, wrong range...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// An iterative method hit its cap. Carries what it had at that point.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate,
                   double residual)
      : Error(what), last_iterate_(std::move(last_iterate)),
        residual_(residual) {}

  const std::vector<double>& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> last_iterate_;
  double residual_;
};

// A computed quantity contradicts an invariant the algorithm relies on,
// usually because a tolerance or eigenvalue bound was too loose.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace lossyflow

#endif  // LOSSYFLOW_ERRORS_HPP_
