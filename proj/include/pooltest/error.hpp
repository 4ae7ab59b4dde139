// Copyright 2026 The pooltest Authors
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

#ifndef POOLTEST_ERROR_HPP_
#define POOLTEST_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pooltest {

/// Raised for arguments that violate an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An observed batch-negative rate that no infection rate can produce.
class OutOfInvertibleRange : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The expected-tests objective has no interior minimum (q == 1).
class NoFiniteOptimum : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Pooling costs at least as much as testing everyone individually.
class BatchingNotBeneficial : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace pooltest

#endif  // POOLTEST_ERROR_HPP_
