// Copyright 2026 The qnfauth Authors
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
#include <utility>

namespace qnf {

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A distribution has no mass outside the two ideal GHZ outcomes, so it cannot
/// be restricted to error states. Smooth the counts first.
class NoErrorMass : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// KL divergence (or a log-likelihood) is infinite: the reference assigns zero
/// probability to an outcome that was observed.
class DivergenceUndefined : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// An operation was invoked on a node that is not in the required protocol
/// state (e.g. authenticating with an untrained verifier).
class ProtocolStateError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// Configuration is missing a field, has an ill-typed field, or violates a
/// constraint. `field_path()` is a dotted path such as "classifier.alpha".
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string field_path, const std::string &message)
        : std::runtime_error(field_path + ": " + message), field_path_(std::move(field_path)) {}

    const std::string &field_path() const noexcept { return field_path_; }

   private:
    std::string field_path_;
};

}  // namespace qnf
