// Copyright 2026 The Telegate Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace telegate {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operand widths or matrix shapes do not agree.
struct DimensionError : Error {
    using Error::Error;
};

/// Input fails a precondition such as unitarity or involution.
struct ValidationError : Error {
    using Error::Error;
};

/// A gate was asked to be something it is not (e.g. a tableau for T).
struct ClassificationError : Error {
    using Error::Error;
};

/// Register wider than the dense simulator supports.
struct WidthOverflow : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

/// Teleportation rewrite could not be completed (no plan, bad correction, ...).
struct SynthesisError : Error {
    using Error::Error;
};

/// Two-party protocol uses a prohibited cross-party operation.
struct LocalityError : Error {
    using Error::Error;
};

}  // namespace telegate
