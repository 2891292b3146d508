/*
   Copyright 2026 The expfunc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace expfunc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the exponential-moment domain or otherwise invalid.
class DomainError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

/// A required moment (typically E|J|) is infinite or undefined.
class MomentError : public Error {
public:
    using Error::Error;
};

/// E(I^gamma) is infinite because psi(gamma) >= 0.
class FinitenessError : public Error {
public:
    using Error::Error;
};

/// psi stays negative on (0, sup C): no Cramer root.
class NoRootError : public Error {
public:
    using Error::Error;
};

/// A simulation loop exceeded its segment or event cap.
class NonTerminating : public Error {
public:
    using Error::Error;
};

/// Operation needs a spectrally positive finite-activity model without
/// Gaussian part (or another structural property the model lacks).
class UnsupportedModel : public Error {
public:
    using Error::Error;
};

class DegenerateSample : public Error {
public:
    using Error::Error;
};

/// Invalid model or scenario document. `field()` names the offending key.
class SchemaError : public Error {
public:
    SchemaError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace expfunc
