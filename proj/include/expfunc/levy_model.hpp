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

#include "expfunc/errors.hpp"
#include "expfunc/jump_law.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace expfunc {

/// A finite-activity Levy process
///
///     xi_t = b t + sigma W_t + (compound Poisson with rate lambda_J, jump law F),
///
/// parameterized so that psi(lambda) = b lambda + sigma^2 lambda^2 / 2
/// + lambda_J (E e^{lambda J} - 1). In the (a, sigma, Pi) triple with
/// characteristic exponent containing "-i a lambda"-style drift, b = -a.
///
/// The model must drift to -infinity: E xi_1 < 0, or, when E xi_1 is
/// undefined, a non-empty drift certificate string supplied by the caller.
class LevyModel {
public:
    LevyModel(double drift, double gaussian_var, double jump_rate, std::optional<JumpLaw> jump_law,
              std::string drift_certificate = {})
        : drift_(drift),
          gaussian_var_(gaussian_var),
          jump_rate_(jump_rate),
          jump_law_(std::move(jump_law)),
          drift_certificate_(std::move(drift_certificate)) {
        if (!std::isfinite(drift_)) throw SchemaError("drift", "must be finite");
        if (!(gaussian_var_ >= 0.0) || !std::isfinite(gaussian_var_))
            throw SchemaError("gaussian_var", "must be finite and >= 0");
        if (!(jump_rate_ >= 0.0) || !std::isfinite(jump_rate_))
            throw SchemaError("jump_rate", "must be finite and >= 0");
        if (jump_rate_ > 0.0 && !jump_law_) throw SchemaError("jump_law", "required when jump_rate > 0");
        if (jump_rate_ == 0.0) jump_law_.reset();
        double m = 0.0;
        try {
            m = mean_increment();
        } catch (const MomentError&) {
            if (drift_certificate_.empty())
                throw SchemaError("drift_certificate", "E xi_1 undefined; a drift-to-minus-infinity certificate is required");
            return;
        }
        if (!(m < 0.0) && drift_certificate_.empty())
            throw SchemaError("drift", "model does not drift to -infinity (E xi_1 >= 0)");
    }

    /// Pure Brownian motion with drift: psi(lambda) = drift lambda + var lambda^2 / 2.
    static LevyModel brownian(double drift, double gaussian_var) {
        return LevyModel(drift, gaussian_var, 0.0, std::nullopt);
    }

    /// Drift plus compound Poisson jumps, no Gaussian part.
    static LevyModel compound_poisson(double drift, double jump_rate, JumpLaw law) {
        return LevyModel(drift, 0.0, jump_rate, std::move(law));
    }

    double drift() const noexcept { return drift_; }
    double gaussian_var() const noexcept { return gaussian_var_; }
    double jump_rate() const noexcept { return jump_rate_; }
    const std::optional<JumpLaw>& jump_law() const noexcept { return jump_law_; }
    const std::string& drift_certificate() const noexcept { return drift_certificate_; }

    bool has_jumps() const noexcept { return jump_rate_ > 0.0; }
    bool has_gaussian() const noexcept { return gaussian_var_ > 0.0; }

    /// No Gaussian part, no downward jumps, strictly negative drift: the
    /// infimum decreases continuously at rate -b while the process sits there.
    bool is_spectrally_positive_cp() const noexcept {
        return !has_gaussian() && drift_ < 0.0 && (!has_jumps() || !jump_law_->has_downward_jumps());
    }

    /// Rate d = -b at which the infimum decreases (spectrally positive case).
    double infimum_rate() const noexcept { return -drift_; }

    /// C = {lambda : E e^{lambda xi_1} < inf}.
    MomentDomain exp_moment_domain() const noexcept {
        return has_jumps() ? jump_law_->domain() : MomentDomain{};
    }

    /// psi(lambda) = log E e^{lambda xi_1}; psi(0) = 0 exactly.
    double laplace_exponent(double lambda) const {
        if (lambda == 0.0) return 0.0;
        if (!exp_moment_domain().contains(lambda))
            throw DomainError("laplace_exponent: lambda outside C");
        double psi = drift_ * lambda + 0.5 * gaussian_var_ * lambda * lambda;
        if (has_jumps()) psi += jump_rate_ * (jump_law_->exp_moment(lambda) - 1.0);
        return psi;
    }

    /// psi'(lambda) = E[xi_1 e^{lambda xi_1}] / E e^{lambda xi_1}. Analytic when
    /// the jump law has a closed form, else a central difference with
    /// h = 1e-6 max(1, |lambda|), one-sided at a closed endpoint of C.
    double laplace_exponent_derivative(double lambda) const {
        if (!exp_moment_domain().contains(lambda))
            throw DomainError("laplace_exponent_derivative: lambda outside C");
        double d = drift_ + gaussian_var_ * lambda;
        if (!has_jumps()) return d;
        if (lambda == 0.0) return mean_increment();
        if (const auto closed = jump_law_->exp_moment_derivative(lambda)) return d + jump_rate_ * *closed;
        const double h = 1e-6 * std::max(1.0, std::abs(lambda));
        const auto dom = exp_moment_domain();
        const bool up_ok = dom.contains(lambda + h);
        const bool down_ok = dom.contains(lambda - h);
        if (up_ok && down_ok) return (laplace_exponent(lambda + h) - laplace_exponent(lambda - h)) / (2.0 * h);
        if (down_ok) return (laplace_exponent(lambda) - laplace_exponent(lambda - h)) / h;
        return (laplace_exponent(lambda + h) - laplace_exponent(lambda)) / h;
    }

    /// Pi(x, inf) = lambda_J P(J > x), x > 0.
    double levy_tail(double x) const {
        if (!(x > 0.0)) throw DomainError("levy_tail needs x > 0");
        return has_jumps() ? jump_rate_ * jump_law_->upper_tail(x) : 0.0;
    }

    double log_levy_tail(double x) const {
        if (!(x > 0.0)) throw DomainError("log_levy_tail needs x > 0");
        return has_jumps() ? std::log(jump_rate_) + jump_law_->log_upper_tail(x) : -kInf;
    }

    /// E xi_1 = b + lambda_J E J. Throws MomentError when E|J| is infinite.
    double mean_increment() const {
        return drift_ + (has_jumps() ? jump_rate_ * jump_law_->mean() : 0.0);
    }

private:
    double drift_;
    double gaussian_var_;
    double jump_rate_;
    std::optional<JumpLaw> jump_law_;
    std::string drift_certificate_;
};

}  // namespace expfunc
