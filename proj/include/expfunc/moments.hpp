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

// Moments of I = int_0^inf e^{xi_s} ds and the Cramer root of psi.
//
// For gamma > 0, E(I^gamma) < inf iff psi(gamma) < 0, and then
//     E(I^gamma) = gamma / (-psi(gamma)) E(I^{gamma - 1}).
// Iterating gives a product over k = 1..gamma for integer gamma, and a
// product times the base moment E(I^{gamma - floor(gamma)}) otherwise; the
// base moment (order in (0, 1)) is estimated by Monte Carlo. When
// mu = -E xi_1 is finite and positive, E(I^{-1}) = mu.

#include "expfunc/errors.hpp"
#include "expfunc/exp_functional.hpp"
#include "expfunc/levy_model.hpp"
#include "expfunc/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace expfunc {

enum class MomentMethod { product_formula, recursion_with_mc_base, mc_direct, inverse_identity };

inline std::string to_string(MomentMethod m) {
    switch (m) {
        case MomentMethod::product_formula: return "product_formula";
        case MomentMethod::recursion_with_mc_base: return "recursion_with_mc_base";
        case MomentMethod::mc_direct: return "mc_direct";
        case MomentMethod::inverse_identity: return "inverse_identity";
    }
    return "unknown";
}

struct MomentResult {
    double gamma = 0.0;
    double value = 0.0;
    MomentMethod method = MomentMethod::product_formula;
    /// Zero for exact values.
    double standard_error = 0.0;
};

/// Monte Carlo settings for moments that need a base estimate.
struct MomentOptions {
    std::uint64_t seed = 20260101;
    std::size_t mc_samples = 100000;
    SamplerControl control;
    unsigned workers = 0;
};

/// E(I^{-1}) = mu = -E xi_1.
inline double moment_inverse(const LevyModel& model) {
    const double mu = -model.mean_increment();
    if (!(mu > 0.0) || !std::isfinite(mu)) throw MomentError("mu = -E xi_1 must lie in (0, inf)");
    return mu;
}

/// prod_{k=1}^{n} k / (-psi(k)).
inline double moment_product(const LevyModel& model, int n) {
    double value = 1.0;
    for (int k = 1; k <= n; ++k) value *= static_cast<double>(k) / (-model.laplace_exponent(static_cast<double>(k)));
    return value;
}

/// Climbs from E(I^{gamma0}) = base to E(I^{gamma0 + steps}) with
/// E(I^g) = g / (-psi(g)) E(I^{g - 1}).
inline double moment_recursion(const LevyModel& model, double gamma0, double base, int steps) {
    double value = base;
    for (int k = 1; k <= steps; ++k) {
        const double g = gamma0 + k;
        value = g / (-model.laplace_exponent(g)) * value;
    }
    return value;
}

/// Sample mean of I^gamma with its standard error.
inline MeanEstimate mc_moment(const std::vector<double>& values, double gamma) {
    std::vector<double> powered(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) powered[i] = std::pow(values[i], gamma);
    return mean_and_se(powered);
}

inline void require_finite_moment(const LevyModel& model, double gamma) {
    if (!model.exp_moment_domain().contains(gamma)) throw DomainError("gamma outside the exponential-moment domain C");
    if (model.laplace_exponent(gamma) >= 0.0)
        throw FinitenessError("E(I^gamma) is infinite: psi(" + std::to_string(gamma) + ") >= 0");
}

/// E(I^gamma). Integer gamma: exact product. Fractional gamma > 0: recursion
/// down to a base order in (0, 1), estimated by Monte Carlo, with the
/// standard error scaled by the same product. gamma = -1: mu. Other
/// negative orders: Monte Carlo directly.
inline MomentResult moment(const LevyModel& model, double gamma, const MomentOptions& opts = {}) {
    MomentResult out;
    out.gamma = gamma;
    if (gamma == 0.0) {
        out.value = 1.0;
        return out;
    }
    if (gamma == -1.0) {
        out.value = moment_inverse(model);
        out.method = MomentMethod::inverse_identity;
        return out;
    }
    const auto mc = [&](double order) {
        const auto samples = sample_exp_functionals(model, opts.seed, opts.mc_samples, opts.control, opts.workers);
        return mc_moment(values_of(samples), order);
    };
    if (gamma < 0.0) {
        const MeanEstimate est = mc(gamma);
        out.value = est.mean;
        out.standard_error = est.standard_error;
        out.method = MomentMethod::mc_direct;
        return out;
    }
    require_finite_moment(model, gamma);
    const double whole = std::floor(gamma);
    if (whole == gamma) {
        out.value = moment_product(model, static_cast<int>(whole));
        out.method = MomentMethod::product_formula;
        return out;
    }
    const double base_order = gamma - whole;
    const MeanEstimate base = mc(base_order);
    const int steps = static_cast<int>(whole);
    const double factor = moment_recursion(model, base_order, 1.0, steps);
    out.value = factor * base.mean;
    out.standard_error = factor * base.standard_error;
    out.method = steps == 0 ? MomentMethod::mc_direct : MomentMethod::recursion_with_mc_base;
    return out;
}

/// theta > 0 with psi(theta) = 0, by bisection on the convex psi.
/// Throws NoRootError when psi < 0 on all of (0, sup C) (the
/// convolution-equivalent situation).
inline double cramer_root(const LevyModel& model) {
    const MomentDomain dom = model.exp_moment_domain();
    if (!(dom.upper > 0.0)) throw NoRootError("C contains no positive lambda");
    double hi = 0.0;
    if (dom.upper == kInf) {
        hi = 1.0;
        while (model.laplace_exponent(hi) < 0.0) {
            hi *= 2.0;
            if (hi > 1e8) throw NoRootError("psi stays negative on (0, 1e8)");
        }
    } else if (dom.upper_closed) {
        hi = dom.upper;
        const double at_edge = model.laplace_exponent(hi);
        if (at_edge < 0.0) throw NoRootError("psi < 0 on (0, sup C]: no Cramer root");
        if (at_edge == 0.0) return hi;
    } else {
        double gap = 0.5 * dom.upper;
        for (;;) {
            hi = dom.upper - gap;
            if (model.laplace_exponent(hi) >= 0.0) break;
            gap *= 0.5;
            if (gap < 1e-15 * dom.upper) throw NoRootError("psi stays negative up to sup C");
        }
    }
    double lo = 0.0;
    double best = hi;
    double best_abs = std::abs(model.laplace_exponent(hi));
    for (int i = 0; i < 200 && hi - lo > 4e-16 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double psi = model.laplace_exponent(mid);
        if (std::abs(psi) < best_abs) {
            best = mid;
            best_abs = std::abs(psi);
        }
        if (psi == 0.0) return mid;
        (psi < 0.0 ? lo : hi) = mid;
    }
    return best;
}

}  // namespace expfunc
