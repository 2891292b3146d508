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

// Theoretical tail asymptotes of I, of the excursion-area measure, and of
// the all-time supremum. Ladder exponents use the occupation-time
// normalization of ladder.hpp: phi_{h-hat}(lambda) = d lambda for
// spectrally positive compound Poisson models (d = -b), and
// phi_h(-lambda) = -psi(lambda) / phi_{h-hat}(lambda) through the
// Wiener-Hopf factorization psi(lambda) = (-phi_h(-lambda)) phi_{h-hat}(lambda).
// For Brownian motion with drift, phi_{h-hat}(lambda) = lambda.

#include "expfunc/errors.hpp"
#include "expfunc/exp_functional.hpp"
#include "expfunc/ladder.hpp"
#include "expfunc/levy_model.hpp"
#include "expfunc/moments.hpp"
#include "expfunc/s_alpha.hpp"
#include "expfunc/stats.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace expfunc {

/// Laplace exponent of the downward ladder height process.
inline double downward_ladder_exponent(const LevyModel& model, double lambda) {
    if (model.is_spectrally_positive_cp()) return model.infimum_rate() * lambda;
    if (!model.has_jumps() && model.has_gaussian()) return lambda;
    throw UnsupportedModel("ladder exponents are available for spectrally positive CP and Brownian models only");
}

/// phi_h(-lambda) = -psi(lambda) / phi_{h-hat}(lambda), lambda in C, lambda > 0.
inline double upward_ladder_exponent_neg(const LevyModel& model, double lambda) {
    return -model.laplace_exponent(lambda) / downward_ladder_exponent(model, lambda);
}

/// phi_h(0) = lim_{lambda -> 0} -psi(lambda) / phi_{h-hat}(lambda) = mu / phi_{h-hat}'(0).
inline double upward_ladder_killing(const LevyModel& model) {
    return -model.mean_increment() / downward_ladder_exponent(model, 1.0);
}

/// P(I > t) ~ E(I^alpha) / (-psi(alpha)) Pi(log t, inf).
struct Theorem1Asymptote {
    LevyModel model;
    double alpha;
    MomentResult moment;
    double constant;

    double operator()(double t) const {
        if (!(t > 1.0)) throw DomainError("asymptote needs t > 1");
        return constant * model.levy_tail(std::log(t));
    }
};

inline Theorem1Asymptote theorem1_asymptote(const LevyModel& model, double alpha, const MomentOptions& opts = {}) {
    const MomentResult m = moment(model, alpha, opts);
    return {model, alpha, m, m.value / (-model.laplace_exponent(alpha))};
}

inline double asymptote_theorem1(const LevyModel& model, double alpha, double t, const MomentOptions& opts = {}) {
    return theorem1_asymptote(model, alpha, opts)(t);
}

/// P(I > t) ~ (1 / mu) min{1, int_{log t}^inf Pi(u, inf) du}.
struct MzAsymptote {
    LevyModel model;
    double mu;

    double integrated_tail(double x) const {
        return std::min(1.0, IntegratedTail::integrated_levy_tail(model, x));
    }
    double operator()(double t) const {
        if (!(t > 1.0)) throw DomainError("asymptote needs t > 1");
        return integrated_tail(std::log(t)) / mu;
    }
};

inline MzAsymptote mz_asymptote(const LevyModel& model) {
    double mu = 0.0;
    try {
        mu = -model.mean_increment();
    } catch (const MomentError&) {
        throw MomentError("MZ asymptote needs mu = -E xi_1 in (0, inf)");
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) throw MomentError("MZ asymptote needs mu = -E xi_1 in (0, inf)");
    return {model, mu};
}

inline double asymptote_mz(const LevyModel& model, double t) { return mz_asymptote(model)(t); }

/// P(I > t) ~ C t^{-theta}, C = E(I^{theta - 1}) / E(xi_1 e^{theta xi_1}),
/// with E(xi_1 e^{theta xi_1}) = psi'(theta) because psi(theta) = 0.
struct CramerAsymptote {
    double theta;
    MomentResult moment;
    double psi_slope;
    double constant;

    double operator()(double t) const {
        if (!(t > 0.0)) throw DomainError("asymptote needs t > 0");
        return constant * std::pow(t, -theta);
    }
};

inline CramerAsymptote cramer_asymptote(const LevyModel& model, const MomentOptions& opts = {}) {
    const double theta = cramer_root(model);
    const MomentResult m = moment(model, theta - 1.0, opts);
    const double slope = model.laplace_exponent_derivative(theta);
    return {theta, m, slope, m.value / slope};
}

inline double asymptote_cramer(const LevyModel& model, double t, const MomentOptions& opts = {}) {
    return cramer_asymptote(model, opts)(t);
}

/// n(area > y) ~ E(I^alpha) / phi_h(-alpha) Pi(log y, inf).
struct Theorem2Asymptote {
    LevyModel model;
    double alpha;
    MomentResult moment;
    double phi_h_neg_alpha;
    double constant;

    double operator()(double y) const {
        if (!(y > 1.0)) throw DomainError("asymptote needs y > 1");
        return constant * model.levy_tail(std::log(y));
    }
};

inline Theorem2Asymptote theorem2_asymptote(const LevyModel& model, double alpha, const MomentOptions& opts = {}) {
    require_spectrally_positive(model, "asymptote_theorem2");
    const double phi = upward_ladder_exponent_neg(model, alpha);
    const MomentResult m = moment(model, alpha, opts);
    return {model, alpha, m, phi, m.value / phi};
}

inline double asymptote_theorem2(const LevyModel& model, double alpha, double y, const MomentOptions& opts = {}) {
    return theorem2_asymptote(model, alpha, opts)(y);
}

/// Subexponential case: n(area > y) / int_{log y}^inf Pi(u, inf) du -> 0.
/// Supplies the denominator; the target ratio is 0.
struct Theorem3MzTarget {
    LevyModel model;
    static constexpr double target = 0.0;

    double denominator(double y) const {
        if (!(y > 1.0)) throw DomainError("asymptote needs y > 1");
        return IntegratedTail::integrated_levy_tail(model, std::log(y));
    }
};

/// Cramer case: y^theta n(area > y) -> E(I^{theta - 1}) / mu_h^{(theta)},
/// mu_h^{(theta)} = E(h_1 e^{theta h_1}) = psi'(theta) / phi_{h-hat}(theta).
struct Theorem3CramerAsymptote {
    double theta;
    MomentResult moment;
    double mu_h_theta;
    double constant;

    double operator()(double y) const {
        if (!(y > 0.0)) throw DomainError("asymptote needs y > 0");
        return constant * std::pow(y, -theta);
    }
};

inline Theorem3CramerAsymptote theorem3_cramer_asymptote(const LevyModel& model, const MomentOptions& opts = {}) {
    const double theta = cramer_root(model);
    const double mu_h = model.laplace_exponent_derivative(theta) / downward_ladder_exponent(model, theta);
    const MomentResult m = moment(model, theta - 1.0, opts);
    return {theta, m, mu_h, m.value / mu_h};
}

/// P(sup xi > t) ~ phi_h(0) / phi_h(-alpha)^2 Pi(t, inf)
///               = mu d alpha^2 / psi(alpha)^2 Pi(t, inf)  (spectrally positive).
/// `ladder_constant` is the same expression read with the ladder height
/// Levy tail Pi_h(t, inf) ~ Pi(t, inf) / phi_{h-hat}(alpha) in place of
/// Pi(t, inf); under the occupation-time normalization it is the one that
/// agrees with the compound-geometric (Pollaczek-Khinchine) law of sup xi.
struct SupTailAsymptote {
    LevyModel model;
    double alpha;
    double phi_h0;
    double phi_h_neg_alpha;
    double constant;
    double ladder_constant;

    double operator()(double t) const { return constant * model.levy_tail(t); }
};

inline SupTailAsymptote sup_tail_asymptote(const LevyModel& model, double alpha) {
    require_spectrally_positive(model, "asymptote_sup_tail");
    const double phi0 = upward_ladder_killing(model);
    const double phia = upward_ladder_exponent_neg(model, alpha);
    const double c = phi0 / (phia * phia);
    return {model, alpha, phi0, phia, c, c / downward_ladder_exponent(model, alpha)};
}

inline double asymptote_sup_tail(const LevyModel& model, double alpha, double t) {
    return sup_tail_asymptote(model, alpha)(t);
}

/// Two-sample comparison of I against Q + M I~ from independent streams.
struct RecurrenceReport {
    std::size_t n = 0;
    double t_local = 1.0;
    double ks_statistic = 0.0;
    double threshold = 0.0;
    double max_m = 0.0;
    bool pass = false;
};

/// Draws n values of I (substream 0), n pairs (Q, M) at local time t_local
/// (substream 1) and n independent copies I~ (substream 2), and compares I
/// with Q + M I~ by the two-sample KS statistic at level 0.01.
inline RecurrenceReport verify_random_recurrence(const LevyModel& model, std::uint64_t seed, std::size_t n,
                                                 double t_local = 1.0, const SamplerControl& ctrl = {},
                                                 unsigned workers = 0) {
    require_spectrally_positive(model, "verify_random_recurrence");
    const auto direct = values_of(sample_exp_functionals(model, seed, n, ctrl, workers, 0));
    const auto pairs = parallel_map(n, workers, [&](std::size_t i) {
        RandomStream rng(seed, i, 1);
        return sample_recurrence_pair(model, rng, t_local);
    });
    const auto copies = values_of(sample_exp_functionals(model, seed, n, ctrl, workers, 2));
    std::vector<double> rebuilt(n);
    RecurrenceReport out;
    out.n = n;
    out.t_local = t_local;
    for (std::size_t i = 0; i < n; ++i) {
        rebuilt[i] = pairs[i].q + pairs[i].m * copies[i];
        out.max_m = std::max(out.max_m, pairs[i].m);
    }
    // samples are accurate to the sampler's relative tolerance; treat closer values as ties
    out.ks_statistic = ks_two_sample(direct, rebuilt, 4.0 * ctrl.rel_tol);
    out.threshold = ks_two_sample_threshold(n, n, 0.01);
    out.pass = out.ks_statistic < out.threshold;
    return out;
}

}  // namespace expfunc
