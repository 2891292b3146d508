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
#include "expfunc/levy_model.hpp"
#include "expfunc/parallel.hpp"
#include "expfunc/path.hpp"
#include "expfunc/rng.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace expfunc {

/// Truncation control for sampling I = int_0^inf e^{xi_s} ds.
struct SamplerControl {
    /// Barrier spacing B: the path is followed to first passage below -B,
    /// then -2B, ... until the remainder bound is small enough.
    double barrier = 25.0;
    double rel_tol = 1e-6;
    /// R-hat, a cap standing in for the independent remainder copy I'.
    /// Defaults to 1e3 * (-1 / psi(1)) = 1e3 E(I) when psi(1) < 0.
    std::optional<double> remainder_cap;
    /// Euler grid for the Gaussian part.
    double dt = 1e-3;
    int max_segments = 10000;
    std::uint64_t max_events = 200'000'000;
};

/// R-hat for a model: the configured cap, or 1e3 E(I) = 1e3 / (-psi(1)).
/// Note this is a mean-level control, not a quantile of I.
inline double resolve_remainder_cap(const LevyModel& model, const SamplerControl& ctrl) {
    if (ctrl.remainder_cap) {
        if (!(*ctrl.remainder_cap > 0.0)) throw DomainError("remainder_cap must be > 0");
        return *ctrl.remainder_cap;
    }
    if (model.exp_moment_domain().contains(1.0)) {
        const double psi1 = model.laplace_exponent(1.0);
        if (psi1 < 0.0) return 1e3 / (-psi1);
    }
    throw DomainError("psi(1) >= 0 or undefined: remainder_cap must be supplied");
}

/// One draw of I with its truncation diagnostics.
struct ExpFunctionalSample {
    /// Exact integral up to the final barrier passage.
    double value = 0.0;
    /// e^{xi_tau} * R-hat at the final passage.
    double remainder_bound = 0.0;
    int segments_used = 0;
    double final_level = 0.0;
    /// Running supremum of xi over the simulated stretch.
    double supremum = 0.0;
};

/// Mutable state of a path being followed forward in time.
struct WalkState {
    double time = 0.0;
    double level = 0.0;
    double integral = 0.0;
    double supremum = 0.0;
    std::uint64_t events = 0;
    /// Residual time to the next jump for the gridded walk (NaN: undrawn).
    double time_to_jump = std::numeric_limits<double>::quiet_NaN();
};

enum class WalkStop { passage, time_limit };

namespace detail {

template <class Rng>
WalkStop walk_exact(const LevyModel& model, Rng& rng, WalkState& s, double target, double time_limit,
                    std::uint64_t max_events) {
    const double b = model.drift();
    const double rate = model.jump_rate();
    if (s.level <= target) return WalkStop::passage;
    for (;;) {
        const double gap = rate > 0.0 ? rng.exponential() / rate : kInf;
        const double hit = b < 0.0 ? (s.level - target) / (-b) : kInf;
        const double remaining = time_limit - s.time;
        const double step = std::min({gap, hit, remaining});
        if (step == kInf) throw NonTerminating("path never reaches the target level");
        s.integral += segment_exp_integral(s.level, b, step);
        s.time += step;
        if (step == hit && hit <= gap) {
            s.level = target;
            return WalkStop::passage;
        }
        s.level += b * step;
        s.supremum = std::max(s.supremum, s.level);
        if (step == remaining && remaining <= gap) return WalkStop::time_limit;
        s.level += model.jump_law()->sample(rng);
        s.supremum = std::max(s.supremum, s.level);
        if (++s.events > max_events) throw NonTerminating("event cap exceeded");
        if (s.level <= target) return WalkStop::passage;
    }
}

template <class Rng>
WalkStop walk_gridded(const LevyModel& model, Rng& rng, WalkState& s, double target, double time_limit,
                      double dt, std::uint64_t max_events) {
    const double b = model.drift();
    const double sigma = std::sqrt(model.gaussian_var());
    const double rate = model.jump_rate();
    const double sqrt_dt = std::sqrt(dt);
    if (s.level <= target) return WalkStop::passage;
    if (rate > 0.0 && std::isnan(s.time_to_jump)) s.time_to_jump = rng.exponential() / rate;
    double e_level = std::exp(s.level);
    for (;;) {
        double h = dt;
        double sd = sqrt_dt;
        if (time_limit - s.time < dt) {
            h = time_limit - s.time;
            if (h <= 0.0) return WalkStop::time_limit;
            sd = std::sqrt(h);
        }
        const double slope = (b * h + sigma * sd * rng.normal()) / h;
        double left = 0.0;  // elapsed fraction of the step, in time units
        while (rate > 0.0 && s.time_to_jump < h - left) {
            const double piece = s.time_to_jump;
            const double mid = s.level + slope * piece;
            const double e_mid = std::exp(mid);
            s.integral += 0.5 * piece * (e_level + e_mid);
            left += piece;
            s.level = mid + model.jump_law()->sample(rng);
            e_level = std::exp(s.level);
            s.supremum = std::max(s.supremum, std::max(mid, s.level));
            s.time_to_jump = rng.exponential() / rate;
            if (++s.events > max_events) throw NonTerminating("event cap exceeded");
            if (s.level <= target) {
                s.time += left;
                return WalkStop::passage;
            }
        }
        const double piece = h - left;
        const double end = s.level + slope * piece;
        const double e_end = std::exp(end);
        s.integral += 0.5 * piece * (e_level + e_end);
        s.level = end;
        e_level = e_end;
        if (rate > 0.0) s.time_to_jump -= piece;
        s.time += h;
        s.supremum = std::max(s.supremum, s.level);
        if (++s.events > max_events) throw NonTerminating("step cap exceeded");
        if (s.level <= target) return WalkStop::passage;
        if (s.time >= time_limit) return WalkStop::time_limit;
    }
}

}  // namespace detail

/// Follows xi from the state `s` until its level drops to `target` or below
/// (first passage) or the time reaches `time_limit`, accumulating
/// int e^{xi_s} ds. Without a Gaussian part this is exact: passages by drift
/// land exactly on the target. With one, the path is an Euler grid of step
/// dt and the integral uses the trapezoid rule.
template <class Rng>
WalkStop walk(const LevyModel& model, Rng& rng, WalkState& s, double target, double time_limit = kInf,
              double dt = 1e-3, std::uint64_t max_events = 200'000'000) {
    if (model.has_gaussian()) return detail::walk_gridded(model, rng, s, target, time_limit, dt, max_events);
    return detail::walk_exact(model, rng, s, target, time_limit, max_events);
}

/// One draw of I by barrier-and-recurse truncation: follow the path to
/// first passage below -B; by the strong Markov property the rest is
/// e^{xi_tau} I' with I' an independent copy, so stop once
/// e^{xi_tau} R-hat < rel_tol * I-hat, else continue to -2B, -3B, ...
template <class Rng>
ExpFunctionalSample sample_exp_functional(const LevyModel& model, Rng& rng, const SamplerControl& ctrl = {}) {
    if (!(ctrl.barrier > 0.0)) throw DomainError("barrier must be > 0");
    const double cap = resolve_remainder_cap(model, ctrl);
    WalkState s;
    for (int segment = 1;; ++segment) {
        if (segment > ctrl.max_segments)
            throw NonTerminating("segment cap exceeded: model does not drift to -infinity fast enough for this barrier");
        walk(model, rng, s, -ctrl.barrier * segment, kInf, ctrl.dt, ctrl.max_events);
        const double bound = std::exp(s.level) * cap;
        if (bound < ctrl.rel_tol * s.integral) {
            return {s.integral, bound, segment, s.level, s.supremum};
        }
    }
}

/// S_x = int_0^{T_(-inf,-x)} e^{xi_s} ds, one draw. For a fixed stream S_x is
/// non-decreasing in x.
template <class Rng>
double sample_exp_functional_upto_passage(const LevyModel& model, double x, Rng& rng, double dt = 1e-3) {
    if (!(x > 0.0)) throw DomainError("passage level x must be > 0");
    WalkState s;
    walk(model, rng, s, -x, kInf, dt);
    return s.integral;
}

/// n independent draws; draw i uses RandomStream(seed, i, substream).
inline std::vector<ExpFunctionalSample> sample_exp_functionals(const LevyModel& model, std::uint64_t seed,
                                                               std::size_t n, const SamplerControl& ctrl = {},
                                                               unsigned workers = 0, std::uint32_t substream = 0) {
    resolve_remainder_cap(model, ctrl);
    return parallel_map(n, workers, [&](std::size_t i) {
        RandomStream rng(seed, i, substream);
        return sample_exp_functional(model, rng, ctrl);
    });
}

inline std::vector<double> values_of(const std::vector<ExpFunctionalSample>& samples) {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(s.value);
    return v;
}

inline std::vector<double> suprema_of(const std::vector<ExpFunctionalSample>& samples) {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(s.supremum);
    return v;
}

}  // namespace expfunc
