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
#include "expfunc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace expfunc {

/// int_0^delta e^{v + b s} ds. Uses the series limit when |b delta| < 1e-8.
inline double segment_exp_integral(double level, double slope, double delta) noexcept {
    const double x = slope * delta;
    if (std::abs(x) < 1e-8) return std::exp(level) * delta * (1.0 + 0.5 * x);
    return std::exp(level) * std::expm1(x) / slope;
}

/// One simulated trajectory on [0, horizon]:
///   xi_t = drift t + W_t + sum_{t_i <= t} J_i,
/// where W is the Gaussian part sampled at grid points (linear in between).
struct PathSkeleton {
    double drift = 0.0;
    double horizon = 0.0;
    std::vector<double> jump_times;
    std::vector<double> jump_sizes;
    /// Grid step (0 when there is no Gaussian part) and W at grid times
    /// k * dt, the final time being clamped to the horizon.
    double gaussian_dt = 0.0;
    std::vector<double> gaussian_values;

    bool has_gaussian() const noexcept { return !gaussian_values.empty(); }

    double grid_time(std::size_t k) const noexcept {
        return std::min(horizon, static_cast<double>(k) * gaussian_dt);
    }

    double gaussian_at(double t) const noexcept {
        if (!has_gaussian()) return 0.0;
        const std::size_t n = gaussian_values.size() - 1;
        if (t >= horizon) return gaussian_values[n];
        const auto k = std::min(n - 1, static_cast<std::size_t>(t / gaussian_dt));
        const double t0 = grid_time(k);
        const double t1 = grid_time(k + 1);
        const double w = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
        return gaussian_values[k] + w * (gaussian_values[k + 1] - gaussian_values[k]);
    }

    /// Sum of jumps with index < count.
    double jump_sum(std::size_t count) const noexcept {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) s += jump_sizes[i];
        return s;
    }

    /// xi_{t-}: jumps strictly before t.
    double value_left(double t) const noexcept {
        const auto n = static_cast<std::size_t>(std::lower_bound(jump_times.begin(), jump_times.end(), t) - jump_times.begin());
        return drift * t + gaussian_at(t) + jump_sum(n);
    }

    /// xi_t (right-continuous).
    double value_at(double t) const noexcept {
        const auto n = static_cast<std::size_t>(std::upper_bound(jump_times.begin(), jump_times.end(), t) - jump_times.begin());
        return drift * t + gaussian_at(t) + jump_sum(n);
    }
};

/// Poisson(lambda_J) jump times on [0, horizon] with i.i.d. sizes, plus the
/// Gaussian part on a grid of step dt when sigma^2 > 0. Deterministic in the
/// stream.
template <class Rng>
PathSkeleton sample_path(const LevyModel& model, Rng& rng, double horizon, double dt = 1e-3) {
    if (!(horizon > 0.0)) throw DomainError("sample_path needs horizon > 0");
    PathSkeleton path;
    path.drift = model.drift();
    path.horizon = horizon;
    if (model.has_jumps()) {
        const JumpLaw& law = *model.jump_law();
        double t = 0.0;
        for (;;) {
            t += rng.exponential() / model.jump_rate();
            if (t > horizon) break;
            path.jump_times.push_back(t);
            path.jump_sizes.push_back(law.sample(rng));
        }
    }
    if (model.has_gaussian()) {
        if (!(dt > 0.0)) throw DomainError("sample_path needs dt > 0 for a Gaussian part");
        const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-12));
        path.gaussian_dt = dt;
        path.gaussian_values.assign(1, 0.0);
        const double sigma = std::sqrt(model.gaussian_var());
        double w = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            const double len = path.grid_time(k + 1) - path.grid_time(k);
            w += sigma * std::sqrt(len) * rng.normal();
            path.gaussian_values.push_back(w);
        }
    }
    return path;
}

/// int_0^{t_end} e^{xi_s} ds along a skeleton. Exact piecewise closed form
/// between jumps when there is no Gaussian part; otherwise the trapezoid
/// rule on the union of grid and jump times (O(dt) bias).
inline double integrate_exp(const PathSkeleton& path, double t_end) {
    if (t_end > path.horizon * (1.0 + 1e-12)) throw DomainError("integrate_exp: t_end beyond horizon");
    t_end = std::min(t_end, path.horizon);
    double total = 0.0;
    double t = 0.0;
    double jumps = 0.0;
    std::size_t next_jump = 0;
    std::size_t next_grid = 1;
    const bool gaussian = path.has_gaussian();
    while (t < t_end) {
        double stop = t_end;
        if (next_jump < path.jump_times.size()) stop = std::min(stop, path.jump_times[next_jump]);
        if (gaussian) {
            while (next_grid < path.gaussian_values.size() && path.grid_time(next_grid) <= t) ++next_grid;
            if (next_grid < path.gaussian_values.size()) stop = std::min(stop, path.grid_time(next_grid));
        }
        const double delta = stop - t;
        if (delta > 0.0) {
            if (gaussian) {
                const double left = path.drift * t + path.gaussian_at(t) + jumps;
                const double right = path.drift * stop + path.gaussian_at(stop) + jumps;
                total += 0.5 * delta * (std::exp(left) + std::exp(right));
            } else {
                total += segment_exp_integral(path.drift * t + jumps, path.drift, delta);
            }
        }
        t = stop;
        while (next_jump < path.jump_times.size() && path.jump_times[next_jump] <= t && t < t_end) {
            jumps += path.jump_sizes[next_jump];
            ++next_jump;
        }
    }
    return total;
}

}  // namespace expfunc
