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

// Downward-ladder decomposition of spectrally positive compound Poisson
// paths with negative drift b = -d.
//
// Local time at the infimum is normalized as occupation time there:
// L_t = int_0^t 1{xi_u = i_u} du. Hence the drift of Y is a = 1, the
// downward ladder height is h-hat_u = d u, phi_{h-hat}(lambda) = d lambda,
// and excursions away from the infimum start at rate lambda_J per unit local
// time, each at a jump taken while sitting at the infimum.

#include "expfunc/errors.hpp"
#include "expfunc/exp_functional.hpp"
#include "expfunc/levy_model.hpp"
#include "expfunc/parallel.hpp"
#include "expfunc/path.hpp"
#include "expfunc/rng.hpp"
#include "expfunc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace expfunc {

struct ExcursionRecord {
    /// Local time u at which the excursion occurs (Y jumps at u).
    double local_time = 0.0;
    double start_time = 0.0;
    /// Running infimum when the excursion starts.
    double start_level = 0.0;
    double duration = 0.0;
    /// int_0^zeta e^{epsilon(s)} ds, epsilon measured from the start level.
    double area = 0.0;
    /// False when the observation horizon cuts the excursion short.
    bool complete = true;
};

struct LadderDecomposition {
    double infimum_rate = 0.0;
    /// Per stretch at the infimum: local time (= Lebesgue time) spent there.
    std::vector<double> ladder_time_increments;
    /// h-hat increments, d times the stretch length.
    std::vector<double> ladder_height_increments;
    /// Drift part of Y per stretch (a = 1).
    std::vector<double> y_drift_increments;
    std::vector<ExcursionRecord> excursions;

    double total_local_time() const { return pairwise_sum(ladder_time_increments); }

    double total_excursion_time() const {
        double s = 0.0;
        for (const auto& e : excursions) s += e.duration;
        return s;
    }

    bool has_censored_excursion() const noexcept { return !excursions.empty() && !excursions.back().complete; }

    /// Right-continuous inverse local time, u + sum of durations of the
    /// excursions with local_time <= u.
    double inverse_local_time(double u) const {
        double t = u;
        for (const auto& e : excursions) {
            if (e.local_time > u) break;
            t += e.duration;
        }
        return t;
    }

    /// int_0^u e^{-h-hat_{v-}} dY_v.
    double y_integral(double u) const {
        const double d = infimum_rate;
        double total = 0.0;
        double start = 0.0;
        for (std::size_t k = 0; k < y_drift_increments.size() && start < u; ++k) {
            const double len = std::min(ladder_time_increments[k], u - start);
            // a = 1: dY = dv on the stretch, h-hat_v = d v
            total += std::exp(-d * start) * (-std::expm1(-d * len)) / d;
            start += ladder_time_increments[k];
        }
        for (const auto& e : excursions) {
            if (e.local_time > u) break;
            total += std::exp(-d * e.local_time) * e.area;
        }
        return total;
    }
};

inline void require_spectrally_positive(const LevyModel& model, const char* op) {
    if (!model.is_spectrally_positive_cp())
        throw UnsupportedModel(std::string(op) + " needs a spectrally positive compound Poisson model with b < 0");
}

/// Single pass over a skeleton, splitting time into stretches at the running
/// infimum and excursions above it. Excursion areas are exact.
inline LadderDecomposition extract_ladder(const PathSkeleton& path) {
    if (path.has_gaussian()) throw UnsupportedModel("extract_ladder: Gaussian part present");
    if (!(path.drift < 0.0)) throw UnsupportedModel("extract_ladder: drift must be negative");
    for (const double j : path.jump_sizes)
        if (!(j > 0.0)) throw UnsupportedModel("extract_ladder: negative jumps present");

    const double b = path.drift;
    const double d = -b;
    LadderDecomposition out;
    out.infimum_rate = d;
    double local = 0.0;
    double t = 0.0;            // current time
    double stretch_start = 0.0;
    bool at_infimum = true;
    double excess = 0.0;       // xi - infimum while in an excursion
    ExcursionRecord current;
    double jumps = 0.0;

    const auto close_stretch = [&](double until) {
        const double len = until - stretch_start;
        out.ladder_time_increments.push_back(len);
        out.ladder_height_increments.push_back(d * len);
        out.y_drift_increments.push_back(len);
        local += len;
    };

    for (std::size_t k = 0; k < path.jump_times.size(); ++k) {
        const double tj = path.jump_times[k];
        if (!at_infimum) {
            const double back = t + excess / d;
            if (back <= tj) {
                current.area += segment_exp_integral(excess, b, excess / d);
                current.duration = back - current.start_time;
                out.excursions.push_back(current);
                at_infimum = true;
                stretch_start = back;
                t = back;
            } else {
                current.area += segment_exp_integral(excess, b, tj - t);
                excess += b * (tj - t) + path.jump_sizes[k];
                t = tj;
                jumps += path.jump_sizes[k];
                continue;
            }
        }
        // jump taken at the infimum starts an excursion
        close_stretch(tj);
        current = ExcursionRecord{};
        current.local_time = local;
        current.start_time = tj;
        current.start_level = b * tj + jumps;  // same arithmetic as PathSkeleton::value_left
        excess = path.jump_sizes[k];
        at_infimum = false;
        t = tj;
        jumps += path.jump_sizes[k];
    }

    const double horizon = path.horizon;
    if (!at_infimum) {
        const double back = t + excess / d;
        if (back <= horizon) {
            current.area += segment_exp_integral(excess, b, excess / d);
            current.duration = back - current.start_time;
            out.excursions.push_back(current);
            at_infimum = true;
            stretch_start = back;
        } else {
            current.area += segment_exp_integral(excess, b, horizon - t);
            current.duration = horizon - current.start_time;
            current.complete = false;
            out.excursions.push_back(current);
            return out;
        }
    }
    close_stretch(horizon);
    return out;
}

/// Max over u of |int_0^{L^{-1}_u} e^{xi_s} ds - int_0^u e^{-h-hat_{v-}} dY_v|.
/// The left side integrates the skeleton directly; the right side uses only
/// the decomposition. Grid points past the observed local time (or whose
/// inverse falls inside a censored excursion) are skipped.
inline double verify_pathwise_identity(const PathSkeleton& path, const LadderDecomposition& decomp,
                                       const std::vector<double>& u_grid) {
    const double total = decomp.total_local_time();
    double worst = 0.0;
    for (const double u : u_grid) {
        if (u < 0.0 || u > total) continue;
        if (decomp.has_censored_excursion() && u >= decomp.excursions.back().local_time) continue;
        const double t = std::min(decomp.inverse_local_time(u), path.horizon);
        const double lhs = integrate_exp(path, t);
        const double rhs = decomp.y_integral(u);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

struct ExcursionDraw {
    double area = 0.0;
    double duration = 0.0;
};

/// One excursion under the normalized excursion law: start at a fresh jump
/// J, follow xi until first passage to <= 0, record the exact area.
template <class Rng>
ExcursionDraw sample_excursion(const LevyModel& model, Rng& rng, std::uint64_t max_segments = 1'000'000) {
    require_spectrally_positive(model, "sample_excursion");
    if (!model.has_jumps()) throw UnsupportedModel("sample_excursion: model has no jumps");
    WalkState s;
    s.level = model.jump_law()->sample(rng);
    s.supremum = s.level;
    try {
        walk(model, rng, s, 0.0, kInf, 0.0, max_segments);
    } catch (const NonTerminating&) {
        throw NonTerminating("excursion exceeded the duration cap of " + std::to_string(max_segments) + " segments");
    }
    return {s.integral, s.time};
}

/// Empirical Pi_Y tail: Pi_Y(y) = n(area > y) estimated as
/// count(area > y) / local time, with local time = n_excursions / lambda_J.
struct ExcursionTailEstimate {
    std::vector<double> y_grid;
    std::vector<std::uint64_t> counts;
    std::uint64_t n_excursions = 0;
    double jump_rate = 0.0;
    double local_time = 0.0;
    std::vector<double> estimate;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
    std::vector<double> areas;  // sorted
};

inline ExcursionTailEstimate tail_from_areas(std::vector<double> areas, double jump_rate,
                                             const std::vector<double>& y_grid, double level = 0.99) {
    if (areas.empty()) throw DomainError("no excursions");
    std::sort(areas.begin(), areas.end());
    ExcursionTailEstimate out;
    out.y_grid = y_grid;
    out.n_excursions = areas.size();
    out.jump_rate = jump_rate;
    out.local_time = static_cast<double>(areas.size()) / jump_rate;
    for (const double y : y_grid) {
        const auto count = static_cast<std::uint64_t>(areas.end() - std::upper_bound(areas.begin(), areas.end(), y));
        const Interval ci = clopper_pearson(count, out.n_excursions, level);
        out.counts.push_back(count);
        out.estimate.push_back(static_cast<double>(count) / out.local_time);
        out.ci_lo.push_back(ci.lo * jump_rate);
        out.ci_hi.push_back(ci.hi * jump_rate);
    }
    out.areas = std::move(areas);
    return out;
}

inline std::vector<double> sample_excursion_areas(const LevyModel& model, std::uint64_t seed, std::size_t n,
                                                  unsigned workers = 0, std::uint32_t substream = 0) {
    require_spectrally_positive(model, "sample_excursion_areas");
    return parallel_map(n, workers, [&](std::size_t i) {
        RandomStream rng(seed, i, substream);
        return sample_excursion(model, rng).area;
    });
}

inline ExcursionTailEstimate estimate_excursion_tail(const LevyModel& model, std::uint64_t seed,
                                                     std::size_t n_excursions, const std::vector<double>& y_grid,
                                                     unsigned workers = 0) {
    return tail_from_areas(sample_excursion_areas(model, seed, n_excursions, workers), model.jump_rate(), y_grid);
}

/// V_h tail from the all-time supremum: P(sup xi in dx) = phi_h(0) V_h(dx),
/// with phi_h(0) = mu / d under the occupation-time normalization.
struct RenewalTailEstimate {
    std::vector<double> x_grid;
    std::vector<std::uint64_t> counts;
    std::uint64_t n_paths = 0;
    double phi_h0 = 0.0;
    std::vector<double> sup_tail;  // P-hat(sup > x)
    std::vector<double> renewal_tail;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
};

inline double upward_ladder_killing_rate(const LevyModel& model) {
    require_spectrally_positive(model, "upward_ladder_killing_rate");
    return -model.mean_increment() / model.infimum_rate();
}

inline RenewalTailEstimate renewal_tail_from_suprema(const LevyModel& model, std::vector<double> suprema,
                                                     const std::vector<double>& x_grid, double level = 0.99) {
    RenewalTailEstimate out;
    out.x_grid = x_grid;
    out.n_paths = suprema.size();
    out.phi_h0 = upward_ladder_killing_rate(model);
    std::sort(suprema.begin(), suprema.end());
    for (const double x : x_grid) {
        const auto count =
            static_cast<std::uint64_t>(suprema.end() - std::upper_bound(suprema.begin(), suprema.end(), x));
        const double p = static_cast<double>(count) / static_cast<double>(out.n_paths);
        const Interval ci = clopper_pearson(count, out.n_paths, level);
        out.counts.push_back(count);
        out.sup_tail.push_back(p);
        out.renewal_tail.push_back(p / out.phi_h0);
        out.ci_lo.push_back(ci.lo / out.phi_h0);
        out.ci_hi.push_back(ci.hi / out.phi_h0);
    }
    return out;
}

inline RenewalTailEstimate estimate_renewal_tail(const LevyModel& model, std::uint64_t seed, std::size_t n_paths,
                                                 const std::vector<double>& x_grid, const SamplerControl& ctrl = {},
                                                 unsigned workers = 0) {
    require_spectrally_positive(model, "estimate_renewal_tail");
    return renewal_tail_from_suprema(model, suprema_of(sample_exp_functionals(model, seed, n_paths, ctrl, workers)),
                                     x_grid);
}

/// (Q, M) of the random recurrence I = Q + M I~ at local time t_local:
/// Q = int_0^{L^{-1}_t} e^{xi_s} ds, M = e^{xi_{L^{-1}_t}} = e^{-h-hat_t}.
struct RecurrencePair {
    double q = 0.0;
    double m = 1.0;
};

template <class Rng>
RecurrencePair sample_recurrence_pair(const LevyModel& model, Rng& rng, double t_local = 1.0) {
    require_spectrally_positive(model, "sample_recurrence_pair");
    if (!(t_local > 0.0)) throw DomainError("t_local must be > 0");
    const double b = model.drift();
    const double rate = model.jump_rate();
    WalkState s;
    double occupied = 0.0;
    for (;;) {
        const double gap = rate > 0.0 ? rng.exponential() / rate : kInf;
        const double left = t_local - occupied;
        if (gap >= left) {
            s.integral += segment_exp_integral(s.level, b, left);
            s.level += b * left;
            return {s.integral, std::exp(s.level)};
        }
        s.integral += segment_exp_integral(s.level, b, gap);
        s.level += b * gap;
        occupied += gap;
        const double infimum = s.level;
        s.level += model.jump_law()->sample(rng);
        walk(model, rng, s, infimum, kInf, 0.0, 1'000'000);
    }
}

}  // namespace expfunc
