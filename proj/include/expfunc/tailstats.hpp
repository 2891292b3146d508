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

// Empirical survival functions, ratio curves against asymptotes, and
// tail-index fits.

#include "expfunc/errors.hpp"
#include "expfunc/parallel.hpp"
#include "expfunc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace expfunc {

/// Smallest exceedance count at which a ratio is reported.
inline constexpr std::uint64_t kMinTailCount = 20;

struct TailComparison {
    std::size_t n = 0;
    std::string regime;
    std::vector<double> t_grid;
    std::vector<std::uint64_t> n_exceed;
    std::vector<double> p_hat;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
    /// Empty until compare() fills them.
    std::vector<double> asymptote;
    std::vector<double> ratio;
    std::vector<double> ratio_lo;
    std::vector<double> ratio_hi;
    /// n_exceed >= kMinTailCount.
    std::vector<bool> reported;

    std::size_t size() const noexcept { return t_grid.size(); }
    bool has_asymptote() const noexcept { return asymptote.size() == t_grid.size() && !t_grid.empty(); }
};

/// Exact counting survival estimates p-hat(t) = #{X > t} / N with
/// Clopper-Pearson bounds.
inline TailComparison empirical_tail(std::vector<double> samples, std::vector<double> t_grid, double level = 0.99) {
    if (samples.empty()) throw DomainError("empirical_tail needs samples");
    for (const double x : samples)
        if (std::isnan(x)) throw DomainError("empirical_tail: NaN sample");
    std::sort(samples.begin(), samples.end());
    std::sort(t_grid.begin(), t_grid.end());
    TailComparison out;
    out.n = samples.size();
    out.t_grid = std::move(t_grid);
    for (const double t : out.t_grid) {
        const auto k = static_cast<std::uint64_t>(samples.end() - std::upper_bound(samples.begin(), samples.end(), t));
        const Interval ci = clopper_pearson(k, out.n, level);
        out.n_exceed.push_back(k);
        out.p_hat.push_back(static_cast<double>(k) / static_cast<double>(out.n));
        out.ci_lo.push_back(ci.lo);
        out.ci_hi.push_back(ci.hi);
        out.reported.push_back(k >= kMinTailCount);
    }
    return out;
}

/// Fills a(t), r(t) = p-hat / a and the CI of r from the CI of p-hat.
inline TailComparison& attach_asymptote(TailComparison& tc, const std::function<double(double)>& asymptote,
                                        std::string regime = {}) {
    tc.regime = std::move(regime);
    tc.asymptote.clear();
    tc.ratio.clear();
    tc.ratio_lo.clear();
    tc.ratio_hi.clear();
    for (std::size_t i = 0; i < tc.size(); ++i) {
        const double a = asymptote(tc.t_grid[i]);
        if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("asymptote must be positive and finite on the grid");
        tc.asymptote.push_back(a);
        tc.ratio.push_back(tc.p_hat[i] / a);
        tc.ratio_lo.push_back(tc.ci_lo[i] / a);
        tc.ratio_hi.push_back(tc.ci_hi[i] / a);
    }
    return tc;
}

inline TailComparison compare(std::vector<double> samples, const std::function<double(double)>& asymptote,
                              std::vector<double> t_grid, std::string regime = {}, double level = 0.99) {
    TailComparison tc = empirical_tail(std::move(samples), std::move(t_grid), level);
    attach_asymptote(tc, asymptote, std::move(regime));
    return tc;
}

/// Grid at the empirical (1 - q) quantiles, q in `levels`; levels whose
/// expected count falls below kMinTailCount are dropped.
inline std::vector<double> quantile_grid(std::vector<double> samples, const std::vector<double>& levels) {
    if (samples.empty()) throw DomainError("quantile_grid needs samples");
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    std::vector<double> grid;
    for (const double q : levels) {
        if (!(q > 0.0 && q < 1.0) || q * n < static_cast<double>(kMinTailCount)) continue;
        const auto idx = static_cast<std::size_t>(std::floor((1.0 - q) * n));
        grid.push_back(samples[std::min(idx, samples.size() - 1)]);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// Half-decade tail levels 10^{-1}, 10^{-1.5}, ..., 10^{-max_exp}.
inline std::vector<double> half_decade_levels(double min_exp = 1.0, double max_exp = 4.0) {
    std::vector<double> levels;
    for (double e = min_exp; e <= max_exp + 1e-9; e += 0.5) levels.push_back(std::pow(10.0, -e));
    return levels;
}

/// |r_i - target| is non-increasing along the sequence.
inline bool trends_toward(const std::vector<double>& r, double target) {
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
        if (std::abs(r[i + 1] - target) > std::abs(r[i] - target)) return false;
    return r.size() >= 2;
}

/// Indices of the reported grid points, in grid order.
inline std::vector<std::size_t> reported_indices(const TailComparison& tc, std::uint64_t min_count = kMinTailCount) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < tc.size(); ++i)
        if (tc.n_exceed[i] >= min_count) idx.push_back(i);
    return idx;
}

namespace detail {

inline std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

inline std::string csv_number17(double v) {
    if (!std::isfinite(v)) return csv_number(v);
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace detail

/// CSV columns: t, n_exceed, p_hat, ci_lo, ci_hi, asymptote, ratio,
/// ratio_lo, ratio_hi. Ratio columns are empty where the minimum-count rule
/// fails or no asymptote is attached. `header` lines are written first,
/// each prefixed with '#'.
inline void write_csv(std::ostream& os, const TailComparison& tc, const std::vector<std::string>& header = {}) {
    for (const auto& h : header) os << "# " << h << '\n';
    if (!tc.regime.empty()) os << "# regime " << tc.regime << '\n';
    os << "# n " << tc.n << '\n';
    os << "t,n_exceed,p_hat,ci_lo,ci_hi,asymptote,ratio,ratio_lo,ratio_hi\n";
    using detail::csv_number;
    for (std::size_t i = 0; i < tc.size(); ++i) {
        os << csv_number(tc.t_grid[i]) << ',' << tc.n_exceed[i] << ',' << csv_number(tc.p_hat[i]) << ','
           << csv_number(tc.ci_lo[i]) << ',' << csv_number(tc.ci_hi[i]) << ',';
        if (tc.has_asymptote()) {
            os << csv_number(tc.asymptote[i]) << ',';
            if (tc.reported[i])
                os << csv_number(tc.ratio[i]) << ',' << csv_number(tc.ratio_lo[i]) << ',' << csv_number(tc.ratio_hi[i]);
            else
                os << ",,";
        } else {
            os << ",,,";
        }
        os << '\n';
    }
}

enum class TailIndexMethod { hill, loglog_ols };

struct TailIndexFit {
    TailIndexMethod method = TailIndexMethod::hill;
    /// k for hill; number of regression points for loglog_ols.
    std::size_t k = 0;
    double estimate = 0.0;
    double standard_error = 0.0;
    /// loglog_ols: the fitted window [lo, hi].
    double window_lo = 0.0;
    double window_hi = 0.0;
};

inline std::size_t default_hill_k(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(n)));
}

/// Hill estimator of the index alpha of P(X > x) ~ x^{-alpha} from the top
/// k order statistics: 1 / alpha-hat = (1/k) sum log(X_(i) / X_(k+1)).
/// Standard error alpha-hat / sqrt(k).
inline TailIndexFit hill(std::vector<double> samples, std::size_t k = 0) {
    const std::size_t n = samples.size();
    if (n < 1000) throw DomainError("hill needs at least 1000 samples");
    if (k == 0) k = default_hill_k(n);
    if (k >= n) throw DomainError("hill needs k < sample size");
    std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k), samples.end(),
                     std::greater<>());
    const double threshold = samples[k];
    if (!(threshold > 0.0)) throw DegenerateSample("hill needs a positive threshold order statistic");
    std::vector<double> logs(k);
    for (std::size_t i = 0; i < k; ++i) logs[i] = std::log(samples[i] / threshold);
    const double mean_log = pairwise_sum(logs) / static_cast<double>(k);
    if (!(mean_log > 0.0)) throw DegenerateSample("top-k values are all equal");
    if (!std::isfinite(mean_log)) throw DegenerateSample("non-finite values among the top k");
    TailIndexFit fit;
    fit.method = TailIndexMethod::hill;
    fit.k = k;
    fit.estimate = 1.0 / mean_log;
    fit.standard_error = fit.estimate / std::sqrt(static_cast<double>(k));
    return fit;
}

/// OLS slope of log p-hat(t) against log t over one decade of t, on a
/// log-spaced grid of `points`; the index estimate is minus the slope.
/// Without an explicit window the decade ends at the order statistic with
/// kMinTailCount exceedances.
inline TailIndexFit loglog_ols(std::vector<double> samples, double window_lo = 0.0, double window_hi = 0.0,
                               std::size_t points = 21) {
    const std::size_t n = samples.size();
    if (n < 10 * kMinTailCount) throw DomainError("loglog_ols needs more samples");
    std::sort(samples.begin(), samples.end());
    if (window_hi <= 0.0) {
        window_hi = samples[n - kMinTailCount];
        window_lo = window_hi / 10.0;
    }
    if (!(window_lo > 0.0 && window_hi > window_lo)) throw DomainError("loglog_ols needs 0 < lo < hi");
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = window_lo * std::pow(window_hi / window_lo, static_cast<double>(i) / (points - 1.0));
        const auto k = static_cast<std::size_t>(samples.end() - std::upper_bound(samples.begin(), samples.end(), t));
        if (k == 0) continue;
        lx.push_back(std::log(t));
        ly.push_back(std::log(static_cast<double>(k) / static_cast<double>(n)));
    }
    if (lx.size() < 3) throw DegenerateSample("loglog_ols: fewer than 3 populated grid points");
    const auto m = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DegenerateSample("loglog_ols: degenerate window");
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - my - slope * (lx[i] - mx);
        rss += r * r;
    }
    TailIndexFit fit;
    fit.method = TailIndexMethod::loglog_ols;
    fit.k = lx.size();
    fit.estimate = -slope;
    fit.standard_error = lx.size() > 2 ? std::sqrt(rss / (m - 2.0) / sxx) : 0.0;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    return fit;
}

inline TailIndexFit tail_index_fit(const std::vector<double>& samples, TailIndexMethod method, std::size_t k = 0) {
    return method == TailIndexMethod::hill ? hill(samples, k) : loglog_ols(samples);
}

/// Hill estimates across k. `stable` is false when the estimates spread by
/// more than `spread` relative to their median.
struct HillSweep {
    std::vector<TailIndexFit> fits;
    double relative_spread = 0.0;
    bool stable = false;
};

inline HillSweep hill_sweep(const std::vector<double>& samples,
                            const std::vector<double>& fractions = {0.005, 0.01, 0.02, 0.05, 0.1},
                            double spread = 0.2) {
    HillSweep out;
    std::vector<double> est;
    for (const double f : fractions) {
        const auto k = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(f * static_cast<double>(samples.size()))));
        out.fits.push_back(hill(samples, k));
        est.push_back(out.fits.back().estimate);
    }
    if (est.empty()) return out;
    std::vector<double> sorted = est;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    out.relative_spread = (sorted.back() - sorted.front()) / median;
    out.stable = out.relative_spread <= spread;
    return out;
}

}  // namespace expfunc
