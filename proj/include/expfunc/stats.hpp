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

// Small statistical toolkit: exact binomial intervals and Kolmogorov-Smirnov
// statistics.

#include "expfunc/errors.hpp"

#include <boost/math/distributions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace expfunc {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Clopper-Pearson (exact) interval for a binomial proportion at the given
/// confidence level.
inline Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double level = 0.99) {
    if (trials == 0) throw DomainError("clopper_pearson needs trials > 0");
    if (successes > trials) throw DomainError("clopper_pearson: successes > trials");
    const double tail = 0.5 * (1.0 - level);
    const auto k = static_cast<double>(successes);
    const auto n = static_cast<double>(trials);
    Interval ci;
    ci.lo = successes == 0 ? 0.0 : boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1.0), tail);
    ci.hi = successes == trials ? 1.0
                                : boost::math::quantile(boost::math::beta_distribution<>(k + 1.0, n - k), 1.0 - tail);
    return ci;
}

/// sqrt(-log(alpha / 2) / 2): asymptotic Kolmogorov critical coefficient.
inline double ks_critical_coefficient(double alpha) { return std::sqrt(-0.5 * std::log(0.5 * alpha)); }

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
inline double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// sup_x |F_n(x) - F(x)| for a sample against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
    if (sample.empty()) throw DomainError("ks_statistic needs a non-empty sample");
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Two-sample statistic sup_x |F_a(x) - F_b(x)|. Values closer than
/// `resolution` (relative) are treated as ties; samplers that are accurate
/// only to a relative tolerance pass that tolerance here.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b, double resolution = 0.0) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample needs non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        const double reach = x + resolution * std::abs(x);
        while (i < a.size() && a[i] <= reach) ++i;
        while (j < b.size() && b[j] <= reach) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// Critical value of the two-sample statistic at level alpha.
inline double ks_two_sample_threshold(std::size_t n, std::size_t m, double alpha = 0.01) {
    const auto dn = static_cast<double>(n);
    const auto dm = static_cast<double>(m);
    return ks_critical_coefficient(alpha) * std::sqrt((dn + dm) / (dn * dm));
}

}  // namespace expfunc
