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
#include "expfunc/levy_model.hpp"
#include "expfunc/quadrature.hpp"

#include <cmath>
#include <algorithm>
#include <concepts>
#include <optional>
#include <vector>

namespace expfunc {

/// A distribution G on [support_lower, inf) described through its tail.
template <class D>
concept TailDistribution = requires(const D& d, double x) {
    { d.log_tail(x) } -> std::convertible_to<double>;
    { d.density(x) } -> std::convertible_to<std::optional<double>>;
    { d.support_lower() } -> std::convertible_to<double>;
    { d.atom() } -> std::convertible_to<std::optional<double>>;
    { d.exp_moment(x) } -> std::convertible_to<double>;
};

/// Points where the upward density of a law is not smooth.
inline std::vector<double> kinks_of(const JumpLaw& law) {
    if (const auto* p = std::get_if<ParetoJumps>(&law.up())) return {p->scale};
    return {0.0};
}

/// Upward component of a jump law, as a probability law on [0, inf).
class JumpLawTail {
public:
    explicit JumpLawTail(const JumpLaw& law) : law_(law.upward()) {
        if (!(law.up_prob() > 0.0)) throw DomainError("jump law has no upward component");
    }
    double log_tail(double x) const { return law_.log_upper_tail(x); }
    std::optional<double> density(double x) const { return law_.upper_density(x); }
    /// log of the density; stays finite where the density underflows.
    std::optional<double> log_density(double x) const {
        if (const auto* g = std::get_if<GammaExpJumps>(&law_.up()))
            return x < 0.0 ? -kInf : law_.log_upper_tail(x) + std::log(g->alpha + g->beta / (1.0 + x));
        const auto d = density(x);
        if (!d) return std::nullopt;
        return *d > 0.0 ? std::log(*d) : -kInf;
    }
    double support_lower() const noexcept { return 0.0; }
    std::vector<double> kinks() const { return kinks_of(law_); }
    std::optional<double> atom() const {
        if (const auto* p = std::get_if<PointMassJumps>(&law_.up())) return p->location;
        return std::nullopt;
    }
    /// M_G = int e^{gamma x} dG(x).
    double exp_moment(double gamma) const { return law_.exp_moment(gamma); }

private:
    JumpLaw law_;
};

/// G(x) = min{1, int_x^inf Pi(u, inf) du}: the integrated positive Levy
/// tail, the subexponentiality target of the MZ regime.
class IntegratedTail {
public:
    explicit IntegratedTail(const LevyModel& model) : model_(model) {
        if (!model_.has_jumps() || !model_.jump_law()->unbounded_upward())
            throw UnsupportedModel("integrated tail needs unbounded positive jumps");
        // find where the integrated tail crosses 1
        double lo = 0.0;
        if (raw(lo) < 1.0) {
            while (raw(lo) < 1.0) lo -= 1.0;
        } else {
            while (raw(lo + 1.0) >= 1.0) lo += 1.0;
        }
        double hi = lo + 1.0;
        for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++i) {
            const double mid = 0.5 * (lo + hi);
            (raw(mid) >= 1.0 ? lo : hi) = mid;
        }
        lower_ = hi;
    }

    /// int_x^inf Pi(u, inf) du without the cap at 1.
    double raw(double x) const { return integrated_levy_tail(model_, x); }

    double log_tail(double x) const { return x <= lower_ ? 0.0 : std::log(raw(x)); }
    std::optional<double> density(double x) const {
        if (x < lower_) return 0.0;
        return x > 0.0 ? model_.levy_tail(x) : model_.jump_rate() * model_.jump_law()->tail(x);
    }
    double support_lower() const noexcept { return lower_; }
    std::optional<double> atom() const { return std::nullopt; }
    std::vector<double> kinks() const {
        auto k = kinks_of(*model_.jump_law());
        k.push_back(0.0);
        k.push_back(lower_);
        return k;
    }
    double exp_moment(double gamma) const {
        if (gamma != 0.0) throw DomainError("integrated tail diagnostic is for gamma = 0");
        return 1.0;
    }

    /// int_x^inf Pi(u, inf) du. Closed form for exponential and Pareto upward
    /// laws; quadrature otherwise.
    static double integrated_levy_tail(const LevyModel& model, double x) {
        if (!model.has_jumps()) return 0.0;
        const JumpLaw& law = *model.jump_law();
        const double rate = model.jump_rate();
        double below_zero = 0.0;  // contribution of u in [x, 0)
        double from = x;
        if (x < 0.0) {
            below_zero = rate * integrate([&](double u) { return law.tail(u); }, x, 0.0);
            from = 0.0;
        }
        const double p = law.up_prob();
        double above = 0.0;
        if (const auto* e = std::get_if<ExponentialJumps>(&law.up())) {
            above = p * std::exp(-e->rate * from) / e->rate;
        } else if (const auto* par = std::get_if<ParetoJumps>(&law.up())) {
            if (par->index <= 1.0) return kInf;
            const double a = par->index;
            const double s = par->scale;
            above = from >= s ? p * s * std::pow(s / from, a - 1.0) / (a - 1.0)
                              : p * ((s - from) + s / (a - 1.0));
        } else if (const auto* pm = std::get_if<PointMassJumps>(&law.up())) {
            above = p * std::max(0.0, pm->location - from);
        } else {
            above = integrate([&](double u) { return law.upper_tail(u); }, from, kInf);
        }
        return below_zero + rate * above;
    }

private:
    LevyModel model_;
    double lower_ = 0.0;
};

/// Ratio curves of the S_gamma definition on a grid:
///   ratio1(x) = G(x - y) / G(x)   -> e^{gamma y}
///   ratio2(x) = G*2(x) / G(x)     -> 2 M_G
struct SAlphaDiagnostic {
    double gamma = 0.0;
    double y_probe = 0.0;
    std::vector<double> x_grid;
    std::vector<double> ratio_shift;
    std::vector<double> ratio_convolution;
    double target_shift = 1.0;
    double target_convolution = 2.0;
    /// Relative distance |ratio / target - 1| at the largest x.
    double final_shift_error = kInf;
    double final_convolution_error = kInf;
    /// Both curves finite, final errors below the tolerance, and the
    /// convolution error non-increasing over the upper half of the grid.
    bool converged = false;
};

/// Computes both ratio curves in log space, so grids may extend far past
/// the point where G underflows. A vanishing tail inside the grid (bounded
/// support, e.g. point masses) yields infinite ratios and non-convergence.
template <TailDistribution D>
SAlphaDiagnostic s_alpha_diagnostic(const D& dist, double gamma, const std::vector<double>& x_grid,
                                    double y_probe, double tolerance = 0.25) {
    if (!(gamma >= 0.0)) throw DomainError("s_alpha_diagnostic needs gamma >= 0");
    SAlphaDiagnostic out;
    out.gamma = gamma;
    out.y_probe = y_probe;
    out.x_grid = x_grid;
    out.target_shift = std::exp(gamma * y_probe);
    try {
        out.target_convolution = 2.0 * dist.exp_moment(gamma);
    } catch (const DomainError&) {
        // M_G infinite: G cannot be in S_gamma
        out.target_convolution = kInf;
    }
    const double lower = dist.support_lower();
    bool finite = true;
    for (const double x : x_grid) {
        const double lx = dist.log_tail(x);
        if (lx == -kInf) {
            out.ratio_shift.push_back(kInf);
            out.ratio_convolution.push_back(kInf);
            finite = false;
            continue;
        }
        out.ratio_shift.push_back(std::exp(dist.log_tail(x - y_probe) - lx));
        double conv = 0.0;
        if (const auto a = dist.atom()) {
            // single atom at a: G*2 tail is 1{x < 2a}
            conv = x < 2.0 * *a ? std::exp(-lx) : 0.0;
        } else {
            // P(X1 + X2 > x) = G(x - lower) + int_lower^{x - lower} G(x - u) g(u) du
            conv = std::exp(dist.log_tail(x - lower) - lx);
            const double upper = x - lower;
            if (upper > lower) {
                // split at kinks of the density and of the shifted tail
                std::vector<double> cuts{lower, upper, 0.5 * x};
                if constexpr (requires { dist.kinks(); }) {
                    for (const double k : dist.kinks()) {
                        cuts.push_back(k);
                        cuts.push_back(x - k);
                    }
                }
                std::sort(cuts.begin(), cuts.end());
                const auto integrand = [&](double u) {
                    if constexpr (requires { dist.log_density(u); }) {
                        const auto lg = dist.log_density(u);
                        if (lg) return *lg == -kInf ? 0.0 : std::exp(dist.log_tail(x - u) - lx + *lg);
                    }
                    const auto g = dist.density(u);
                    if (!g || *g == 0.0) return 0.0;
                    return std::exp(dist.log_tail(x - u) - lx) * *g;
                };
                for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                    const double a = std::max(cuts[i], lower);
                    const double b = std::min(cuts[i + 1], upper);
                    if (b > a) conv += integrate(integrand, a, b, 1e-9);
                }
            }
        }
        if (!std::isfinite(conv)) throw QuadratureError("convolution ratio overflowed");
        out.ratio_convolution.push_back(conv);
    }
    if (x_grid.empty() || !finite) return out;
    const auto rel = [](double v, double t) { return std::abs(v / t - 1.0); };
    out.final_shift_error = rel(out.ratio_shift.back(), out.target_shift);
    out.final_convolution_error = rel(out.ratio_convolution.back(), out.target_convolution);
    bool trending = true;
    for (std::size_t i = x_grid.size() / 2; i + 1 < x_grid.size(); ++i) {
        if (rel(out.ratio_convolution[i + 1], out.target_convolution) >
            rel(out.ratio_convolution[i], out.target_convolution) + 1e-9)
            trending = false;
    }
    out.converged = std::isfinite(out.target_convolution) && trending && out.final_shift_error < tolerance &&
                    out.final_convolution_error < tolerance;
    return out;
}

inline SAlphaDiagnostic s_alpha_diagnostic(const JumpLaw& law, double gamma, const std::vector<double>& x_grid,
                                           double y_probe, double tolerance = 0.25) {
    return s_alpha_diagnostic(JumpLawTail(law), gamma, x_grid, y_probe, tolerance);
}

}  // namespace expfunc
