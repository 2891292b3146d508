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
#include "expfunc/quadrature.hpp"
#include "expfunc/rng.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace expfunc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Generalized exponential integral E_p(c) = int_1^inf e^{-c u} u^{-p} du
/// for real p > 1 and c > 0, via E_p(c) = c^{p-1} Gamma(1-p, c) and the
/// downward recurrence Gamma(s, c) = (Gamma(s+1, c) - c^s e^{-c}) / s.
inline double generalized_expint(double p, double c) {
    if (!(p > 1.0) || !(c > 0.0)) throw DomainError("generalized_expint needs p > 1, c > 0");
    const double s = 1.0 - p;
    const double steps = std::ceil(-s);
    double top = s + steps;  // in [0, 1)
    double upper = top == 0.0 ? boost::math::expint(1, c) : boost::math::tgamma(top, c);
    for (double a = top - 1.0; a >= s - 1e-12; a -= 1.0) {
        upper = (upper - std::pow(c, a) * std::exp(-c)) / a;
    }
    return std::pow(c, p - 1.0) * upper;
}

/// Exp(rate) jumps: tail e^{-rate x}.
struct ExponentialJumps {
    double rate;
};

/// Classical Pareto: tail (scale / x)^index for x >= scale.
struct ParetoJumps {
    double index;
    double scale;
};

/// Tail e^{-alpha x} (1 + x)^{-beta} on x >= 0. With beta > 1 the law lies in
/// S_alpha and E e^{alpha J} = 1 + alpha / (beta - 1) is finite.
struct GammaExpJumps {
    double alpha;
    double beta;
};

struct PointMassJumps {
    double location;
};

/// Half-line of exponential moments {lambda : E e^{lambda J} < inf}, given by
/// its endpoints and whether each is attained.
struct MomentDomain {
    double lower = -kInf;
    bool lower_closed = false;
    double upper = kInf;
    bool upper_closed = false;

    bool contains(double lambda) const noexcept {
        const bool above = lambda > lower || (lower_closed && lambda == lower);
        const bool below = lambda < upper || (upper_closed && lambda == upper);
        return above && below;
    }
};

/// Monotone inverse of a tail function on a log-spaced grid in x.
///
/// Stores log F(x_i) on a grid (4096 points to start) and inverts by
/// linear interpolation in (log tail, x). The grid doubles until the
/// sup-error |F(inverse(u)) - u| over a probe set is below 1e-4.
class InverseTailTable {
public:
    template <class LogTail>
    InverseTailTable(LogTail&& log_tail, double x_min, double x_max, std::size_t points = 4096,
                     double target_error = 1e-4) {
        for (;;) {
            build(log_tail, x_min, x_max, points);
            sup_error_ = measure(log_tail);
            if (sup_error_ < target_error || points > (std::size_t{1} << 22)) break;
            points *= 2;
        }
    }

    /// x with tail(x) ~= u, for u in (0, 1]. Beyond the last grid point the
    /// last x is returned.
    double inverse(double u) const noexcept {
        const double lu = std::log(u);
        if (lu >= log_tail_.front()) return x_.front();
        if (lu <= log_tail_.back()) return x_.back();
        // log_tail_ is non-increasing
        const auto it = std::lower_bound(log_tail_.begin(), log_tail_.end(), lu, std::greater<>());
        const std::size_t hi = static_cast<std::size_t>(it - log_tail_.begin());
        const std::size_t lo = hi - 1;
        const double span = log_tail_[lo] - log_tail_[hi];
        if (span <= 0.0) return x_[lo];
        const double w = (log_tail_[lo] - lu) / span;
        return x_[lo] + w * (x_[hi] - x_[lo]);
    }

    std::size_t size() const noexcept { return x_.size(); }
    double sup_error() const noexcept { return sup_error_; }

private:
    template <class LogTail>
    void build(LogTail& log_tail, double x_min, double x_max, std::size_t points) {
        x_.assign(1, 0.0);
        log_tail_.assign(1, log_tail(0.0));
        const double ratio = std::log(x_max / x_min);
        for (std::size_t i = 0; i < points; ++i) {
            const double x = x_min * std::exp(ratio * static_cast<double>(i) / static_cast<double>(points - 1));
            x_.push_back(x);
            log_tail_.push_back(log_tail(x));
        }
    }

    template <class LogTail>
    double measure(LogTail& log_tail) const {
        double worst = 0.0;
        const auto probe = [&](double u) {
            worst = std::max(worst, std::abs(std::exp(log_tail(inverse(u))) - u));
        };
        for (int i = 1; i < 10000; ++i) probe(i / 10000.0);
        for (int i = 1; i <= 200; ++i) probe(std::pow(10.0, -4.0 - 8.0 * i / 200.0));
        return worst;
    }

    std::vector<double> x_;
    std::vector<double> log_tail_;
    double sup_error_ = 0.0;
};

/// Law of one jump. Positive laws (exponential, pareto, gamma_exp,
/// point_mass) are the building blocks; two_sided mixes a positive law for
/// upward jumps with the negative of another positive law for downward jumps.
class JumpLaw {
public:
    using Positive = std::variant<ExponentialJumps, ParetoJumps, GammaExpJumps, PointMassJumps>;

    static JumpLaw exponential(double rate) {
        if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("exponential rate must be > 0");
        return JumpLaw(ExponentialJumps{rate});
    }
    static JumpLaw pareto(double index, double scale) {
        if (!(index > 0.0) || !(scale > 0.0)) throw DomainError("pareto index and scale must be > 0");
        return JumpLaw(ParetoJumps{index, scale});
    }
    static JumpLaw gamma_exp(double alpha, double beta) {
        if (!(alpha > 0.0)) throw DomainError("gamma_exp alpha must be > 0");
        if (!(beta > 1.0)) throw DomainError("gamma_exp beta must be > 1");
        return JumpLaw(GammaExpJumps{alpha, beta});
    }
    static JumpLaw point_mass(double location) {
        if (!(location > 0.0) || !std::isfinite(location)) throw DomainError("point_mass location must be > 0");
        return JumpLaw(PointMassJumps{location});
    }
    /// Up-jump from `up` with probability up_prob, else minus a draw of `down`.
    static JumpLaw two_sided(double up_prob, const JumpLaw& up, const JumpLaw& down) {
        if (!(up_prob >= 0.0 && up_prob <= 1.0)) throw DomainError("two_sided up_prob must lie in [0, 1]");
        if (up.is_two_sided() || down.is_two_sided()) throw DomainError("two_sided components must be one-sided");
        JumpLaw law = up;
        law.down_ = down.up_;
        law.down_table_ = down.up_table_;
        law.up_prob_ = up_prob;
        return law;
    }

    bool is_two_sided() const noexcept { return down_.has_value(); }

    /// The upward component alone, as a one-sided law.
    JumpLaw upward() const {
        JumpLaw law = *this;
        law.down_.reset();
        law.down_table_.reset();
        law.up_prob_ = 1.0;
        return law;
    }
    double up_prob() const noexcept { return up_prob_; }
    const Positive& up() const noexcept { return up_; }
    const std::optional<Positive>& down() const noexcept { return down_; }
    std::string kind() const { return is_two_sided() ? "two_sided" : kind_of(up_); }

    /// P(J > x) restricted to upward jumps, for x >= 0.
    double upper_tail(double x) const { return up_prob_ * tail_of(up_, x); }
    double log_upper_tail(double x) const {
        return up_prob_ == 0.0 ? -kInf : std::log(up_prob_) + log_tail_of(up_, x);
    }
    /// Density of the upward part on (0, inf); nullopt for atoms.
    std::optional<double> upper_density(double x) const {
        const auto d = density_of(up_, x);
        if (!d) return std::nullopt;
        return up_prob_ * *d;
    }

    /// P(J > x) for any real x.
    double tail(double x) const {
        if (x >= 0.0) return upper_tail(x);
        if (!down_) return 1.0;
        // P(-D > x) = P(D < -x); atoms of D at -x are excluded
        return up_prob_ + (1.0 - up_prob_) * (1.0 - tail_of(*down_, -x) - atom_at(*down_, -x));
    }

    MomentDomain domain() const noexcept {
        MomentDomain d;
        if (up_prob_ > 0.0) upper_bound(up_, d.upper, d.upper_closed);
        if (down_ && up_prob_ < 1.0) {
            double u = kInf;
            bool closed = false;
            upper_bound(*down_, u, closed);
            d.lower = -u;
            d.lower_closed = closed;
        }
        return d;
    }

    /// E e^{lambda J}. Closed form where one exists, else quadrature.
    double exp_moment(double lambda) const {
        if (!domain().contains(lambda)) throw DomainError("lambda outside the exponential-moment domain");
        double m = up_prob_ > 0.0 ? up_prob_ * exp_moment_of(up_, lambda) : 0.0;
        if (down_ && up_prob_ < 1.0) m += (1.0 - up_prob_) * exp_moment_of(*down_, -lambda);
        return m;
    }

    /// E[J e^{lambda J}] when a closed form exists.
    std::optional<double> exp_moment_derivative(double lambda) const {
        if (!domain().contains(lambda)) throw DomainError("lambda outside the exponential-moment domain");
        auto du = exp_moment_derivative_of(up_, lambda);
        if (!du) return std::nullopt;
        double m = up_prob_ * *du;
        if (down_ && up_prob_ < 1.0) {
            auto dd = exp_moment_derivative_of(*down_, -lambda);
            if (!dd) return std::nullopt;
            m -= (1.0 - up_prob_) * *dd;
        }
        return m;
    }

    /// E J. Throws MomentError when E|J| is infinite.
    double mean() const {
        double m = up_prob_ > 0.0 ? up_prob_ * mean_of(up_) : 0.0;
        if (down_ && up_prob_ < 1.0) m -= (1.0 - up_prob_) * mean_of(*down_);
        return m;
    }

    /// True when the state space of a pure-jump walk with this law is a lattice.
    bool is_lattice() const noexcept {
        const bool up_atom = std::holds_alternative<PointMassJumps>(up_);
        if (!down_) return up_atom;
        return up_atom && std::holds_alternative<PointMassJumps>(*down_);
    }

    /// Pi(x, inf) > 0 for every x > 0.
    bool unbounded_upward() const noexcept {
        return up_prob_ > 0.0 && !std::holds_alternative<PointMassJumps>(up_);
    }

    bool has_downward_jumps() const noexcept { return down_.has_value() && up_prob_ < 1.0; }

    template <class Rng>
    double sample(Rng& rng) const {
        if (down_) {
            if (rng.uniform() >= up_prob_) return -inverse_tail_of(*down_, down_table_.get(), rng.uniform());
        }
        return inverse_tail_of(up_, up_table_.get(), rng.uniform());
    }

    /// x with P(J_up > x) = u for the upward component, u in (0, 1).
    double upper_inverse_tail(double u) const { return inverse_tail_of(up_, up_table_.get(), u); }

    /// Cached inverse-tail table of the upward component (gamma_exp only).
    const InverseTailTable* upper_table() const noexcept { return up_table_.get(); }

private:
    explicit JumpLaw(Positive up) : up_(up) { up_table_ = make_table(up_); }

    static std::shared_ptr<const InverseTailTable> make_table(const Positive& p) {
        if (const auto* g = std::get_if<GammaExpJumps>(&p)) {
            const auto lt = [g](double x) { return log_tail_of(*g, x); };
            // upper grid end where the tail reaches ~1e-16
            double hi = 1.0;
            while (lt(hi) > -37.0) hi *= 2.0;
            return std::make_shared<const InverseTailTable>(lt, 1e-8, hi);
        }
        return nullptr;
    }

    static std::string kind_of(const Positive& p) {
        return std::visit(
            [](const auto& law) -> std::string {
                using T = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<T, ExponentialJumps>) return "exponential";
                else if constexpr (std::is_same_v<T, ParetoJumps>) return "pareto";
                else if constexpr (std::is_same_v<T, GammaExpJumps>) return "gamma_exp";
                else return "point_mass";
            },
            p);
    }

    static double log_tail_of(const GammaExpJumps& g, double x) {
        return x <= 0.0 ? 0.0 : -g.alpha * x - g.beta * std::log1p(x);
    }

    static double log_tail_of(const Positive& p, double x) {
        if (x < 0.0) return 0.0;
        return std::visit(
            [x](const auto& law) -> double {
                using T = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<T, ExponentialJumps>) return -law.rate * x;
                else if constexpr (std::is_same_v<T, ParetoJumps>)
                    return x <= law.scale ? 0.0 : law.index * (std::log(law.scale) - std::log(x));
                else if constexpr (std::is_same_v<T, GammaExpJumps>) return log_tail_of(law, x);
                else return x < law.location ? 0.0 : -kInf;
            },
            p);
    }

    static double tail_of(const Positive& p, double x) { return std::exp(log_tail_of(p, x)); }

    static double atom_at(const Positive& p, double x) {
        if (const auto* m = std::get_if<PointMassJumps>(&p)) return m->location == x ? 1.0 : 0.0;
        return 0.0;
    }

    static std::optional<double> density_of(const Positive& p, double x) {
        return std::visit(
            [x](const auto& law) -> std::optional<double> {
                using T = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<T, ExponentialJumps>)
                    return x < 0.0 ? 0.0 : law.rate * std::exp(-law.rate * x);
                else if constexpr (std::is_same_v<T, ParetoJumps>)
                    return x < law.scale ? 0.0
                                         : law.index / law.scale * std::pow(law.scale / x, law.index + 1.0);
                else if constexpr (std::is_same_v<T, GammaExpJumps>)
                    return x < 0.0 ? 0.0
                                   : std::exp(log_tail_of(law, x)) * (law.alpha + law.beta / (1.0 + x));
                else return std::nullopt;
            },
            p);
    }

    static void upper_bound(const Positive& p, double& sup, bool& closed) {
        std::visit(
            [&](const auto& law) {
                using T = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<T, ExponentialJumps>) {
                    sup = law.rate;
                    closed = false;
                } else if constexpr (std::is_same_v<T, ParetoJumps>) {
                    sup = 0.0;
                    closed = true;
                } else if constexpr (std::is_same_v<T, GammaExpJumps>) {
                    // beta > 1 makes int e^{alpha x} dF finite
                    sup = law.alpha;
                    closed = true;
                } else {
                    sup = kInf;
                    closed = false;
                }
            },
            p);
    }

    /// int_0^inf e^{-c x} (1 + x)^{-beta} dx, c >= 0.
    static double gamma_exp_laplace(double beta, double c) {
        if (c == 0.0) return 1.0 / (beta - 1.0);
        if (c <= 30.0) return std::exp(c) * generalized_expint(beta, c);
        return integrate([&](double x) { return std::exp(-c * x - beta * std::log1p(x)); }, 0.0, kInf);
    }

    static double exp_moment_of(const Positive& p, double lambda) {
        if (lambda == 0.0) return 1.0;
        return std::visit(
            [lambda](const auto& law) -> double {
                using T = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<T, ExponentialJumps>) {
                    return law.rate / (law.rate - lambda);
                } else if constexpr (std::is_same_v<T, ParetoJumps>) {
                    // lambda < 0 here: a * int_1^inf e^{lambda s v} v^{-a-1} dv
                    const double ls = lambda * law.scale;
                    return law.index * std::exp(ls) *
                           integrate([&](double v) { return std::exp(ls * v) * std::pow(1.0 + v, -law.index - 1.0); },
                                     0.0, kInf);
                } else if constexpr (std::is_same_v<T, GammaExpJumps>) {
                    // E e^{lambda J} = 1 + lambda int e^{lambda x} F(x) dx
                    return 1.0 + lambda * gamma_exp_laplace(law.beta, law.alpha - lambda);
                } else {
                    return std::exp(lambda * law.location);
                }
            },
            p);
    }

    static std::optional<double> exp_moment_derivative_of(const Positive& p, double lambda) {
        return std::visit(
            [lambda](const auto& law) -> std::optional<double> {
                using T = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<T, ExponentialJumps>) {
                    const double g = law.rate - lambda;
                    return law.rate / (g * g);
                } else if constexpr (std::is_same_v<T, PointMassJumps>) {
                    return law.location * std::exp(lambda * law.location);
                } else {
                    return std::nullopt;
                }
            },
            p);
    }

    static double mean_of(const Positive& p) {
        return std::visit(
            [](const auto& law) -> double {
                using T = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<T, ExponentialJumps>) {
                    return 1.0 / law.rate;
                } else if constexpr (std::is_same_v<T, ParetoJumps>) {
                    if (law.index <= 1.0) throw MomentError("pareto jumps with index <= 1 have infinite mean");
                    return law.index * law.scale / (law.index - 1.0);
                } else if constexpr (std::is_same_v<T, GammaExpJumps>) {
                    return gamma_exp_laplace(law.beta, law.alpha);
                } else {
                    return law.location;
                }
            },
            p);
    }

    static double inverse_tail_of(const Positive& p, const InverseTailTable* table, double u) {
        return std::visit(
            [u, table](const auto& law) -> double {
                using T = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<T, ExponentialJumps>) {
                    return -std::log(u) / law.rate;
                } else if constexpr (std::is_same_v<T, ParetoJumps>) {
                    return law.scale * std::exp(-std::log(u) / law.index);
                } else if constexpr (std::is_same_v<T, GammaExpJumps>) {
                    // solve alpha x + beta log1p(x) = -log u; the left side is
                    // increasing and concave, so Newton iterates approach the
                    // root from below after the first step
                    const double target = -std::log(u);
                    double x = table != nullptr ? table->inverse(u) : 0.0;
                    for (int it = 0; it < 100; ++it) {
                        const double f = law.alpha * x + law.beta * std::log1p(x) - target;
                        const double step = f / (law.alpha + law.beta / (1.0 + x));
                        const double next = std::max(0.0, x - step);
                        if (std::abs(next - x) <= 1e-15 * (1.0 + x)) {
                            x = next;
                            break;
                        }
                        x = next;
                    }
                    return x;
                } else {
                    return law.location;
                }
            },
            p);
    }

    Positive up_;
    std::optional<Positive> down_;
    double up_prob_ = 1.0;
    std::shared_ptr<const InverseTailTable> up_table_;
    std::shared_ptr<const InverseTailTable> down_table_;
};

}  // namespace expfunc
