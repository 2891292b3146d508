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

#include "expfunc/asymptotes.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using expfunc::JumpLaw;
using expfunc::LevyModel;

namespace {

LevyModel salpha_model() { return LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::gamma_exp(2.0, 2.0)); }

// Independent oracle for the gamma_exp(2, 2) model: psi(k) from
// E e^{kJ} = 1 + k int e^{kx} e^{-2x} (1 + x)^{-2} dx.
double oracle_psi(double k) {
    boost::math::quadrature::exp_sinh<double> q;
    const double integral = q.integrate([k](double x) { return std::exp((k - 2.0) * x) / ((1.0 + x) * (1.0 + x)); });
    return -k + 0.5 * k * integral;
}

double oracle_mu() {
    boost::math::quadrature::exp_sinh<double> q;
    return 1.0 - 0.5 * q.integrate([](double x) { return std::exp(-2.0 * x) / ((1.0 + x) * (1.0 + x)); });
}

}  // namespace

TEST(Asymptotes, OracleValuesFrozen) {
    // quadrature oracle, frozen
    EXPECT_NEAR(oracle_psi(1.0), -0.798173681161597, 1e-12);
    EXPECT_NEAR(oracle_psi(2.0), -1.0, 1e-12);
    EXPECT_NEAR(oracle_mu(), 0.861328616888223, 1e-12);
}

TEST(Asymptotes, Theorem1Constant) {
    const auto m = salpha_model();
    const auto a = expfunc::theorem1_asymptote(m, 2.0);
    // E(I^2) = (1 / -psi(1)) (2 / -psi(2)), and -psi(2) = 1
    const double expected = 2.0 / (-oracle_psi(1.0)) / (-oracle_psi(2.0)) / (-oracle_psi(2.0));
    EXPECT_NEAR(a.constant, expected, 1e-9);
    EXPECT_NEAR(a.constant, 2.505720, 1e-6);
    EXPECT_EQ(a.moment.method, expfunc::MomentMethod::product_formula);
    EXPECT_NEAR(a(std::numbers::e), a.constant * 0.5 * std::exp(-2.0) / 4.0, 1e-15);
    EXPECT_THROW(a(1.0), expfunc::DomainError);
}

TEST(Asymptotes, Theorem1RegularVariation) {
    const auto a = expfunc::theorem1_asymptote(salpha_model(), 2.0);
    // Pi(log t) = 0.5 t^{-2} (1 + log t)^{-2}: the ratio is exact and tends to 2^{-2}
    double prev = 0.0;
    for (double t : {1e2, 1e10, 1e50, 1e100}) {
        const double r = a(2.0 * t) / a(t);
        const double lt = std::log(t);
        EXPECT_NEAR(r, 0.25 * std::pow((1.0 + lt) / (1.0 + lt + std::log(2.0)), 2.0), 1e-12);
        EXPECT_GT(r, prev);
        EXPECT_LT(r, 0.25);
        prev = r;
    }
    EXPECT_NEAR(prev, 0.25, 1e-2 * 0.25);
}

TEST(Asymptotes, Theorem2IsDAlphaTimesTheorem1) {
    const auto m = salpha_model();
    const auto t1 = expfunc::theorem1_asymptote(m, 2.0);
    const auto t2 = expfunc::theorem2_asymptote(m, 2.0);
    EXPECT_NEAR(t2.phi_h_neg_alpha, 0.5, 1e-12);
    for (double y : {2.0, 10.0, 1e3, 1e8}) EXPECT_NEAR(t2(y) / t1(y), 2.0, 1e-12);
    EXPECT_NEAR(t2.constant, 5.011441, 1e-6);
    const auto m3 = LevyModel::compound_poisson(-3.0, 0.5, JumpLaw::gamma_exp(2.0, 2.0));
    EXPECT_NEAR(expfunc::asymptote_theorem2(m3, 2.0, 5.0) / expfunc::asymptote_theorem1(m3, 2.0, 5.0), 6.0, 1e-12);
    EXPECT_THROW(expfunc::theorem2_asymptote(LevyModel::brownian(-2.0, 2.0), 1.0), expfunc::UnsupportedModel);
}

TEST(Asymptotes, CramerConstants) {
    const auto bm2 = expfunc::cramer_asymptote(LevyModel::brownian(-2.0, 2.0));
    EXPECT_NEAR(bm2.theta, 2.0, 1e-12);
    EXPECT_NEAR(bm2.constant, 0.5, 1e-12);
    const auto bm1 = expfunc::cramer_asymptote(LevyModel::brownian(-1.0, 2.0));
    EXPECT_NEAR(bm1.theta, 1.0, 1e-12);
    EXPECT_NEAR(bm1.constant, 1.0, 1e-12);
    for (double t : {3.0, 100.0, 1e6}) EXPECT_NEAR(bm2(2.0 * t) / bm2(t), 0.25, 1e-15);
    // exact law P(Gamma(2) < 1/t) = 1 - e^{-1/t}(1 + 1/t) against 0.5 t^{-2}
    const double t = 1e4;
    const double exact = -std::expm1(-1.0 / t) - std::exp(-1.0 / t) / t;
    EXPECT_NEAR(exact / bm2(t), 1.0, 1e-3);
}

TEST(Asymptotes, WienerHopfForBrownianMotion) {
    const auto bm = LevyModel::brownian(-2.0, 2.0);
    for (double l = 0.25; l < 6.0; l += 0.25) {
        EXPECT_EQ(expfunc::downward_ladder_exponent(bm, l), l);
        EXPECT_NEAR(-expfunc::upward_ladder_exponent_neg(bm, l), l - 2.0, 1e-14);
        EXPECT_NEAR(-expfunc::upward_ladder_exponent_neg(bm, l) * expfunc::downward_ladder_exponent(bm, l),
                    bm.laplace_exponent(l), 1e-13);
    }
}

TEST(Asymptotes, Theorem3Cramer) {
    const auto bm = expfunc::theorem3_cramer_asymptote(LevyModel::brownian(-2.0, 2.0));
    EXPECT_NEAR(bm.mu_h_theta, 1.0, 1e-12);
    EXPECT_NEAR(bm.constant, 1.0, 1e-12);
    const auto cp =
        expfunc::theorem3_cramer_asymptote(LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::exponential(1.0)),
                                           expfunc::MomentOptions{1, 1000, {.remainder_cap = 1e12}, 1});
    EXPECT_NEAR(cp.theta, 0.5, 1e-12);
    EXPECT_NEAR(cp.mu_h_theta, 2.0, 1e-9);
}

TEST(Asymptotes, MzAndTheorem3Target) {
    const auto m = LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::pareto(3.0, 1.0));
    const auto mz = expfunc::mz_asymptote(m);
    EXPECT_NEAR(mz.mu, 0.25, 1e-15);
    for (double x : {1.0, 2.0, 7.5}) EXPECT_NEAR(mz.integrated_tail(x), 0.25 / (x * x), 1e-15);
    // a heavier jump rate pushes the integrated tail above 1 on [0, 1]: the min clips to 1 / mu
    const auto heavy = expfunc::mz_asymptote(LevyModel::compound_poisson(-5.0, 2.0, JumpLaw::pareto(3.0, 1.0)));
    EXPECT_EQ(heavy(1.01), 0.5);
    EXPECT_EQ(heavy(2.7), 0.5);
    EXPECT_LT(heavy(2.8), 0.5);
    double prev = mz(1.001);
    for (double t = 1.5; t < 1e8; t *= 1.7) {
        EXPECT_LE(mz(t), prev);
        prev = mz(t);
    }
    EXPECT_NEAR(mz(std::exp(5.0)), 0.25 / 25.0 / 0.25, 1e-14);
    const expfunc::Theorem3MzTarget target{m};
    EXPECT_EQ(target.target, 0.0);
    EXPECT_NEAR(target.denominator(std::exp(2.0)), 0.0625, 1e-15);
}

TEST(Asymptotes, SupTailConstants) {
    const auto m = salpha_model();
    const auto s = expfunc::sup_tail_asymptote(m, 2.0);
    EXPECT_NEAR(s.phi_h0, oracle_mu(), 1e-9);
    EXPECT_NEAR(s.constant, 4.0 * oracle_mu(), 1e-8);
    EXPECT_NEAR(s.ladder_constant, 2.0 * oracle_mu(), 1e-8);
    for (double t : {0.5, 3.0, 40.0}) EXPECT_NEAR(s(t) / m.levy_tail(t), s.constant, 1e-12);
}

TEST(Asymptotes, RecurrenceOnDeterministicPath) {
    const LevyModel drift_only(-1.0, 0.0, 0.0, std::nullopt);
    const auto r = expfunc::verify_random_recurrence(drift_only, 3, 200);
    EXPECT_EQ(r.ks_statistic, 0.0);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.max_m, std::exp(-1.0), 1e-15);
}

TEST(Asymptotes, RecurrenceHoldsInDistribution) {
    const auto r = expfunc::verify_random_recurrence(salpha_model(), 11, 10000);
    EXPECT_LE(r.max_m, 1.0);
    EXPECT_LT(r.ks_statistic, r.threshold);
    EXPECT_TRUE(r.pass);
}
