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

#include "expfunc/jump_law.hpp"
#include "expfunc/rng.hpp"
#include "expfunc/stats.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using expfunc::JumpLaw;

namespace {

// E e^{lambda J} = 1 + lambda * int_0^inf e^{lambda x} P(J > x) dx for J >= 0.
// `kink` is where the tail stops being smooth.
double exp_moment_by_tail(const JumpLaw& law, double lambda, double kink = 0.0) {
    const auto f = [&](double x) { return std::exp(lambda * x + law.log_upper_tail(x)); };
    boost::math::quadrature::exp_sinh<double> q;
    double integral = q.integrate([&](double y) { return f(kink + y); });
    if (kink > 0.0) integral += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, kink);
    return 1.0 + lambda * integral;
}

double mean_by_tail(const JumpLaw& law) {
    boost::math::quadrature::exp_sinh<double> q;
    return q.integrate([&](double x) { return law.upper_tail(x); });
}

}  // namespace

TEST(JumpLaw, ExponentialClosedForms) {
    const auto law = JumpLaw::exponential(1.0);
    EXPECT_NEAR(law.upper_tail(1.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(law.mean(), 1.0, 1e-15);
    EXPECT_NEAR(law.exp_moment(0.5), 2.0, 1e-14);
    EXPECT_NEAR(law.exp_moment(-1.0), 0.5, 1e-14);
    EXPECT_NEAR(law.exp_moment(0.5), exp_moment_by_tail(law, 0.5), 1e-8);
    const auto dom = law.domain();
    EXPECT_EQ(dom.upper, 1.0);
    EXPECT_FALSE(dom.upper_closed);
    EXPECT_THROW(law.exp_moment(1.0), expfunc::DomainError);
}

TEST(JumpLaw, GammaExpMomentsMatchQuadrature) {
    const auto law = JumpLaw::gamma_exp(2.0, 2.0);
    EXPECT_NEAR(law.mean(), 0.2773427662, 1e-9);
    EXPECT_NEAR(law.mean(), mean_by_tail(law), 1e-8);
    for (double lambda : {-3.0, -0.5, 0.5, 1.0, 1.5, 1.9})
        EXPECT_NEAR(law.exp_moment(lambda), exp_moment_by_tail(law, lambda), 1e-8) << lambda;
    // at the closed endpoint E e^{alpha J} = 1 + alpha / (beta - 1)
    EXPECT_NEAR(law.exp_moment(2.0), 3.0, 1e-8);
    EXPECT_TRUE(law.domain().upper_closed);
    EXPECT_THROW(law.exp_moment(2.01), expfunc::DomainError);
}

TEST(JumpLaw, ParetoDomainAndMean) {
    const auto law = JumpLaw::pareto(3.0, 1.0);
    EXPECT_NEAR(law.mean(), 1.5, 1e-14);
    EXPECT_NEAR(law.upper_tail(2.0), 0.125, 1e-15);
    EXPECT_NEAR(law.upper_tail(0.5), 1.0, 0.0);
    EXPECT_EQ(law.domain().upper, 0.0);
    EXPECT_TRUE(law.domain().upper_closed);
    EXPECT_THROW(law.exp_moment(0.1), expfunc::DomainError);
    EXPECT_NEAR(law.exp_moment(-1.0), exp_moment_by_tail(law, -1.0, 1.0), 1e-8);
    // 3 E_4(1)
    EXPECT_NEAR(law.exp_moment(-1.0), 3.0 * 0.0860624913245607, 1e-12);
    EXPECT_THROW(JumpLaw::pareto(1.0, 1.0).mean(), expfunc::MomentError);
}

TEST(JumpLaw, PointMass) {
    const auto law = JumpLaw::point_mass(1.0);
    EXPECT_EQ(law.upper_tail(0.999), 1.0);
    EXPECT_EQ(law.upper_tail(1.0), 0.0);
    EXPECT_NEAR(law.exp_moment(2.0), std::exp(2.0), 1e-12);
    EXPECT_TRUE(law.is_lattice());
    EXPECT_FALSE(law.unbounded_upward());
}

TEST(JumpLaw, TwoSidedMixture) {
    const auto law = JumpLaw::two_sided(0.25, JumpLaw::exponential(2.0), JumpLaw::point_mass(1.0));
    EXPECT_TRUE(law.has_downward_jumps());
    EXPECT_NEAR(law.mean(), 0.25 * 0.5 - 0.75, 1e-15);
    EXPECT_NEAR(law.exp_moment(1.0), 0.25 * 2.0 + 0.75 * std::exp(-1.0), 1e-14);
    EXPECT_NEAR(law.tail(-0.5), 0.25, 1e-15);
    EXPECT_NEAR(law.tail(-1.5), 1.0, 1e-15);
    EXPECT_EQ(law.domain().upper, 2.0);
    EXPECT_THROW(JumpLaw::two_sided(1.5, JumpLaw::exponential(1.0), JumpLaw::exponential(1.0)),
                 expfunc::DomainError);
}

TEST(JumpLaw, InvalidParameters) {
    EXPECT_THROW(JumpLaw::exponential(0.0), expfunc::DomainError);
    EXPECT_THROW(JumpLaw::gamma_exp(1.0, 1.0), expfunc::DomainError);
    EXPECT_THROW(JumpLaw::pareto(-1.0, 1.0), expfunc::DomainError);
    EXPECT_THROW(JumpLaw::point_mass(0.0), expfunc::DomainError);
}

TEST(JumpLaw, InverseTailTableAccuracy) {
    const auto law = JumpLaw::gamma_exp(2.0, 2.0);
    ASSERT_NE(law.upper_table(), nullptr);
    EXPECT_LT(law.upper_table()->sup_error(), 1e-4);
    for (double u : {0.9, 0.5, 0.1, 1e-3, 1e-6})
        EXPECT_NEAR(law.upper_tail(law.upper_inverse_tail(u)), u, 1e-4 * std::max(1.0, u)) << u;
}

TEST(JumpLaw, SamplingMatchesTail) {
    for (const auto& law : {JumpLaw::exponential(1.5), JumpLaw::pareto(3.0, 1.0), JumpLaw::gamma_exp(2.0, 2.0)}) {
        std::vector<double> xs;
        expfunc::RandomStream rng(3, 0);
        for (int i = 0; i < 50000; ++i) xs.push_back(law.sample(rng));
        const double d = expfunc::ks_statistic(xs, [&](double x) { return 1.0 - law.upper_tail(x); });
        EXPECT_LT(d, expfunc::ks_critical_coefficient(0.01) / std::sqrt(50000.0)) << law.kind();
    }
}
