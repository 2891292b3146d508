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

#include "expfunc/path.hpp"

#include <gtest/gtest.h>

#include <cmath>

using expfunc::JumpLaw;
using expfunc::LevyModel;
using expfunc::PathSkeleton;

TEST(Path, PureDriftSegment) {
    PathSkeleton p;
    p.drift = -1.0;
    p.horizon = 1.0;
    EXPECT_NEAR(expfunc::integrate_exp(p, 1.0), 1.0 - std::exp(-1.0), 1e-15);
}

TEST(Path, OneJumpTwoSegments) {
    PathSkeleton p;
    p.drift = -1.0;
    p.horizon = 2.0;
    p.jump_times = {1.0};
    p.jump_sizes = {1.0};
    EXPECT_NEAR(expfunc::integrate_exp(p, 2.0), 2.0 * (1.0 - std::exp(-1.0)), 1e-14);
    EXPECT_NEAR(p.value_left(1.0), -1.0, 1e-15);
    EXPECT_NEAR(p.value_at(1.0), 0.0, 1e-15);
}

TEST(Path, ZeroDriftSegmentIsLength) {
    EXPECT_EQ(expfunc::segment_exp_integral(0.0, 0.0, 0.37), 0.37);
    PathSkeleton p;
    p.horizon = 3.0;
    EXPECT_NEAR(expfunc::integrate_exp(p, 2.5), 2.5, 1e-15);
    // the small-slope branch agrees with the closed form
    EXPECT_NEAR(expfunc::segment_exp_integral(0.3, 1e-9, 2.0), std::exp(0.3) * 2.0 * (1.0 + 1e-9), 1e-15);
    EXPECT_NEAR(expfunc::segment_exp_integral(0.3, -0.5, 2.0), std::exp(0.3) * (1.0 - std::exp(-1.0)) / 0.5, 1e-14);
}

TEST(Path, NoJumpsWhenRateIsZero) {
    expfunc::RandomStream rng(1, 0);
    const auto p = expfunc::sample_path(LevyModel(-1.0, 0.0, 0.0, std::nullopt), rng, 10.0);
    EXPECT_TRUE(p.jump_times.empty());
    EXPECT_FALSE(p.has_gaussian());
    EXPECT_NEAR(p.value_at(7.0), -7.0, 1e-15);
}

TEST(Path, DeterministicInStream) {
    const auto m = LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::exponential(1.0));
    expfunc::RandomStream a(99, 4), b(99, 4);
    const auto p = expfunc::sample_path(m, a, 100.0);
    const auto q = expfunc::sample_path(m, b, 100.0);
    EXPECT_EQ(p.jump_times, q.jump_times);
    EXPECT_EQ(p.jump_sizes, q.jump_sizes);
}

TEST(Path, PoissonJumpCount) {
    const auto m = LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::exponential(1.0));
    double total = 0.0;
    const int paths = 2000;
    for (int i = 0; i < paths; ++i) {
        expfunc::RandomStream rng(7, i);
        total += static_cast<double>(expfunc::sample_path(m, rng, 20.0).jump_times.size());
    }
    // mean 10, variance 10 per path
    EXPECT_NEAR(total / paths, 10.0, 3.0 * std::sqrt(10.0 / paths));
}

TEST(Path, IntegralIsAdditive) {
    const auto m = LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::gamma_exp(2.0, 2.0));
    expfunc::RandomStream rng(11, 0);
    const auto p = expfunc::sample_path(m, rng, 40.0);
    // splitting [0, 40] at s: the tail part is e^{xi_s} times the integral of the shifted path
    for (double s : {3.3, 17.0, 25.5}) {
        PathSkeleton shifted;
        shifted.drift = p.drift;
        shifted.horizon = p.horizon - s;
        for (std::size_t i = 0; i < p.jump_times.size(); ++i)
            if (p.jump_times[i] > s) {
                shifted.jump_times.push_back(p.jump_times[i] - s);
                shifted.jump_sizes.push_back(p.jump_sizes[i]);
            }
        const double whole = expfunc::integrate_exp(p, 40.0);
        const double split = expfunc::integrate_exp(p, s) + std::exp(p.value_at(s)) * expfunc::integrate_exp(shifted, 40.0 - s);
        EXPECT_NEAR(whole, split, 1e-12 * whole);
    }
}

TEST(Path, GaussianGridEndsAtHorizon) {
    expfunc::RandomStream rng(5, 0);
    const auto p = expfunc::sample_path(LevyModel::brownian(-1.0, 1.0), rng, 1.05, 0.1);
    ASSERT_TRUE(p.has_gaussian());
    EXPECT_EQ(p.gaussian_values.size(), 12u);
    EXPECT_EQ(p.grid_time(11), 1.05);
}
