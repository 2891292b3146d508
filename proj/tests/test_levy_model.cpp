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

#include "expfunc/levy_model.hpp"
#include "expfunc/model_io.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using expfunc::JumpLaw;
using expfunc::LevyModel;

TEST(LevyModel, BrownianExponent) {
    const auto m = LevyModel::brownian(-1.0, 2.0);
    EXPECT_EQ(m.laplace_exponent(0.0), 0.0);
    EXPECT_NEAR(m.laplace_exponent(1.0), 0.0, 1e-15);
    EXPECT_NEAR(m.laplace_exponent(2.0), 2.0, 1e-15);
    EXPECT_NEAR(m.laplace_exponent_derivative(1.0), 1.0, 1e-15);
    EXPECT_NEAR(m.mean_increment(), -1.0, 0.0);
    EXPECT_EQ(m.levy_tail(1.0), 0.0);
}

TEST(LevyModel, CompoundPoissonExponent) {
    const auto m = LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::exponential(1.0));
    // psi(l) = -l + 0.5 (1 / (1 - l) - 1)
    for (double l : {-2.0, 0.25, 0.5, 0.9})
        EXPECT_NEAR(m.laplace_exponent(l), -l + 0.5 * (1.0 / (1.0 - l) - 1.0), 1e-14) << l;
    EXPECT_NEAR(m.mean_increment(), -0.5, 1e-15);
    EXPECT_NEAR(m.levy_tail(2.0), 0.5 * std::exp(-2.0), 1e-15);
    EXPECT_THROW(m.laplace_exponent(1.0), expfunc::DomainError);
    EXPECT_THROW(m.levy_tail(0.0), expfunc::DomainError);
}

TEST(LevyModel, GammaExpExponent) {
    const auto m = LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::gamma_exp(2.0, 2.0));
    EXPECT_NEAR(m.mean_increment(), -1.0 + 0.5 * 0.2773427662, 1e-9);
    EXPECT_NEAR(m.laplace_exponent(2.0), -2.0 + 0.5 * 2.0, 1e-9);
    // tail at 1: 0.5 e^{-2} / 4
    EXPECT_NEAR(m.levy_tail(1.0), 0.016916910404576588, 1e-15);
    EXPECT_NEAR(m.log_levy_tail(1.0), std::log(m.levy_tail(1.0)), 1e-14);
}

TEST(LevyModel, DerivativeAtZeroIsMean) {
    const LevyModel models[] = {
        LevyModel::brownian(-3.0, 2.0),
        LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::gamma_exp(2.0, 2.0)),
        LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::exponential(1.0)),
        LevyModel(-0.5, 1.0, 1.0, JumpLaw::two_sided(0.5, JumpLaw::exponential(3.0), JumpLaw::exponential(1.0))),
    };
    for (const auto& m : models) {
        const double h = 1e-5;
        const double central = (m.laplace_exponent(h) - m.laplace_exponent(-h)) / (2.0 * h);
        EXPECT_NEAR(central, m.mean_increment(), 1e-6);
        EXPECT_NEAR(m.laplace_exponent_derivative(0.0), m.mean_increment(), 1e-12);
    }
}

TEST(LevyModel, ExponentIsConvex) {
    const auto m = LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::gamma_exp(2.0, 2.0));
    for (double l = -3.0; l < 1.9; l += 0.1) {
        const double h = 0.05;
        const double second = m.laplace_exponent(l + h) - 2.0 * m.laplace_exponent(l) + m.laplace_exponent(l - h);
        EXPECT_GE(second, -1e-12) << l;
    }
}

TEST(LevyModel, DerivativeMatchesDifferenceQuotient) {
    const auto m = LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::gamma_exp(2.0, 2.0));
    for (double l : {0.5, 1.0, 1.5}) {
        const double h = 1e-5;
        EXPECT_NEAR(m.laplace_exponent_derivative(l),
                    (m.laplace_exponent(l + h) - m.laplace_exponent(l - h)) / (2.0 * h), 1e-5);
    }
}

TEST(LevyModel, RejectsNonNegativeMean) {
    EXPECT_THROW(LevyModel::brownian(0.0, 1.0), expfunc::SchemaError);
    EXPECT_THROW(LevyModel::compound_poisson(-1.0, 1.0, JumpLaw::exponential(0.5)), expfunc::SchemaError);
    // infinite mean needs an explicit certificate
    EXPECT_THROW(LevyModel::compound_poisson(-1.0, 1.0, JumpLaw::pareto(0.5, 1.0)), expfunc::SchemaError);
    EXPECT_NO_THROW(LevyModel(-1.0, 0.0, 1.0, JumpLaw::two_sided(0.5, JumpLaw::pareto(0.5, 1.0),
                                                                 JumpLaw::pareto(0.4, 1.0)),
                              "heavier downward tail"));
}

TEST(LevyModel, SpectralStructure) {
    EXPECT_TRUE(LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::exponential(1.0)).is_spectrally_positive_cp());
    EXPECT_FALSE(LevyModel::brownian(-1.0, 1.0).is_spectrally_positive_cp());
    EXPECT_FALSE(LevyModel(-1.0, 0.0, 1.0, JumpLaw::two_sided(0.5, JumpLaw::exponential(3.0),
                                                             JumpLaw::exponential(1.0)))
                     .is_spectrally_positive_cp());
}

TEST(ModelIo, RoundTrip) {
    const auto j = nlohmann::json::parse(
        R"({"drift": -1, "gaussian_var": 0, "jump_rate": 0.5,
            "jump_law": {"kind": "gamma_exp", "alpha": 2, "beta": 2}})");
    const auto m = expfunc::model_from_json(j);
    EXPECT_EQ(m.jump_law()->kind(), "gamma_exp");
    const auto again = expfunc::model_from_json(expfunc::to_json(m));
    EXPECT_EQ(expfunc::to_json(again), expfunc::to_json(m));
    const auto two = nlohmann::json::parse(
        R"({"drift": -1, "jump_rate": 1, "jump_law": {"kind": "two_sided", "up_prob": 0.5,
            "up": {"kind": "exponential", "rate": 3}, "down": {"kind": "point_mass", "location": 1}}})");
    EXPECT_EQ(expfunc::to_json(expfunc::model_from_json(two)), expfunc::to_json(expfunc::model_from_json(
                                                                   expfunc::to_json(expfunc::model_from_json(two)))));
}

TEST(ModelIo, SchemaErrorsNameTheField) {
    const auto field_of = [](const char* text) -> std::string {
        try {
            expfunc::model_from_json(nlohmann::json::parse(text));
        } catch (const expfunc::SchemaError& e) {
            return e.field();
        }
        return "";
    };
    EXPECT_EQ(field_of(R"({"gaussian_var": 1})"), "drift");
    EXPECT_EQ(field_of(R"({"drift": -1, "gaussian_var": -1})"), "gaussian_var");
    EXPECT_EQ(field_of(R"({"drift": -1, "jump_rate": 1})"), "jump_law");
    EXPECT_EQ(field_of(R"({"drift": -1, "jump_rate": 1, "jump_law": {"kind": "cauchy"}})"), "jump_law.kind");
    EXPECT_EQ(field_of(R"({"drift": -1, "jump_rate": 1, "jump_law": {"kind": "gamma_exp", "alpha": 1, "beta": 1}})"),
              "jump_law.beta");
    EXPECT_EQ(field_of(R"({"drift": -1, "jump_rate": 1, "jump_law": {"kind": "exponential"}})"), "jump_law.rate");
}
