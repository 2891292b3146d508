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

// JSON documents for models:
//   {"drift": b, "gaussian_var": s2, "jump_rate": l,
//    "jump_law": {"kind": "gamma_exp", "alpha": 2, "beta": 2}}
// kinds: exponential(rate), pareto(index, scale), gamma_exp(alpha, beta),
// point_mass(location), two_sided(up_prob, up, down).

#include "expfunc/errors.hpp"
#include "expfunc/levy_model.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace expfunc {

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& key, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + key, "missing");
    if (!it->is_number()) throw SchemaError(path + key, "must be a number");
    return it->get<double>();
}

inline double optional_number(const nlohmann::json& j, const std::string& key, const std::string& path,
                              double fallback) {
    return j.contains(key) ? require_number(j, key, path) : fallback;
}

template <class F>
auto rethrow_as_schema(const std::string& field, F&& build) {
    try {
        return build();
    } catch (const DomainError& e) {
        throw SchemaError(field, e.what());
    }
}

}  // namespace detail

inline JumpLaw jump_law_from_json(const nlohmann::json& j, const std::string& path = "jump_law.") {
    if (!j.is_object()) throw SchemaError(path.substr(0, path.size() - 1), "must be an object");
    const auto kind_it = j.find("kind");
    if (kind_it == j.end() || !kind_it->is_string()) throw SchemaError(path + "kind", "missing or not a string");
    const std::string kind = kind_it->get<std::string>();
    if (kind == "exponential") {
        const double rate = detail::require_number(j, "rate", path);
        return detail::rethrow_as_schema(path + "rate", [&] { return JumpLaw::exponential(rate); });
    }
    if (kind == "pareto") {
        const double index = detail::require_number(j, "index", path);
        const double scale = detail::optional_number(j, "scale", path, 1.0);
        return detail::rethrow_as_schema(path + "index", [&] { return JumpLaw::pareto(index, scale); });
    }
    if (kind == "gamma_exp") {
        const double alpha = detail::require_number(j, "alpha", path);
        const double beta = detail::require_number(j, "beta", path);
        if (!(alpha > 0.0)) throw SchemaError(path + "alpha", "must be > 0");
        if (!(beta > 1.0)) throw SchemaError(path + "beta", "must be > 1");
        return JumpLaw::gamma_exp(alpha, beta);
    }
    if (kind == "point_mass") {
        const double loc = detail::require_number(j, "location", path);
        return detail::rethrow_as_schema(path + "location", [&] { return JumpLaw::point_mass(loc); });
    }
    if (kind == "two_sided") {
        const double p = detail::require_number(j, "up_prob", path);
        if (!j.contains("up")) throw SchemaError(path + "up", "missing");
        if (!j.contains("down")) throw SchemaError(path + "down", "missing");
        const JumpLaw up = jump_law_from_json(j.at("up"), path + "up.");
        const JumpLaw down = jump_law_from_json(j.at("down"), path + "down.");
        return detail::rethrow_as_schema(path + "up_prob", [&] { return JumpLaw::two_sided(p, up, down); });
    }
    throw SchemaError(path + "kind", "unknown jump law kind '" + kind + "'");
}

namespace detail {

inline nlohmann::json positive_to_json(const JumpLaw::Positive& p) {
    return std::visit(
        [](const auto& law) -> nlohmann::json {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, ExponentialJumps>)
                return {{"kind", "exponential"}, {"rate", law.rate}};
            else if constexpr (std::is_same_v<T, ParetoJumps>)
                return {{"kind", "pareto"}, {"index", law.index}, {"scale", law.scale}};
            else if constexpr (std::is_same_v<T, GammaExpJumps>)
                return {{"kind", "gamma_exp"}, {"alpha", law.alpha}, {"beta", law.beta}};
            else
                return {{"kind", "point_mass"}, {"location", law.location}};
        },
        p);
}

}  // namespace detail

inline nlohmann::json to_json(const JumpLaw& law) {
    if (!law.is_two_sided()) return detail::positive_to_json(law.up());
    return {{"kind", "two_sided"},
            {"up_prob", law.up_prob()},
            {"up", detail::positive_to_json(law.up())},
            {"down", detail::positive_to_json(*law.down())}};
}

inline LevyModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("model", "must be an object");
    const double drift = detail::require_number(j, "drift", "");
    const double var = detail::optional_number(j, "gaussian_var", "", 0.0);
    const double rate = detail::optional_number(j, "jump_rate", "", 0.0);
    std::optional<JumpLaw> law;
    if (j.contains("jump_law")) law = jump_law_from_json(j.at("jump_law"));
    std::string certificate;
    if (j.contains("drift_certificate")) {
        if (!j.at("drift_certificate").is_string()) throw SchemaError("drift_certificate", "must be a string");
        certificate = j.at("drift_certificate").get<std::string>();
    }
    return LevyModel(drift, var, rate, std::move(law), std::move(certificate));
}

inline nlohmann::json to_json(const LevyModel& m) {
    nlohmann::json j = {{"drift", m.drift()}, {"gaussian_var", m.gaussian_var()}, {"jump_rate", m.jump_rate()}};
    if (m.jump_law()) j["jump_law"] = to_json(*m.jump_law());
    if (!m.drift_certificate().empty()) j["drift_certificate"] = m.drift_certificate();
    return j;
}

}  // namespace expfunc
