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
#include "expfunc/levy_model.hpp"
#include "expfunc/moments.hpp"
#include "expfunc/s_alpha.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace expfunc {

enum class RegimeKind { s_alpha, subexponential_mz, cramer };

inline std::string to_string(RegimeKind k) {
    switch (k) {
        case RegimeKind::s_alpha: return "s-alpha";
        case RegimeKind::subexponential_mz: return "mz";
        case RegimeKind::cramer: return "cramer";
    }
    return "unknown";
}

inline RegimeKind regime_from_string(const std::string& s) {
    if (s == "s-alpha" || s == "s_alpha") return RegimeKind::s_alpha;
    if (s == "mz" || s == "subexponential_mz") return RegimeKind::subexponential_mz;
    if (s == "cramer") return RegimeKind::cramer;
    throw SchemaError("regime", "unknown regime '" + s + "' (expected s-alpha, mz or cramer)");
}

struct RegimeClaim {
    RegimeKind kind = RegimeKind::s_alpha;
    /// alpha for s_alpha; ignored otherwise.
    double alpha = 0.0;
};

struct RegimeCheck {
    std::string name;
    bool pass = false;
    std::vector<double> evidence;
    std::string note;
};

/// Outcome of checking a model against the hypotheses of a tail regime.
/// Passes only if every check passes.
struct RegimeCertificate {
    RegimeKind regime = RegimeKind::s_alpha;
    /// alpha (s_alpha) or theta (cramer); 0 for mz.
    double parameter = 0.0;
    std::vector<RegimeCheck> checks;

    bool passed() const {
        if (checks.empty()) return false;
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    const RegimeCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["regime"] = to_string(regime);
        j["parameter"] = parameter;
        j["passed"] = passed();
        j["checks"] = nlohmann::json::array();
        for (const auto& c : checks) {
            nlohmann::json evidence = nlohmann::json::array();
            for (const double v : c.evidence) {
                if (std::isfinite(v)) evidence.push_back(v);
                else evidence.push_back(std::to_string(v));
            }
            j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"evidence", evidence}, {"note", c.note}});
        }
        return j;
    }
};

/// Grids for the convergence diagnostics behind the certificates.
struct RegimeDiagnosticOptions {
    std::vector<double> s_alpha_grid{5.0, 10.0, 20.0, 40.0, 80.0, 160.0, 320.0};
    std::vector<double> mz_grid{10.0, 20.0, 40.0, 80.0, 160.0, 320.0, 640.0};
    double y_probe = 1.0;
    double tolerance = 0.25;
};

namespace detail {

inline RegimeCheck non_arithmetic_check(const LevyModel& model) {
    const bool lattice = !model.has_gaussian() && model.drift() == 0.0 && model.has_jumps() &&
                         model.jump_law()->is_lattice();
    return {"non_arithmetic", !lattice, {}, lattice ? "pure lattice jumps without drift" : ""};
}

inline RegimeCheck unbounded_jumps_check(const LevyModel& model) {
    const bool ok = model.has_jumps() && model.jump_law()->unbounded_upward();
    RegimeCheck c{"positive_jumps_unbounded", ok, {}, ok ? "" : "Pi(x, inf) = 0 for some x > 0"};
    if (ok) c.evidence = {model.levy_tail(1.0), model.levy_tail(10.0)};
    return c;
}

inline void add_diagnostic(RegimeCheck& c, const SAlphaDiagnostic& d) {
    c.pass = d.converged;
    c.evidence = {d.final_shift_error, d.final_convolution_error, d.ratio_convolution.back(),
                  d.target_convolution};
    c.note = "evidence: final |ratio1/e^{gamma y} - 1|, final |ratio2/2M - 1|, ratio2(x_max), 2M";
}

}  // namespace detail

/// Runs the hypothesis checks of the claimed regime. Never throws for a
/// failing hypothesis; failures are recorded in the certificate.
inline RegimeCertificate validate_regime(const LevyModel& model, const RegimeClaim& claim,
                                         const RegimeDiagnosticOptions& opts = {}) {
    RegimeCertificate cert;
    cert.regime = claim.kind;
    switch (claim.kind) {
        case RegimeKind::s_alpha: {
            const double alpha = claim.alpha;
            cert.parameter = alpha;
            cert.checks.push_back(detail::unbounded_jumps_check(model));
            cert.checks.push_back(detail::non_arithmetic_check(model));
            const MomentDomain dom = model.exp_moment_domain();
            const bool edge = alpha > 0.0 && dom.upper == alpha && dom.upper_closed;
            cert.checks.push_back({"alpha_is_edge_of_C", edge, {dom.upper, dom.upper_closed ? 1.0 : 0.0},
                                   "alpha must be in C with C above alpha empty"});
            RegimeCheck psi{"psi_alpha_negative", false, {}, ""};
            if (dom.contains(alpha)) {
                const double v = model.laplace_exponent(alpha);
                psi.pass = v < 0.0;
                psi.evidence = {v};
            } else {
                psi.note = "alpha outside C";
            }
            cert.checks.push_back(psi);
            RegimeCheck diag{"s_alpha_diagnostic", false, {}, ""};
            if (model.has_jumps() && model.jump_law()->up_prob() > 0.0) {
                try {
                    detail::add_diagnostic(diag, s_alpha_diagnostic(*model.jump_law(), alpha, opts.s_alpha_grid,
                                                                    opts.y_probe, opts.tolerance));
                } catch (const Error& e) {
                    diag.note = e.what();
                }
            } else {
                diag.note = "no positive jumps";
            }
            cert.checks.push_back(diag);
            if (alpha <= 1.0) {
                RegimeCheck mean{"finite_negative_mean", false, {}, ""};
                try {
                    const double m = model.mean_increment();
                    mean.pass = m < 0.0;
                    mean.evidence = {m};
                } catch (const MomentError& e) {
                    mean.note = e.what();
                }
                cert.checks.push_back(mean);
            }
            break;
        }
        case RegimeKind::subexponential_mz: {
            RegimeCheck mu{"mu_positive_finite", false, {}, ""};
            try {
                const double m = -model.mean_increment();
                mu.pass = m > 0.0 && std::isfinite(m);
                mu.evidence = {m};
            } catch (const MomentError& e) {
                mu.note = e.what();
            }
            cert.checks.push_back(mu);
            cert.checks.push_back(detail::unbounded_jumps_check(model));
            RegimeCheck diag{"integrated_tail_subexponential", false, {}, ""};
            try {
                detail::add_diagnostic(
                    diag, s_alpha_diagnostic(IntegratedTail(model), 0.0, opts.mz_grid, opts.y_probe, opts.tolerance));
            } catch (const Error& e) {
                diag.note = e.what();
            }
            cert.checks.push_back(diag);
            break;
        }
        case RegimeKind::cramer: {
            cert.checks.push_back(detail::non_arithmetic_check(model));
            RegimeCheck root{"cramer_root_exists", false, {}, ""};
            RegimeCheck slope{"psi_prime_theta_finite", false, {}, ""};
            try {
                const double theta = cramer_root(model);
                cert.parameter = theta;
                root.pass = theta > 0.0;
                root.evidence = {theta, model.laplace_exponent(theta)};
                const double d = model.laplace_exponent_derivative(theta);
                slope.pass = std::isfinite(d) && d > 0.0;
                slope.evidence = {d};
            } catch (const NoRootError& e) {
                root.note = e.what();
                slope.note = "no root";
            }
            cert.checks.push_back(root);
            cert.checks.push_back(slope);
            break;
        }
    }
    return cert;
}

}  // namespace expfunc
