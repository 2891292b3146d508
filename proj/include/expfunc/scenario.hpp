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

// Named, reproducible experiments: a model, a regime claim, sample sizes,
// a seed and grids, run into CSV files plus a summary JSON of verdicts.

#include "expfunc/asymptotes.hpp"
#include "expfunc/errors.hpp"
#include "expfunc/exp_functional.hpp"
#include "expfunc/ladder.hpp"
#include "expfunc/model_io.hpp"
#include "expfunc/moments.hpp"
#include "expfunc/regime.hpp"
#include "expfunc/stats.hpp"
#include "expfunc/tailstats.hpp"
#include "expfunc/version.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace expfunc {

/// Raised by run_scenario when the regime certificate fails and the run is
/// not forced.
class CertificateFailure : public Error {
public:
    using Error::Error;
};

using Band = std::array<double, 2>;

/// Acceptance bands for the verdicts of a run.
struct Bands {
    Band tail{0.5, 1.5};
    Band excursion{0.5, 1.5};
    Band sup{0.6, 1.4};
    /// Dufresne KS distance (Brownian models).
    double ks = 0.02;
    /// |Hill index - theta| (Cramer regime).
    double hill = 0.15;
    /// |log-log slope + theta| of the excursion tail (Cramer regime).
    double slope = 0.1;
};

struct Scenario {
    std::string name;
    nlohmann::json model_json;
    RegimeClaim claim;
    std::uint64_t seed = 0;
    std::size_t samples = 100000;
    /// 0 skips the excursion-area experiment.
    std::size_t excursions = 0;
    /// 0 skips the random-recurrence check.
    std::size_t recurrence_samples = 0;
    SamplerControl control;
    /// Explicit grid for the tail of I; empty means empirical quantiles at tail_levels.
    std::vector<double> t_grid;
    std::vector<double> tail_levels = half_decade_levels(1.0, 4.0);
    /// Verdict point for the tail of I: a fixed t, else the (1 - probe_level) quantile.
    std::optional<double> probe_t;
    double probe_level = 1e-3;
    Bands bands;
    std::string output_dir;

    LevyModel model() const { return model_from_json(model_json); }
};

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline Band band_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError(path, "must be [lo, hi]");
    const Band b{j[0].get<double>(), j[1].get<double>()};
    if (!(b[0] < b[1])) throw SchemaError(path, "needs lo < hi");
    return b;
}

template <class T>
T count_field(const nlohmann::json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw SchemaError(key, "must be a non-negative integer");
    return static_cast<T>(v.get<unsigned long long>());
}

inline std::vector<double> grid_field(const nlohmann::json& j, const std::string& key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) throw SchemaError(key, "must be an array of numbers");
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw SchemaError(key, "must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace detail

/// Hex FNV-1a hash of (model JSON, seed, library version).
inline std::string scenario_hash(const Scenario& s) {
    const std::string key = s.model_json.dump() + '\n' + std::to_string(s.seed) + '\n' + kVersion;
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << detail::fnv1a64(key);
    return os.str();
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("scenario", "must be an object");
    Scenario s;
    if (!j.contains("name") || !j.at("name").is_string()) throw SchemaError("name", "required string");
    s.name = j.at("name").get<std::string>();
    if (!j.contains("seed")) throw SchemaError("seed", "required: every scenario must carry a seed");
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0))
        throw SchemaError("seed", "must be a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
    if (!j.contains("model")) throw SchemaError("model", "required");
    s.model_json = j.at("model");
    try {
        (void)model_from_json(s.model_json);
    } catch (const SchemaError& e) {
        throw SchemaError("model." + e.field(), e.what());
    }
    if (!j.contains("regime") || !j.at("regime").is_object()) throw SchemaError("regime", "required object");
    const auto& r = j.at("regime");
    if (!r.contains("kind") || !r.at("kind").is_string()) throw SchemaError("regime.kind", "required string");
    s.claim.kind = regime_from_string(r.at("kind").get<std::string>());
    if (s.claim.kind == RegimeKind::s_alpha) {
        if (!r.contains("alpha") || !r.at("alpha").is_number()) throw SchemaError("regime.alpha", "required number");
        s.claim.alpha = r.at("alpha").get<double>();
        if (!(s.claim.alpha > 0.0)) throw SchemaError("regime.alpha", "must be > 0");
    }
    s.samples = detail::count_field<std::size_t>(j, "samples", s.samples);
    if (s.samples < 1000) throw SchemaError("samples", "must be at least 1000");
    s.excursions = detail::count_field<std::size_t>(j, "excursions", 0);
    s.recurrence_samples = detail::count_field<std::size_t>(j, "recurrence_samples", 0);
    if (j.contains("sampler")) {
        const auto& c = j.at("sampler");
        if (!c.is_object()) throw SchemaError("sampler", "must be an object");
        const auto num = [&](const char* key, double& dst) {
            if (!c.contains(key)) return;
            if (!c.at(key).is_number()) throw SchemaError(std::string("sampler.") + key, "must be a number");
            dst = c.at(key).get<double>();
            if (!(dst > 0.0)) throw SchemaError(std::string("sampler.") + key, "must be > 0");
        };
        num("barrier", s.control.barrier);
        num("rel_tol", s.control.rel_tol);
        num("dt", s.control.dt);
        if (c.contains("remainder_cap")) {
            double cap = 0.0;
            num("remainder_cap", cap);
            s.control.remainder_cap = cap;
        }
    }
    s.t_grid = detail::grid_field(j, "t_grid");
    if (j.contains("tail_levels")) s.tail_levels = detail::grid_field(j, "tail_levels");
    for (const double q : s.tail_levels)
        if (!(q > 0.0 && q < 1.0)) throw SchemaError("tail_levels", "levels must lie in (0, 1)");
    if (j.contains("probe")) {
        const auto& p = j.at("probe");
        if (p.contains("t")) {
            if (!p.at("t").is_number()) throw SchemaError("probe.t", "must be a number");
            s.probe_t = p.at("t").get<double>();
        } else if (p.contains("level")) {
            if (!p.at("level").is_number()) throw SchemaError("probe.level", "must be a number");
            s.probe_level = p.at("level").get<double>();
            if (!(s.probe_level > 0.0 && s.probe_level < 1.0)) throw SchemaError("probe.level", "must lie in (0, 1)");
        } else {
            throw SchemaError("probe", "needs t or level");
        }
    }
    if (j.contains("bands")) {
        const auto& b = j.at("bands");
        if (!b.is_object()) throw SchemaError("bands", "must be an object");
        if (b.contains("tail")) s.bands.tail = detail::band_from_json(b.at("tail"), "bands.tail");
        if (b.contains("excursion")) s.bands.excursion = detail::band_from_json(b.at("excursion"), "bands.excursion");
        if (b.contains("sup")) s.bands.sup = detail::band_from_json(b.at("sup"), "bands.sup");
        for (const char* key : {"ks", "hill", "slope"}) {
            if (!b.contains(key)) continue;
            if (!b.at(key).is_number()) throw SchemaError(std::string("bands.") + key, "must be a number");
            (std::string(key) == "ks" ? s.bands.ks : std::string(key) == "hill" ? s.bands.hill : s.bands.slope) =
                b.at(key).get<double>();
        }
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) throw SchemaError("output_dir", "must be a string");
        s.output_dir = j.at("output_dir").get<std::string>();
    }
    return s;
}

inline nlohmann::json to_json(const Scenario& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["model"] = s.model_json;
    j["regime"] = {{"kind", to_string(s.claim.kind)}};
    if (s.claim.kind == RegimeKind::s_alpha) j["regime"]["alpha"] = s.claim.alpha;
    j["samples"] = s.samples;
    if (s.excursions) j["excursions"] = s.excursions;
    if (s.recurrence_samples) j["recurrence_samples"] = s.recurrence_samples;
    j["sampler"] = {{"barrier", s.control.barrier}, {"rel_tol", s.control.rel_tol}, {"dt", s.control.dt}};
    if (s.control.remainder_cap) j["sampler"]["remainder_cap"] = *s.control.remainder_cap;
    if (!s.t_grid.empty()) j["t_grid"] = s.t_grid;
    j["tail_levels"] = s.tail_levels;
    if (s.probe_t) j["probe"] = {{"t", *s.probe_t}};
    else j["probe"] = {{"level", s.probe_level}};
    j["bands"] = {{"tail", s.bands.tail}, {"excursion", s.bands.excursion}, {"sup", s.bands.sup},
                  {"ks", s.bands.ks}, {"hill", s.bands.hill}, {"slope", s.bands.slope}};
    if (!s.output_dir.empty()) j["output_dir"] = s.output_dir;
    return j;
}

/// The five built-in scenarios.
inline std::vector<Scenario> list_builtin() {
    const auto make = [](const std::string& name, nlohmann::json model, RegimeClaim claim, std::size_t samples) {
        Scenario s;
        s.name = name;
        s.model_json = std::move(model);
        s.claim = claim;
        s.seed = 20260101;
        s.samples = samples;
        return s;
    };
    std::vector<Scenario> out;
    {
        Scenario s = make("dufresne-theta1", {{"drift", -1.0}, {"gaussian_var", 2.0}}, {RegimeKind::cramer, 0.0}, 100000);
        // E(I) is infinite here (I = 1/Exp(1)); P(I' > 1e9) = 1e-9
        s.control.remainder_cap = 1e9;
        s.t_grid = {2.0, 5.0, 10.0, 20.0, 50.0};
        s.probe_t = 10.0;
        s.bands.tail = {0.85, 1.15};
        out.push_back(s);
    }
    {
        Scenario s = make("dufresne-theta2", {{"drift", -2.0}, {"gaussian_var", 2.0}}, {RegimeKind::cramer, 0.0}, 100000);
        s.t_grid = {5.0, 10.0, 20.0, 50.0};
        s.probe_t = 10.0;
        s.bands.tail = {0.85, 1.15};
        out.push_back(s);
    }
    const nlohmann::json salpha = {
        {"drift", -1.0}, {"jump_rate", 0.5}, {"jump_law", {{"kind", "gamma_exp"}, {"alpha", 2.0}, {"beta", 2.0}}}};
    {
        Scenario s = make("cp-salpha2", salpha, {RegimeKind::s_alpha, 2.0}, 1000000);
        s.excursions = 1000000;
        s.recurrence_samples = 10000;
        s.bands.tail = {0.6, 1.4};
        s.bands.excursion = {0.5, 1.5};
        s.bands.sup = {0.6, 1.4};
        out.push_back(s);
    }
    {
        Scenario s = make("cp-cramer-exp",
                          {{"drift", -1.0}, {"jump_rate", 0.5}, {"jump_law", {{"kind", "exponential"}, {"rate", 1.0}}}},
                          {RegimeKind::cramer, 0.0}, 100000);
        s.excursions = 1000000;
        // psi(1) is undefined; the cap covers all but a 1e-6 fraction of the
        // t^{-1/2} tail of the remainder copy
        s.control.remainder_cap = 1e12;
        s.tail_levels = half_decade_levels(1.0, 3.5);
        s.bands.tail = {0.7, 1.3};
        s.bands.excursion = {0.7, 1.3};
        out.push_back(s);
    }
    {
        Scenario s = make("cp-mz-pareto",
                          {{"drift", -1.0},
                           {"jump_rate", 0.2},
                           {"jump_law", {{"kind", "pareto"}, {"index", 3.0}, {"scale", 1.0}}}},
                          {RegimeKind::subexponential_mz, 0.0}, 1000000);
        s.excursions = 1000000;
        // log I has a tail of order x^{-2}; a deep barrier keeps the dropped
        // remainder e^{xi_tau} I' below the 99.9% quantile except with
        // probability ~ 1 / barrier^2
        s.control.barrier = 150.0;
        s.control.remainder_cap = 1e40;
        s.bands.tail = {0.5, 1.5};
        out.push_back(s);
    }
    return out;
}

inline Scenario builtin_scenario(const std::string& name) {
    for (auto& s : list_builtin())
        if (s.name == name) return s;
    throw SchemaError("name", "no built-in scenario '" + name + "'");
}

struct RunOptions {
    unsigned workers = 0;
    bool force = false;
    bool write_samples = true;
    /// Overrides the scenario's directory; otherwise the scenario's value,
    /// then $EXPFUNC_OUT_DIR, then ./expfunc-out.
    std::string output_dir;
};

struct Verdict {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

struct ReportBundle {
    std::filesystem::path directory;
    std::vector<std::string> files;
    RegimeCertificate certificate;
    std::vector<Verdict> verdicts;
    TailComparison i_tail;
    std::optional<TailComparison> excursion_tail;
    std::optional<TailComparison> sup_tail;
    std::optional<RecurrenceReport> recurrence;
    nlohmann::json summary;

    bool passed() const {
        if (verdicts.empty()) return false;
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

inline std::filesystem::path resolve_output_dir(const Scenario& s, const RunOptions& opts) {
    if (!opts.output_dir.empty()) return opts.output_dir;
    if (!s.output_dir.empty()) return s.output_dir;
    if (const char* env = std::getenv("EXPFUNC_OUT_DIR"); env && *env) return env;
    return "expfunc-out";
}

/// P(I <= x) for Brownian motion with drift b < 0 and variance sigma^2:
/// I has the law of 2 / (sigma^2 Gamma(2 mu / sigma^2, 1)), mu = -b.
inline double dufresne_cdf(const LevyModel& model, double x) {
    if (model.has_jumps() || !model.has_gaussian()) throw UnsupportedModel("dufresne_cdf needs Brownian motion");
    if (x <= 0.0) return 0.0;
    const double s2 = model.gaussian_var();
    const double k = 2.0 * model.infimum_rate() / s2;
    return boost::math::gamma_q(k, 2.0 / (s2 * x));
}

namespace detail {

inline std::vector<std::string> csv_header(const Scenario& s, const std::string& hash, const std::string& what) {
    return {std::string("expfunc ") + kVersion, "scenario " + s.name, "hash " + hash,
            "seed " + std::to_string(s.seed), what};
}

inline bool in_band(double v, const Band& b) { return v >= b[0] && v <= b[1]; }

/// Ratio at the largest grid point with at least `min_count` exceedances.
inline std::optional<std::size_t> deepest_with(const TailComparison& tc, std::uint64_t min_count) {
    std::optional<std::size_t> out;
    for (std::size_t i = 0; i < tc.size(); ++i)
        if (tc.n_exceed[i] >= min_count) out = i;
    return out;
}

inline std::size_t index_of(const TailComparison& tc, double t) {
    for (std::size_t i = 0; i < tc.size(); ++i)
        if (tc.t_grid[i] == t) return i;
    throw DomainError("grid point missing");
}

inline std::vector<double> reported_ratios(const TailComparison& tc, std::uint64_t min_count = kMinTailCount) {
    std::vector<double> r;
    for (const std::size_t i : reported_indices(tc, min_count)) r.push_back(tc.ratio[i]);
    return r;
}

/// Ratios at the `count` grid points ending at index `end`.
inline std::vector<double> trailing_ratios(const TailComparison& tc, std::size_t end, std::size_t count = 3) {
    std::vector<double> r;
    for (std::size_t i = end + 1 >= count ? end + 1 - count : 0; i <= end; ++i) r.push_back(tc.ratio[i]);
    return r;
}

inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace detail

/// Excursion-tail table: y,count,local_time,estimate,ci_lo,ci_hi, followed by
/// asymptote,ratio,ratio_lo,ratio_hi when `cmp` holds a comparison on the
/// same grid (ratio columns blank below the minimum tail count).
inline void write_excursion_csv(std::ostream& os, const ExcursionTailEstimate& est,
                                const std::vector<std::string>& header, const TailComparison* cmp = nullptr) {
    using detail::csv_number;
    for (const auto& h : header) os << "# " << h << '\n';
    const bool with = cmp && cmp->has_asymptote() && cmp->size() == est.y_grid.size();
    os << "y,count,local_time,estimate,ci_lo,ci_hi";
    if (with) os << ",asymptote,ratio,ratio_lo,ratio_hi";
    os << '\n';
    for (std::size_t i = 0; i < est.y_grid.size(); ++i) {
        os << csv_number(est.y_grid[i]) << ',' << est.counts[i] << ',' << csv_number(est.local_time) << ','
           << csv_number(est.estimate[i]) << ',' << csv_number(est.ci_lo[i]) << ',' << csv_number(est.ci_hi[i]);
        if (with) {
            os << ',' << csv_number(cmp->asymptote[i]);
            if (cmp->reported[i])
                os << ',' << csv_number(cmp->ratio[i]) << ',' << csv_number(cmp->ratio_lo[i]) << ','
                   << csv_number(cmp->ratio_hi[i]);
            else
                os << ",,,";
        }
        os << '\n';
    }
}

/// Runs every experiment the scenario supports and writes
/// certificate.csv, samples.csv, tail_compare.csv, excursion_tail.csv,
/// sup_tail.csv, recurrence.csv and summary.json under <dir>/<name>/.
inline ReportBundle run_scenario(const Scenario& s, const RunOptions& opts = {}) {
    namespace fs = std::filesystem;
    const LevyModel model = s.model();
    const std::string hash = scenario_hash(s);
    ReportBundle out;
    out.directory = resolve_output_dir(s, opts) / s.name;
    fs::create_directories(out.directory);
    const auto open = [&](const std::string& file) {
        out.files.push_back((out.directory / file).string());
        std::ofstream os(out.directory / file, std::ios::binary);
        if (!os) throw Error("cannot write " + (out.directory / file).string());
        return os;
    };

    out.certificate = validate_regime(model, s.claim);
    {
        auto os = open("certificate.csv");
        for (const auto& h : detail::csv_header(s, hash, "regime certificate")) os << "# " << h << '\n';
        os << "check,pass,evidence,note\n";
        for (const auto& c : out.certificate.checks) {
            os << c.name << ',' << (c.pass ? 1 : 0) << ',';
            for (std::size_t i = 0; i < c.evidence.size(); ++i)
                os << (i ? ";" : "") << detail::csv_number(c.evidence[i]);
            std::string note = c.note;
            std::replace(note.begin(), note.end(), ',', ';');
            os << ',' << note << '\n';
        }
    }
    out.verdicts.push_back({"regime_certificate", out.certificate.passed(), 0.0, to_string(s.claim.kind)});
    if (!out.certificate.passed() && !opts.force)
        throw CertificateFailure("regime certificate failed for scenario '" + s.name + "' (use --force to run anyway)");

    MomentOptions mopts;
    mopts.seed = s.seed + 1;
    mopts.mc_samples = std::min<std::size_t>(s.samples, 100000);
    mopts.control = s.control;
    mopts.workers = opts.workers;

    const auto draws = sample_exp_functionals(model, s.seed, s.samples, s.control, opts.workers, 0);
    const auto values = values_of(draws);
    if (opts.write_samples) {
        auto os = open("samples.csv");
        for (const auto& h : detail::csv_header(s, hash, "draws of I")) os << "# " << h << '\n';
        os << "sample_index,value,remainder_bound,segments_used,supremum\n";
        os << std::setprecision(17);
        for (std::size_t i = 0; i < draws.size(); ++i)
            os << i << ',' << detail::csv_number17(draws[i].value) << ','
               << detail::csv_number17(draws[i].remainder_bound) << ',' << draws[i].segments_used << ','
               << detail::csv_number17(draws[i].supremum) << '\n';
    }

    nlohmann::json extra = nlohmann::json::object();
    if (!model.has_jumps() && model.has_gaussian()) {
        const double ks = ks_statistic(values, [&](double x) { return dufresne_cdf(model, x); });
        out.verdicts.push_back({"dufresne_ks", ks < s.bands.ks, ks, "KS distance to 2/(sigma^2 Gamma(2 mu/sigma^2))"});
    }

    // tail of I against the regime asymptote
    std::vector<double> grid = s.t_grid.empty() ? quantile_grid(values, s.tail_levels) : s.t_grid;
    double probe = 0.0;
    if (s.probe_t) {
        probe = *s.probe_t;
    } else {
        const auto q = quantile_grid(values, {s.probe_level});
        if (q.empty())
            throw DomainError("probe level " + detail::csv_number(s.probe_level) + " needs at least " +
                              std::to_string(kMinTailCount) + " exceedances; raise the sample count");
        probe = q.front();
    }
    grid.push_back(probe);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::function<double(double)> asymptote;
    switch (s.claim.kind) {
        case RegimeKind::s_alpha: {
            const auto a = theorem1_asymptote(model, s.claim.alpha, mopts);
            extra["theorem1_constant"] = a.constant;
            asymptote = a;
            break;
        }
        case RegimeKind::subexponential_mz: asymptote = mz_asymptote(model); break;
        case RegimeKind::cramer: {
            const auto a = cramer_asymptote(model, mopts);
            extra["cramer_theta"] = a.theta;
            extra["cramer_constant"] = a.constant;
            asymptote = a;
            break;
        }
    }
    out.i_tail = compare(values, asymptote, grid, to_string(s.claim.kind));
    {
        auto os = open("tail_compare.csv");
        write_csv(os, out.i_tail, detail::csv_header(s, hash, "tail of I"));
    }
    {
        const std::size_t i = detail::index_of(out.i_tail, probe);
        const double r = out.i_tail.ratio[i];
        out.verdicts.push_back({"tail_ratio", out.i_tail.reported[i] && detail::in_band(r, s.bands.tail), r,
                                "ratio at t = " + detail::csv_number(probe)});
        if (s.claim.kind != RegimeKind::cramer) {
            const auto rs = detail::trailing_ratios(out.i_tail, i);
            out.verdicts.push_back({"tail_trend", trends_toward(rs, 1.0), rs.empty() ? 0.0 : rs.front(),
                                    "|ratio - 1| non-increasing over the three grid points ending at the probe"});
        } else {
            const auto fit = hill(values);
            const double theta = extra["cramer_theta"].get<double>();
            out.verdicts.push_back({"hill_index", std::abs(fit.estimate - theta) <= s.bands.hill, fit.estimate,
                                    "Hill estimate at k = " + std::to_string(fit.k)});
        }
    }

    if (s.excursions > 0 && model.is_spectrally_positive_cp()) {
        const auto areas = sample_excursion_areas(model, s.seed, s.excursions, opts.workers, 3);
        TailComparison tc = empirical_tail(areas, quantile_grid(areas, s.tail_levels));
        const double rate = model.jump_rate();
        for (std::size_t i = 0; i < tc.size(); ++i) {
            tc.p_hat[i] *= rate;
            tc.ci_lo[i] *= rate;
            tc.ci_hi[i] *= rate;
        }
        const auto deepest50 = [&](const TailComparison& t) { return detail::deepest_with(t, 50); };
        switch (s.claim.kind) {
            case RegimeKind::s_alpha: {
                const auto a = theorem2_asymptote(model, s.claim.alpha, mopts);
                attach_asymptote(tc, a, "theorem2");
                const auto i = deepest50(tc);
                out.verdicts.push_back({"excursion_ratio", i && detail::in_band(tc.ratio[*i], s.bands.excursion),
                                        i ? tc.ratio[*i] : 0.0, "deepest y with >= 50 exceedances"});
                const auto rs = i ? detail::trailing_ratios(tc, *i) : std::vector<double>{};
                out.verdicts.push_back({"excursion_trend", trends_toward(rs, 1.0), rs.empty() ? 0.0 : rs.front(),
                                        "|ratio - 1| non-increasing over the three grid points ending there"});
                break;
            }
            case RegimeKind::cramer: {
                const auto a = theorem3_cramer_asymptote(model, mopts);
                extra["theorem3_constant"] = a.constant;
                extra["mu_h_theta"] = a.mu_h_theta;
                attach_asymptote(tc, a, "theorem3-cramer");
                const auto i = deepest50(tc);
                out.verdicts.push_back({"excursion_ratio", i && detail::in_band(tc.ratio[*i], s.bands.excursion),
                                        i ? tc.ratio[*i] : 0.0, "deepest y with >= 50 exceedances"});
                const auto fit = loglog_ols(areas);
                out.verdicts.push_back({"excursion_loglog_slope", std::abs(-fit.estimate + a.theta) <= s.bands.slope,
                                        -fit.estimate, "OLS slope of log tail over the top decade"});
                break;
            }
            case RegimeKind::subexponential_mz: {
                const Theorem3MzTarget target{model};
                attach_asymptote(
                    tc, [&](double y) { return target.denominator(y); }, "theorem3-mz");
                const auto rs = detail::reported_ratios(tc);
                const bool down = rs.size() >= 2 && rs.back() < rs.front();
                out.verdicts.push_back({"excursion_ratio_decreasing", down, rs.empty() ? 0.0 : rs.back(),
                                        "ratio to the integrated tail decreases along the reported grid"});
                break;
            }
        }
        auto os = open("excursion_tail.csv");
        write_excursion_csv(os, tail_from_areas(areas, rate, tc.t_grid),
                            detail::csv_header(s, hash, "excursion-area tail measure"), &tc);
        out.excursion_tail = std::move(tc);
    }

    if (s.claim.kind == RegimeKind::s_alpha && model.is_spectrally_positive_cp()) {
        const auto sups = suprema_of(draws);
        std::vector<double> sgrid = quantile_grid(sups, s.tail_levels);
        const auto sq = quantile_grid(sups, {s.probe_level});
        if (sq.empty()) throw DomainError("probe level too deep for the supremum sample; raise the sample count");
        const double sprobe = sq.front();
        sgrid.push_back(sprobe);
        std::sort(sgrid.begin(), sgrid.end());
        sgrid.erase(std::unique(sgrid.begin(), sgrid.end()), sgrid.end());
        TailComparison tc = compare(sups, sup_tail_asymptote(model, s.claim.alpha), sgrid, "sup-tail");
        const std::size_t i = detail::index_of(tc, sprobe);
        out.verdicts.push_back({"sup_tail_ratio", tc.reported[i] && detail::in_band(tc.ratio[i], s.bands.sup),
                                tc.ratio[i], "ratio at the probe quantile"});
        const auto rs = detail::trailing_ratios(tc, i);
        out.verdicts.push_back({"sup_tail_trend", trends_toward(rs, 1.0), rs.empty() ? 0.0 : rs.front(),
                                "|ratio - 1| non-increasing over the three grid points ending at the probe"});
        auto os = open("sup_tail.csv");
        write_csv(os, tc, detail::csv_header(s, hash, "tail of the all-time supremum"));
        out.sup_tail = std::move(tc);
    }

    if (s.recurrence_samples > 0 && model.is_spectrally_positive_cp()) {
        const auto rep = verify_random_recurrence(model, s.seed, s.recurrence_samples, 1.0, s.control, opts.workers);
        out.verdicts.push_back({"recurrence_ks", rep.pass, rep.ks_statistic,
                                "threshold " + detail::csv_number(rep.threshold)});
        auto os = open("recurrence.csv");
        for (const auto& h : detail::csv_header(s, hash, "random recurrence I = Q + M I~")) os << "# " << h << '\n';
        os << "n,t_local,ks_statistic,threshold,pass\n";
        os << rep.n << ',' << detail::csv_number(rep.t_local) << ',' << detail::csv_number(rep.ks_statistic) << ','
           << detail::csv_number(rep.threshold) << ',' << (rep.pass ? 1 : 0) << '\n';
        out.recurrence = rep;
    }

    nlohmann::json& j = out.summary;
    j["version"] = kVersion;
    j["scenario"] = to_json(s);
    j["hash"] = hash;
    j["certificate"] = out.certificate.to_json();
    j["constants"] = extra;
    j["verdicts"] = nlohmann::json::array();
    for (const auto& v : out.verdicts)
        j["verdicts"].push_back(
            {{"name", v.name}, {"pass", v.pass}, {"value", detail::finite_or_null(v.value)}, {"detail", v.detail}});
    j["tail_ratios"] = nlohmann::json::array();
    for (std::size_t i = 0; i < out.i_tail.size(); ++i)
        j["tail_ratios"].push_back({{"t", out.i_tail.t_grid[i]},
                                    {"ratio", detail::finite_or_null(out.i_tail.ratio[i])},
                                    {"reported", static_cast<bool>(out.i_tail.reported[i])}});
    j["passed"] = out.passed();
    out.files.push_back((out.directory / "summary.json").string());
    std::ofstream(out.directory / "summary.json", std::ios::binary) << j.dump(2) << '\n';
    return out;
}

}  // namespace expfunc
