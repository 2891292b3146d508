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


// expfunc: command-line front end. Randomized verbs need --seed; CSV goes
// to --out or stdout. Exit status: 0 when every verdict passes, 1 when a
// verdict fails, 2 for invalid input, 3 for other errors.

#include "expfunc/asymptotes.hpp"
#include "expfunc/ladder.hpp"
#include "expfunc/model_io.hpp"
#include "expfunc/moments.hpp"
#include "expfunc/path.hpp"
#include "expfunc/regime.hpp"
#include "expfunc/scenario.hpp"
#include "expfunc/tailstats.hpp"
#include "expfunc/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace expfunc;
using nlohmann::json;

constexpr int kPass = 0;
constexpr int kVerdictFailed = 1;
constexpr int kBadInput = 2;
constexpr int kFailure = 3;

json read_json_arg(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') return json::parse(arg);
    std::ifstream is(arg);
    if (!is) throw SchemaError("model", "cannot open '" + arg + "'");
    return json::parse(is);
}

// --model accepts a JSON file, inline JSON, or builtin:<scenario>.
json model_json_arg(const std::string& arg) {
    if (arg.rfind("builtin:", 0) == 0) return builtin_scenario(arg.substr(8)).model_json;
    return read_json_arg(arg);
}

struct Common {
    std::string model;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 100000;
    unsigned workers = 0;
    std::string out;
    double barrier = 25.0;
    double rel_tol = 1e-6;
    double dt = 1e-3;
    std::optional<double> remainder_cap;

    SamplerControl control() const {
        SamplerControl c;
        c.barrier = barrier;
        c.rel_tol = rel_tol;
        c.dt = dt;
        c.remainder_cap = remainder_cap;
        return c;
    }
    std::uint64_t require_seed() const {
        if (!seed) throw SchemaError("seed", "--seed is required for randomized verbs");
        return *seed;
    }
    LevyModel load() const { return model_from_json(model_json_arg(model)); }
};

void add_model(CLI::App* app, Common& c) { app->add_option("--model", c.model, "model JSON file, inline JSON, or builtin:<scenario>")->required(); }

void add_sampling(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "seed (required)");
    app->add_option("--samples", c.samples, "number of draws")->check(CLI::PositiveNumber);
    app->add_option("--workers", c.workers, "worker threads (0: hardware concurrency)");
    app->add_option("--barrier", c.barrier, "barrier spacing B")->check(CLI::PositiveNumber);
    app->add_option("--rel-tol", c.rel_tol, "relative truncation tolerance")->check(CLI::PositiveNumber);
    app->add_option("--dt", c.dt, "Euler step for the Gaussian part")->check(CLI::PositiveNumber);
    app->add_option("--remainder-cap", c.remainder_cap, "R-hat, the remainder cap")->check(CLI::PositiveNumber);
}

void add_out(CLI::App* app, Common& c) { app->add_option("--out", c.out, "output file (default stdout)"); }

template <class F>
void emit(const Common& c, F&& writer) {
    if (c.out.empty()) {
        writer(std::cout);
        return;
    }
    std::ofstream os(c.out, std::ios::binary);
    if (!os) throw Error("cannot write " + c.out);
    writer(os);
}

std::vector<std::string> header(const Common& c, const std::string& what) {
    std::vector<std::string> h{std::string("expfunc ") + kVersion, what};
    if (c.seed) h.push_back("seed " + std::to_string(*c.seed));
    return h;
}

std::vector<double> grid_or_quantiles(const std::vector<double>& grid, const std::vector<double>& samples) {
    return grid.empty() ? quantile_grid(samples, half_decade_levels(1.0, 4.0)) : grid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential functionals of Levy processes: sampling, tail asymptotes and diagnostics"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Common c;
    int status = kPass;
    std::vector<double> gammas;
    std::vector<double> grid;
    std::string regime = "s-alpha";
    double alpha = 0.0;
    double horizon = 50.0;
    double t_local = 1.0;
    bool force = false;
    bool no_samples = false;
    std::optional<std::size_t> override_samples;
    std::string scenario_arg;

    auto* model_cmd = app.add_subcommand("model", "model utilities")->require_subcommand(1);
    auto* model_validate = model_cmd->add_subcommand("validate", "parse a model and print its normalized form");
    add_model(model_validate, c);
    model_validate->callback([&] {
        const LevyModel m = c.load();
        json j = to_json(m);
        j["spectrally_positive_cp"] = m.is_spectrally_positive_cp();
        const MomentDomain d = m.exp_moment_domain();
        j["exp_moment_domain"] = {{"upper", d.upper == kInf ? json("inf") : json(d.upper)},
                                  {"upper_closed", d.upper_closed}};
        try {
            j["mean_increment"] = m.mean_increment();
        } catch (const MomentError&) {
            j["mean_increment"] = nullptr;
        }
        if (d.contains(1.0)) j["psi_1"] = m.laplace_exponent(1.0);
        std::cout << j.dump(2) << '\n';
    });

    auto* simulate = app.add_subcommand("simulate", "draw samples of I as CSV");
    add_model(simulate, c);
    add_sampling(simulate, c);
    add_out(simulate, c);
    simulate->callback([&] {
        const LevyModel m = c.load();
        const auto draws = sample_exp_functionals(m, c.require_seed(), c.samples, c.control(), c.workers);
        emit(c, [&](std::ostream& os) {
            for (const auto& h : header(c, "draws of I")) os << "# " << h << '\n';
            os << "sample_index,value,remainder_bound,segments_used,supremum\n";
            for (std::size_t i = 0; i < draws.size(); ++i)
                os << i << ',' << detail::csv_number17(draws[i].value) << ','
                   << detail::csv_number17(draws[i].remainder_bound) << ',' << draws[i].segments_used << ','
                   << detail::csv_number17(draws[i].supremum) << '\n';
        });
    });

    auto* moments = app.add_subcommand("moments", "E(I^gamma) by product formula, recursion or Monte Carlo");
    add_model(moments, c);
    add_sampling(moments, c);
    moments->add_option("--gamma", gammas, "orders")->required();
    moments->callback([&] {
        const LevyModel m = c.load();
        MomentOptions o;
        o.control = c.control();
        o.mc_samples = c.samples;
        o.workers = c.workers;
        if (c.seed) o.seed = *c.seed;
        json arr = json::array();
        for (const double g : gammas) {
            const MomentResult r = moment(m, g, o);
            if ((r.method == MomentMethod::mc_direct || r.method == MomentMethod::recursion_with_mc_base) && !c.seed)
                throw SchemaError("seed", "--seed is required when a moment needs Monte Carlo");
            arr.push_back({{"gamma", g}, {"value", r.value}, {"method", to_string(r.method)},
                           {"standard_error", r.standard_error}});
        }
        std::cout << arr.dump(2) << '\n';
    });

    auto* cramer = app.add_subcommand("cramer", "Cramer root theta and the constant of P(I > t) ~ C t^-theta");
    add_model(cramer, c);
    add_sampling(cramer, c);
    cramer->callback([&] {
        const LevyModel m = c.load();
        const double theta = cramer_root(m);
        json j = {{"theta", theta}, {"psi_prime_theta", m.laplace_exponent_derivative(theta)}};
        MomentOptions o;
        o.control = c.control();
        o.mc_samples = c.samples;
        o.workers = c.workers;
        if (c.seed) o.seed = *c.seed;
        const double order = theta - 1.0;
        const bool exact = order == 0.0 || order == -1.0 || (order > 0.0 && order == std::floor(order));
        if (exact || c.seed) {
            const auto a = cramer_asymptote(m, o);
            j["constant"] = a.constant;
            j["moment_method"] = to_string(a.moment.method);
            j["constant_standard_error"] = a.moment.standard_error / a.psi_slope;
        } else {
            j["constant"] = nullptr;
            j["note"] = "E(I^{theta-1}) needs Monte Carlo; pass --seed";
        }
        std::cout << j.dump(2) << '\n';
    });

    auto* validate = app.add_subcommand("validate", "regime certificate for a claimed tail regime");
    add_model(validate, c);
    validate->add_option("--regime", regime, "s-alpha | mz | cramer")->required();
    validate->add_option("--alpha", alpha, "alpha of the S_alpha claim");
    validate->callback([&] {
        const LevyModel m = c.load();
        const RegimeCertificate cert = validate_regime(m, {regime_from_string(regime), alpha});
        std::cout << cert.to_json().dump(2) << '\n';
        if (!cert.passed()) status = kVerdictFailed;
    });

    auto* tail = app.add_subcommand("tail-compare", "empirical tail of I against the regime asymptote");
    add_model(tail, c);
    add_sampling(tail, c);
    add_out(tail, c);
    tail->add_option("--regime", regime, "s-alpha | mz | cramer")->required();
    tail->add_option("--alpha", alpha, "alpha of the S_alpha claim");
    tail->add_option("--t-grid", grid, "evaluation points (default: half-decade quantiles)");
    tail->add_flag("--force", force, "run even if the regime certificate fails");
    tail->callback([&] {
        const LevyModel m = c.load();
        const RegimeKind kind = regime_from_string(regime);
        const RegimeCertificate cert = validate_regime(m, {kind, alpha});
        if (!cert.passed() && !force) {
            std::cerr << cert.to_json().dump(2) << '\n';
            throw CertificateFailure("regime certificate failed (use --force to run anyway)");
        }
        if (!cert.passed()) status = kVerdictFailed;
        const std::uint64_t seed = c.require_seed();
        const auto values = values_of(sample_exp_functionals(m, seed, c.samples, c.control(), c.workers));
        MomentOptions o;
        o.seed = seed + 1;
        o.control = c.control();
        o.mc_samples = std::min<std::size_t>(c.samples, 100000);
        o.workers = c.workers;
        std::function<double(double)> asym;
        if (kind == RegimeKind::s_alpha) asym = theorem1_asymptote(m, alpha, o);
        else if (kind == RegimeKind::cramer) asym = cramer_asymptote(m, o);
        else asym = mz_asymptote(m);
        const TailComparison tc = compare(values, asym, grid_or_quantiles(grid, values), to_string(kind));
        emit(c, [&](std::ostream& os) { write_csv(os, tc, header(c, "tail of I")); });
    });

    auto* ladder = app.add_subcommand("ladder", "ladder decomposition tools")->require_subcommand(1);
    auto* ladder_verify = ladder->add_subcommand("verify", "pathwise identity int_0^{L^-1} e^xi = int e^{-h-hat} dY");
    add_model(ladder_verify, c);
    add_sampling(ladder_verify, c);
    ladder_verify->add_option("--horizon", horizon, "path horizon")->check(CLI::PositiveNumber);
    ladder_verify->callback([&] {
        const LevyModel m = c.load();
        require_spectrally_positive(m, "ladder verify");
        const std::uint64_t seed = c.require_seed();
        const auto errors = parallel_map(c.samples, c.workers, [&](std::size_t i) {
            RandomStream rng(seed, i);
            const PathSkeleton path = sample_path(m, rng, horizon);
            const LadderDecomposition d = extract_ladder(path);
            std::vector<double> u_grid;
            const double total = d.total_local_time();
            for (int k = 1; k <= 16; ++k) u_grid.push_back(total * k / 16.0);
            return verify_pathwise_identity(path, d, u_grid);
        });
        const double worst = *std::max_element(errors.begin(), errors.end());
        const bool pass = worst < 1e-9;
        std::cout << json{{"paths", c.samples}, {"horizon", horizon}, {"max_error", worst}, {"pass", pass}}.dump(2)
                  << '\n';
        if (!pass) status = kVerdictFailed;
    });

    auto* excursion = app.add_subcommand("excursion", "excursion-area tools")->require_subcommand(1);
    auto* excursion_tail = excursion->add_subcommand("tail", "estimate the Levy tail of Y (excursion areas)");
    add_model(excursion_tail, c);
    add_sampling(excursion_tail, c);
    add_out(excursion_tail, c);
    excursion_tail->add_option("--y-grid,--ygrid", grid, "evaluation points (default: half-decade quantiles)");
    excursion_tail->add_option("--n", c.samples, "number of excursions (same as --samples)")
        ->check(CLI::PositiveNumber);
    excursion_tail->callback([&] {
        const LevyModel m = c.load();
        const auto areas = sample_excursion_areas(m, c.require_seed(), c.samples, c.workers);
        const auto est = tail_from_areas(areas, m.jump_rate(), grid_or_quantiles(grid, areas));
        emit(c, [&](std::ostream& os) { write_excursion_csv(os, est, header(c, "excursion-area tail measure")); });
    });

    auto* sup = app.add_subcommand("sup-tail", "tail of the all-time supremum against the S_alpha asymptote");
    add_model(sup, c);
    add_sampling(sup, c);
    add_out(sup, c);
    sup->add_option("--alpha", alpha, "alpha of the S_alpha claim")->required();
    sup->add_option("--x-grid", grid, "evaluation points (default: half-decade quantiles)");
    sup->callback([&] {
        const LevyModel m = c.load();
        const auto sups = suprema_of(sample_exp_functionals(m, c.require_seed(), c.samples, c.control(), c.workers));
        const TailComparison tc =
            compare(sups, sup_tail_asymptote(m, alpha), grid_or_quantiles(grid, sups), "sup-tail");
        emit(c, [&](std::ostream& os) { write_csv(os, tc, header(c, "tail of the all-time supremum")); });
    });

    auto* recurrence = app.add_subcommand("recurrence-check", "two-sample KS test of I against Q + M I~");
    add_model(recurrence, c);
    add_sampling(recurrence, c);
    recurrence->add_option("--t-local", t_local, "local time of the recurrence step")->check(CLI::PositiveNumber);
    recurrence->callback([&] {
        const LevyModel m = c.load();
        const auto rep = verify_random_recurrence(m, c.require_seed(), c.samples, t_local, c.control(), c.workers);
        std::cout << json{{"n", rep.n},          {"t_local", rep.t_local}, {"ks_statistic", rep.ks_statistic},
                          {"threshold", rep.threshold}, {"max_m", rep.max_m},     {"pass", rep.pass}}
                         .dump(2)
                  << '\n';
        if (!rep.pass) status = kVerdictFailed;
    });

    auto* report = app.add_subcommand("report", "run a scenario and write its CSVs and summary.json");
    report->add_option("scenario", scenario_arg, "built-in name or scenario JSON file")->required();
    report->add_option("--out-dir", c.out, "output directory (default $EXPFUNC_OUT_DIR or ./expfunc-out)");
    report->add_option("--seed", c.seed, "override the scenario seed");
    report->add_option("--samples", override_samples, "override the sample sizes");
    report->add_option("--workers", c.workers, "worker threads (0: hardware concurrency)");
    report->add_flag("--force", force, "run even if the regime certificate fails");
    report->add_flag("--no-samples", no_samples, "skip samples.csv");
    report->callback([&] {
        Scenario s;
        bool builtin = false;
        for (const auto& b : list_builtin())
            if (b.name == scenario_arg) {
                s = b;
                builtin = true;
            }
        if (!builtin) s = scenario_from_json(read_json_arg(scenario_arg));
        if (c.seed) s.seed = *c.seed;
        if (override_samples) {
            s.samples = *override_samples;
            if (s.excursions) s.excursions = *override_samples;
            if (s.recurrence_samples) s.recurrence_samples = std::min(s.recurrence_samples, *override_samples);
        }
        RunOptions o;
        o.workers = c.workers;
        o.force = force;
        o.write_samples = !no_samples;
        o.output_dir = c.out;
        const ReportBundle b = run_scenario(s, o);
        for (const auto& v : b.verdicts)
            std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << " = " << v.value << "  (" << v.detail << ")\n";
        std::cout << "summary: " << (b.directory / "summary.json").string() << '\n';
        if (!b.passed()) status = kVerdictFailed;
    });

    auto* list = app.add_subcommand("list", "list the built-in scenarios");
    list->callback([&] {
        json arr = json::array();
        for (const auto& s : list_builtin()) arr.push_back(to_json(s));
        std::cout << arr.dump(2) << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kBadInput;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kBadInput;
    } catch (const json::exception& e) {
        std::cerr << "invalid JSON: " << e.what() << '\n';
        return kBadInput;
    } catch (const CertificateFailure& e) {
        std::cerr << e.what() << '\n';
        return kVerdictFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return status;
}
