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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Output directories go under $EXPFUNC_OUT_DIR (default
// ./acceptance-out). All tolerances are fixed below.

#include "expfunc/ladder.hpp"
#include "expfunc/path.hpp"
#include "expfunc/scenario.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace expfunc;

namespace {

// criterion 1
constexpr double kKsBound = 0.02;
constexpr double kDufresneMinutes = 5.0;
// criterion 2
constexpr double kCramerBand[2] = {0.85, 1.15};
constexpr double kHillHalfWidth = 0.15;
// criterion 3
constexpr double kExactTol = 1e-12;
constexpr double kSeMultiple = 3.0;
constexpr std::size_t kMomentSamples = 20000;
// criterion 4
constexpr double kIdentityTol = 1e-9;
constexpr double kHandTol = 1e-12;
// criterion 5, 9, 10
constexpr double kSalphaBand[2] = {0.6, 1.4};
constexpr double kMzBand[2] = {0.5, 1.5};
constexpr double kSalphaMinutes = 30.0;
// criterion 6
constexpr double kExcursionBand[2] = {0.5, 1.5};
constexpr std::uint64_t kExcursionMinCount = 50;
// criterion 7
constexpr double kSlopeHalfWidth = 0.1;
constexpr double kStabilityBand[2] = {0.7, 1.3};
// criterion 11
constexpr std::size_t kRecurrenceN = 10000;

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
    std::printf("%s  %2d  %s :: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void note(const std::string& text) {
    std::printf("          %s\n", text.c_str());
    std::fflush(stdout);
}

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s + "]";
}

bool in(double v, const double (&band)[2]) { return v >= band[0] && v <= band[1]; }

const Verdict* find(const ReportBundle& b, const std::string& name) {
    for (const auto& v : b.verdicts)
        if (v.name == name) return &v;
    return nullptr;
}

bool verdict_pass(const ReportBundle& b, const std::string& name) {
    const auto* v = find(b, name);
    return v && v->pass;
}

double verdict_value(const ReportBundle& b, const std::string& name) {
    const auto* v = find(b, name);
    return v ? v->value : std::nan("");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path out_root() {
    if (const char* env = std::getenv("EXPFUNC_OUT_DIR"); env && *env) return env;
    return "acceptance-out";
}

struct Timed {
    ReportBundle bundle;
    double seconds;
};

Timed run(const Scenario& s, const std::string& subdir, unsigned workers = 0) {
    RunOptions opts;
    opts.workers = workers;
    opts.output_dir = (out_root() / subdir).string();
    const auto t0 = std::chrono::steady_clock::now();
    auto b = run_scenario(s, opts);
    return {std::move(b), seconds_since(t0)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ratios of the reported comparison points
std::vector<double> reported(const TailComparison& tc) {
    std::vector<double> r;
    for (std::size_t i = 0; i < tc.size(); ++i)
        if (tc.reported[i]) r.push_back(tc.ratio[i]);
    return r;
}

void describe_tail(const TailComparison& tc, const std::string& what) {
    std::vector<double> t, r;
    for (std::size_t i = 0; i < tc.size(); ++i)
        if (tc.reported[i]) {
            t.push_back(tc.t_grid[i]);
            r.push_back(tc.ratio[i]);
        }
    note(what + " grid " + list(t) + " ratios " + list(r));
}

// criteria 1 and 2
void dufresne() {
    const Scenario s = builtin_scenario("dufresne-theta2");
    const LevyModel m = s.model();
    const auto [b, secs] = run(s, "dt-1e-3");
    const double ks = verdict_value(b, "dufresne_ks");

    Scenario fine = s;
    fine.control.dt = 5e-4;
    const auto draws = values_of(sample_exp_functionals(m, s.seed, s.samples, fine.control));
    const double ks_fine = ks_statistic(draws, [&](double x) { return dufresne_cdf(m, x); });
    report(1, "Dufresne law, KS to 1/Gamma(2,1)", ks < kKsBound && ks_fine <= ks && secs <= kDufresneMinutes * 60.0,
           "KS(dt=1e-3) = " + num(ks) + " (< " + num(kKsBound) + "), KS(dt=5e-4) = " + num(ks_fine) +
               " (non-increasing), run " + num(secs, 3) + " s");

    // P(I > t) = P(Gamma(2) < 1/t) exactly
    const auto exact_ratio = [](double t) { return boost::math::gamma_p(2.0, 1.0 / t) / (0.5 / (t * t)); };
    const TailComparison& tc = b.i_tail;
    const double r10 = verdict_value(b, "tail_ratio");
    bool consistent = true;
    std::string ci;
    for (double t : {5.0, 20.0, 50.0}) {
        const std::size_t i = detail::index_of(tc, t);
        const double e = exact_ratio(t);
        const bool ok = tc.ratio_lo[i] <= e && e <= tc.ratio_hi[i];
        consistent = consistent && ok;
        ci += " t=" + num(t) + ": [" + num(tc.ratio_lo[i]) + ", " + num(tc.ratio_hi[i]) + "] vs exact " + num(e) +
              (tc.reported[i] ? "" : " (count " + std::to_string(tc.n_exceed[i]) + " < 20)") + ";";
    }
    const double hill_index = verdict_value(b, "hill_index");
    report(2, "Cramer asymptote C t^-theta, C = 0.5, theta = 2",
           in(r10, kCramerBand) && consistent && std::abs(hill_index - 2.0) <= kHillHalfWidth,
           "ratio(t=10) = " + num(r10) + ", Hill = " + num(hill_index) + ", C = " +
               num(b.summary["constants"]["cramer_constant"].get<double>(), 12));
    note("ratio CI against the exact finite-t ratio:" + ci);
    // population value of the Hill functional at the same 5% level under the
    // exact law: 1 / E(log(I / q) | I > q) with P(I > q) = 0.05
    const auto sf = [](double t) { return boost::math::gamma_p(2.0, 1.0 / t); };
    const double q = 1.0 / boost::math::gamma_p_inv(2.0, 0.05);
    const double mean_log = boost::math::quadrature::exp_sinh<double>().integrate(
                                [&](double u) { return sf(q + u) / (q + u); }) / 0.05;
    note("Hill functional of the exact law at k = 5% of N: " + num(1.0 / mean_log));
}

// criterion 3
void moments() {
    const LevyModel m = LevyModel::brownian(-3.0, 2.0);
    // I = 1 / Gamma(3, 1): E(I^g) = Gamma(3 - g) / Gamma(3)
    const auto oracle = [](double g) { return std::tgamma(3.0 - g) / 2.0; };
    const double e1 = moment(m, 1.0).value;
    const double e2 = moment(m, 2.0).value;
    bool pass = std::abs(e1 - oracle(1.0)) <= kExactTol && std::abs(e2 - oracle(2.0)) <= kExactTol;
    pass = pass && std::abs(moment_product(m, 2) - moment_recursion(m, 0.0, 1.0, 2)) <= kExactTol;
    MomentOptions opts;
    opts.seed = 3;
    opts.mc_samples = kMomentSamples;
    const auto draws = values_of(sample_exp_functionals(m, opts.seed, opts.mc_samples, opts.control));
    std::string detail = "E I = " + num(e1, 15) + ", E I^2 = " + num(e2, 15) + ";";
    // direct Monte Carlo only where the variance is finite (2 gamma < 3)
    for (double g : {-1.0, 0.5, 1.0}) {
        const auto est = mc_moment(draws, g);
        const double target = g == -1.0 ? moment_inverse(m) : oracle(g);
        const bool ok = std::abs(est.mean - target) <= kSeMultiple * est.standard_error;
        pass = pass && ok;
        detail += " MC E I^" + num(g) + " = " + num(est.mean, 6) + " +- " + num(est.standard_error, 2) + " vs " +
                  num(target, 6) + ";";
    }
    const auto frac = moment(m, 1.5, opts);
    const bool ok = std::abs(frac.value - oracle(1.5)) <= kSeMultiple * frac.standard_error;
    pass = pass && ok && moment_inverse(m) == 3.0;
    detail += " recursion E I^1.5 = " + num(frac.value, 6) + " +- " + num(frac.standard_error, 2) + " vs " +
              num(oracle(1.5), 6);
    report(3, "moment recursion, product formula, E(1/I) = mu", pass, detail);
}

// criterion 4
void pathwise() {
    const LevyModel m = LevyModel::compound_poisson(-1.0, 0.5, JumpLaw::exponential(1.0));
    double worst = 0.0;
    double worst_rel = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        RandomStream rng(404, i);
        const auto p = sample_path(m, rng, 50.0);
        const auto d = extract_ladder(p);
        std::vector<double> grid;
        for (int k = 0; k <= 64; ++k) grid.push_back(d.total_local_time() * k / 64.0);
        const double err = verify_pathwise_identity(p, d, grid);
        worst = std::max(worst, err);
        worst_rel = std::max(worst_rel, err / integrate_exp(p, p.horizon));
    }
    PathSkeleton hand;
    hand.drift = -1.0;
    hand.horizon = 2.0;
    hand.jump_times = {1.0};
    hand.jump_sizes = {1.0};
    const auto d = extract_ladder(hand);
    const double lhs = integrate_exp(hand, d.inverse_local_time(1.0));
    const double rhs = d.y_integral(1.0);
    const double target = 2.0 * (1.0 - std::exp(-1.0));
    const double hand_err = std::max(std::abs(lhs - target), std::abs(rhs - target));
    report(4, "pathwise ladder identity", worst < kIdentityTol && hand_err < kHandTol,
           "max error over 1000 paths = " + num(worst, 3) + ", two-segment path error = " + num(hand_err, 3));
    note("max error relative to int_0^50 e^xi ds: " + num(worst_rel, 3));
}

// criteria 5, 6, 10, 11
void salpha() {
    const Scenario s = builtin_scenario("cp-salpha2");
    const LevyModel m = s.model();
    const auto [b, secs] = run(s, "w-default");
    const double r = verdict_value(b, "tail_ratio");
    report(5, "Theorem 1 ratio at the 99.9th percentile", in(r, kSalphaBand) && verdict_pass(b, "tail_trend") &&
                                                              secs <= kSalphaMinutes * 60.0,
           "ratio = " + num(r) + " in [0.6, 1.4]: " + (in(r, kSalphaBand) ? "yes" : "no") +
               ", trend toward 1: " + (verdict_pass(b, "tail_trend") ? "yes" : "no") + ", run " + num(secs, 3) + " s");
    describe_tail(b.i_tail, "I tail");

    const auto t1 = theorem1_asymptote(m, 2.0);
    const auto t2 = theorem2_asymptote(m, 2.0);
    double worst = 0.0;
    for (double y : {1.5, 10.0, 1e3, 1e6}) worst = std::max(worst, std::abs(t2(y) / t1(y) - 2.0));
    const auto& ex = *b.excursion_tail;
    const auto deep = detail::deepest_with(ex, kExcursionMinCount);
    const double er = deep ? ex.ratio[*deep] : std::nan("");
    report(6, "Theorem 2 excursion-area ratio",
           deep && in(er, kExcursionBand) && verdict_pass(b, "excursion_trend") && worst <= kExactTol,
           "ratio = " + num(er) + " at y = " + (deep ? num(ex.t_grid[*deep]) : "-") +
               ", trend toward 1: " + (verdict_pass(b, "excursion_trend") ? "yes" : "no") +
               ", |Theorem2/Theorem1 - d alpha| = " + num(worst, 3));
    describe_tail(ex, "excursion tail");

    const auto sup = sup_tail_asymptote(m, 2.0);
    const double sr = verdict_value(b, "sup_tail_ratio");
    report(10, "supremum tail phi_h(0)/phi_h(-alpha)^2 Pi(t, inf)",
           in(sr, kSalphaBand) && verdict_pass(b, "sup_tail_trend"),
           "ratio = " + num(sr) + ", trend toward 1: " + (verdict_pass(b, "sup_tail_trend") ? "yes" : "no") +
               ", constant = " + num(sup.constant, 8));
    describe_tail(*b.sup_tail, "sup tail");
    const double scale = sup.constant / sup.ladder_constant;
    note("same data against the ladder-height constant " + num(sup.ladder_constant, 8) + ": ratios " +
         list([&] {
             auto v = reported(*b.sup_tail);
             for (double& x : v) x *= scale;
             return v;
         }()));

    const auto rec = *b.recurrence;
    report(11, "random recurrence I = Q + M I~", rec.n == kRecurrenceN && rec.pass,
           "n = " + std::to_string(rec.n) + ", KS = " + num(rec.ks_statistic) + " < threshold " + num(rec.threshold) +
               ", max M = " + num(rec.max_m));
}

// criterion 7
void cramer_excursions() {
    const Scenario s = builtin_scenario("cp-cramer-exp");
    const auto [b, secs] = run(s, "w-default");
    const auto& ex = *b.excursion_tail;
    const double slope = verdict_value(b, "excursion_loglog_slope");
    const double mu_h = b.summary["constants"]["mu_h_theta"].get<double>();
    // y^theta Pi_Y(y) against the constant over the top decade of tail
    // probability: the last three half-decade points with >= 50 exceedances
    const auto idx = reported_indices(ex, kExcursionMinCount);
    std::vector<double> top;
    for (std::size_t k = idx.size() >= 3 ? idx.size() - 3 : 0; k < idx.size(); ++k) top.push_back(ex.ratio[idx[k]]);
    bool stable = top.size() == 3;
    for (double r : top) stable = stable && in(r, kStabilityBand);
    report(7, "Theorem 3(ii) excursion power law",
           std::abs(slope + 0.5) <= kSlopeHalfWidth && stable && std::abs(mu_h - 2.0) <= 1e-9,
           "log-log slope = " + num(slope) + ", mu_h = " + num(mu_h, 10) + ", y^0.5 Pi_Y / constant over the top decade " +
               list(top));
}

// criteria 8 and 9
void mz() {
    const Scenario s = builtin_scenario("cp-mz-pareto");
    const auto [b, secs] = run(s, "w-default");
    const auto& ex = *b.excursion_tail;
    // top two decades of tail probability: the last five half-decade points
    const auto idx = reported_indices(ex);
    std::vector<double> ys, rs;
    for (std::size_t k = idx.size() >= 5 ? idx.size() - 5 : 0; k < idx.size(); ++k) {
        ys.push_back(ex.t_grid[idx[k]]);
        rs.push_back(ex.ratio[idx[k]]);
    }
    bool decreasing = rs.size() == 5;
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) decreasing = decreasing && rs[i + 1] < rs[i];
    report(8, "Theorem 3(i) excursion ratio to the integrated tail decreases", decreasing,
           "y " + list(ys) + " ratios " + list(rs));

    const double r = verdict_value(b, "tail_ratio");
    report(9, "MZ ratio at the 99.9th percentile", in(r, kMzBand) && verdict_pass(b, "tail_trend"),
           "ratio = " + num(r) + ", trend toward 1: " + (verdict_pass(b, "tail_trend") ? "yes" : "no"));
    describe_tail(b.i_tail, "I tail");
}

// criterion 12
void reproducibility() {
    bool same = true;
    std::string detail;
    for (const std::string name : {"cp-salpha2", "cp-cramer-exp", "cp-mz-pareto"}) {
        Scenario s = builtin_scenario(name);
        // rerun of the criterion 5-9 scenarios with three workers, compared with the default run
        const auto [b, secs] = run(s, "w3", 3);
        std::size_t files = 0;
        for (const auto& f : b.files) {
            const fs::path other = out_root() / "w-default" / name / fs::path(f).filename();
            if (fs::path(f).extension() != ".csv") continue;
            ++files;
            if (slurp(f) != slurp(other)) {
                same = false;
                detail += " differs: " + name + "/" + fs::path(f).filename().string() + ";";
            }
        }
        detail += " " + name + ": " + std::to_string(files) + " CSV files;";
    }
    report(12, "byte-identical CSVs across worker counts", same, detail);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::pair<const char*, std::function<void()>> steps[] = {
        {"dufresne", dufresne}, {"moments", moments}, {"pathwise", pathwise}, {"salpha", salpha},
        {"cramer", cramer_excursions}, {"mz", mz}, {"reproducibility", reproducibility},
    };
    for (const auto& [name, step] : steps) {
        try {
            step();
        } catch (const std::exception& e) {
            ++failures;
            std::printf("FAIL  --  %s aborted: %s\n", name, e.what());
        }
    }
    std::printf("%d criteria failed, %.0f s\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
