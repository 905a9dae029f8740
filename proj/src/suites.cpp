#include "helm/suites.hpp"

#include "helm/assembly.hpp"
#include "helm/error.hpp"
#include "helm/evaluate.hpp"
#include "helm/green.hpp"
#include "helm/io.hpp"
#include "helm/series_oracle.hpp"
#include "helm/stability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

namespace helm {

namespace {

constexpr int oracle_seed_base = 1000;
constexpr int det_seed_base = 2000;
constexpr int wbeta_seed_base = 3000;

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double rel(cplx a, cplx b)
{
    double const den = std::abs(b);
    return den == 0.0 ? std::abs(a) : std::abs(a - b) / den;
}

std::vector<int> figure_sizes() { return {2, 4, 8, 16}; }

RadialSolution solve(const ProblemSpec& s) { return {s, layer_coefficients(s)}; }

struct Outcome {
    bool passed;
    std::string detail;
};

// 1. Recursion-based coefficients against the direct interface solve.
Outcome oracle_equivalence()
{
    double worst = 0.0;
    int failures = 0;
    std::string first;
    for (int i = 0; i < 200; ++i) {
        ProblemSpec const s = random_oracle_spec(oracle_seed_base + i);
        try {
            CoefficientVector const rec = layer_coefficients(s);
            CoefficientVector const ref = reference_solve(s);
            double e = rel(rec.BN, ref.BN);
            for (std::size_t k = 0; k < ref.entries.size(); ++k) e = std::max(e, rel(rec.entries[k], ref.entries[k]));
            worst = std::max(worst, e);
            if (!(e <= 1e-9)) {
                ++failures;
                if (first.empty()) first = fmt(" first seed %.0f", oracle_seed_base + i);
            }
        } catch (const Error& err) {
            ++failures;
            if (first.empty()) first = std::string(" error: ") + err.what();
        }
    }
    return {failures == 0, "200 specs, max rel " + fmt("%.3g", worst) + ", failures " + std::to_string(failures) + first};
}

// 2. Determinant via the W recursion against dense elimination.
Outcome determinant_identity()
{
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        ProblemSpec const s = random_oracle_spec(det_seed_base + i, 10);
        BlockSystem const sys = normalize(assemble_raw(s));
        cplx const direct = lu_determinant(to_dense(sys));
        worst = std::max(worst, rel(determinant_recursion(s), direct));
    }
    return {worst <= 1e-9, "50 specs, max rel " + fmt("%.3g", worst)};
}

// 3. W_{n,1} = (-1)^n beta~_n and W_{n,2} = -(conj beta~_n - (-1)^n beta~_n) / 2.
Outcome w_beta_identity()
{
    double w1 = 0.0, w2 = 0.0;
    for (int i = 0; i < 50; ++i) {
        ProblemSpec const s = random_oracle_spec(wbeta_seed_base + i, 10);
        int const n = s.n();
        auto const W = w_sequence(s);
        BetaOptions opt;
        opt.cross_check = false;
        cplx const bt = beta_sequence(s, opt).beta_tilde[n].value();
        double const sign = n % 2 == 0 ? 1.0 : -1.0;
        w1 = std::max(w1, rel(W[n][0], sign * bt));
        w2 = std::max(w2, rel(W[n][1], -(std::conj(bt) - sign * bt) / 2.0));
    }
    return {w1 <= 1e-12 && w2 <= 1e-12, fmt("50 specs, max rel W1 %.3g, W2 %.3g", w1, w2)};
}

// 4. Localisation peaks, c1 = 1, c2 = 3, g = 1.
Outcome figure_one()
{
    double const expected[] = {0.85, 2.5, 22.0, 1850.0};
    double const tol[] = {0.10, 0.10, 0.10, 0.15};
    bool ok = true;
    std::string detail;
    auto const sizes = figure_sizes();
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        double const sup = radial_sup(solve(construct_localisation_example(sizes[k], 1.0, 3.0))) * y00();
        double const dev = std::abs(sup - expected[k]) / expected[k];
        ok = ok && dev <= tol[k];
        detail += "n=" + std::to_string(sizes[k]) + fmt(" sup %.4g (dev %.1f%%) ", sup, 100 * dev);
    }
    return {ok, detail};
}

// 5. Stable family: flat sup level and unit-modulus odd Green entries.
Outcome stable_plateau()
{
    double lo = INFINITY, hi = 0.0, odd_dev = 0.0;
    for (int n : figure_sizes()) {
        ProblemSpec const s = construct_stable_example(n, 1.0, 3.0);
        double const sup = radial_sup(solve(s)) * y00();
        lo = std::min(lo, sup);
        hi = std::max(hi, sup);
        for (double la : green_last_column(s).odd_log_abs) odd_dev = std::max(odd_dev, std::abs(std::expm1(la)));
    }
    double const spread = (hi - lo) / lo;
    double const level = std::abs(hi - 0.28) / 0.28;
    bool const ok = spread < 0.05 && odd_dev <= 1e-9 && level <= 0.15;
    return {ok, fmt("spread %.3g, level %.5g", spread, hi) + fmt(", max ||odd|-1| %.3g", odd_dev)};
}

// 6. Odd Green entries against 3^{ceil(n/2) - floor(l/2)}.
Outcome growth_law()
{
    double gap = 0.0;
    std::string detail = "max |log observed - log predicted| per n:";
    for (int n : {2, 4, 8, 16, 30}) {
        ProblemSpec const s = construct_localisation_example(n, 1.0, 3.0);
        GrowthLaw const g = green_growth_law(s);
        double gn = g.max_odd_log_gap;
        for (int l = 1; l <= n; ++l) {
            double const predicted = ((n + 1) / 2 - l / 2) * std::log(3.0);
            gn = std::max(gn, std::abs(predicted - g.observed_odd_log[l - 1]));
        }
        gap = std::max(gap, gn);
        detail += " n=" + std::to_string(n) + fmt(" %.3g (even %.3g)", gn, g.max_even_log_gap);
    }
    return {gap <= 1e-9, detail};
}

// 7. Energy against the localisation lower bound.
Outcome energy_lower()
{
    bool ok = true;
    std::string detail;
    for (int n : {2, 4, 8}) {
        ProblemSpec const s = construct_localisation_example(n, 1.0, 3.0);
        EnergyResult const e = energy_norm_adaptive(solve(s));
        double const bound = energy_lower_bound(s).value_or(NAN);
        ok = ok && e.converged && e.value >= bound;
        detail += "n=" + std::to_string(n) + fmt(" energy %.4g vs bound %.4g; ", e.value, bound);
    }
    return {ok, detail};
}

// 8. Per-step and majorant inequalities over random alternating specs.
Outcome beta_bounds()
{
    int total = 0, specs = 0;
    for (auto const& row : beta_sweep(beta_sweep_seed_base, 500)) {
        total += row.violations;
        specs += row.violations > 0;
    }
    return {total == 0, "500 specs, " + std::to_string(total) + " violations in " + std::to_string(specs) + " specs"};
}

ProblemSpec refined_profile()
{
    ProblemSpec s;
    s.omega = 10.0;
    s.profile.jump_points = {0.0, 0.002, 0.004, 0.007, 0.01, 0.3, 0.6, 1.0};
    s.profile.speeds = {1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0};
    return s;
}

// 9. Small-argument scaling of Im(e^{iz/c} beta).
Outcome refined_scaling()
{
    RefinedCheck const r = refined_small_z_check(refined_profile());
    bool const ok = r.applicable && r.fitted_exponent >= 2.8;
    return {ok, std::to_string(r.entries.size()) + " indices in window" +
                    fmt(", fitted exponent %.4g (s %.3g", r.fitted_exponent, r.s_exponent) +
                    fmt(", t %.3g)", r.t_exponent)};
}

// 10. Special-function identities and series comparison.
Outcome specfun_battery()
{
    double h0 = 0.0, h0p = 0.0, series = 0.0, wr = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        double const x = 0.1 * i;
        h0 = std::max(h0, std::abs(x * std::abs(spherical_hankel_h1(0, x)) - 1.0));
        cplx const d = fundamental_eval({3, 0}, 1, x).derivative;
        double const target = 1.0 / (x * x) + 1.0 / (x * x * x * x);
        h0p = std::max(h0p, std::abs(std::norm(d) - target) / target);
    }
    for (int m = 0; m <= 20; ++m)
        for (double x : {0.05, 0.3, 0.7, 1.0, 2.5, 5.0, 7.3, 10.0, 13.7, 17.0, 20.0, 24.4, 27.0, 30.0}) {
            double const jo = oracle::j(m, x), yo = oracle::y(m, x);
            series = std::max({series, std::abs(spherical_bessel_j(m, x) - jo) / std::abs(jo),
                               std::abs(spherical_bessel_y(m, x) - yo) / std::abs(yo)});
        }
    for (int m = 0; m <= 10; ++m)
        for (double r : {0.1, 0.5, 1.0, 3.0, 10.0, 25.0, 50.0}) {
            auto const p = fundamental_real_parts({3, m}, r);
            wr = std::max(wr, std::abs(r * r * (p.J * p.Yp - p.Jp * p.Y) - 1.0));
        }
    bool const ok = h0 <= 1e-13 && h0p <= 1e-12 && series <= 1e-11 && wr <= 1e-12;
    return {ok, fmt("x|h0|-1 %.3g, |h0'|^2 %.3g", h0, h0p) + fmt(", series %.3g, Wronskian %.3g", series, wr)};
}

// 11. Residuals of every solve performed by criteria 1-7.
Outcome residual_suite()
{
    std::vector<ProblemSpec> specs;
    for (int i = 0; i < 200; ++i) specs.push_back(random_oracle_spec(oracle_seed_base + i));
    for (int n : {2, 4, 8, 16, 30}) specs.push_back(construct_localisation_example(n, 1.0, 3.0));
    for (int n : figure_sizes()) specs.push_back(construct_stable_example(n, 1.0, 3.0));

    double iface = 0.0, ode = 0.0, dtn = 0.0;
    for (auto const& s : specs) {
        RadialSolution const sol = solve(s);
        for (auto const& r : interface_residuals(sol)) iface = std::max({iface, r.value_jump, r.derivative_jump});
        ode = std::max(ode, ode_residual(sol));
        dtn = std::max(dtn, dtn_residual(sol));
    }
    bool const ok = iface <= 1e-9 && ode <= 1e-9 && dtn <= 1e-9;
    return {ok, std::to_string(specs.size()) + " solves" + fmt(", interface %.3g, ODE %.3g", iface, ode) +
                    fmt(", DtN %.3g", dtn)};
}

// 12. |B_{m,1}| at the lowest resonance grows with m.
Outcome whispering_gallery()
{
    double prev = 0.0;
    bool ok = true;
    std::string detail;
    for (int m : {5, 10, 15, 20}) {
        WhisperResult const r = whispering_gallery_scan(m, 1.0, 2.0, 0.5, default_whisper_window(m, 1.0, 0.5), 2001);
        double const b = std::abs(r.B1);
        ok = ok && b > prev;
        prev = b;
        detail += "m=" + std::to_string(m) + fmt(" w*=%.5g |B1|=%.4g; ", r.omega_star, b);
    }
    return {ok, detail};
}

struct Entry {
    const char* name;
    double budget; // seconds, 0 when unbudgeted
    Outcome (*run)();
};

const Entry entries[criterion_count] = {
    {"oracle equivalence", 10.0, oracle_equivalence},
    {"determinant identity", 2.0, determinant_identity},
    {"W-beta identity", 0.0, w_beta_identity},
    {"localisation peaks", 5.0, figure_one},
    {"stable plateau", 0.0, stable_plateau},
    {"Green growth law", 0.0, growth_law},
    {"energy lower bound", 0.0, energy_lower},
    {"beta bound certification", 5.0, beta_bounds},
    {"refined small-z scaling", 0.0, refined_scaling},
    {"special-function battery", 0.0, specfun_battery},
    {"residual suite", 0.0, residual_suite},
    {"whispering-gallery growth", 0.0, whispering_gallery},
};

} // namespace

ProblemSpec random_oracle_spec(std::uint64_t seed, int n_max)
{
    std::mt19937_64 rng(seed);
    ProblemSpec s;
    s.d = std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? 1 : 3;
    s.m = s.d == 3 ? std::uniform_int_distribution<int>(0, 5)(rng) : 0;
    int const n = std::uniform_int_distribution<int>(1, n_max)(rng);
    s.omega = std::uniform_real_distribution<double>(1.0, 50.0)(rng);
    std::uniform_real_distribution<double> c_dist(0.5, 4.0), x_dist(0.0, 1.0);
    for (int j = 0; j <= n; ++j) s.profile.speeds.push_back(c_dist(rng));
    std::vector<double> x;
    while (true) {
        x.clear();
        for (int j = 0; j < n; ++j) x.push_back(x_dist(rng));
        std::sort(x.begin(), x.end());
        bool ok = x.front() > 1e-6 && x.back() < 1.0 - 1e-6;
        for (int j = 1; j < n && ok; ++j) ok = x[j] - x[j - 1] > 1e-6;
        if (ok) break;
    }
    s.profile.jump_points = {0.0};
    s.profile.jump_points.insert(s.profile.jump_points.end(), x.begin(), x.end());
    s.profile.jump_points.push_back(1.0);
    return s;
}

CriterionResult run_criterion(int id)
{
    CriterionResult res;
    res.id = id;
    if (id < 1 || id > criterion_count) {
        res.name = "unknown";
        res.detail = "no such criterion";
        return res;
    }
    Entry const& e = entries[id - 1];
    res.name = e.name;
    auto const t0 = std::chrono::steady_clock::now();
    try {
        Outcome const o = e.run();
        res.passed = o.passed;
        res.detail = o.detail;
    } catch (const std::exception& ex) {
        res.passed = false;
        res.detail = std::string("exception: ") + ex.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e.budget > 0.0) {
        res.detail += fmt(" [%.2fs of %.0fs budget]", res.seconds, e.budget);
        if (res.seconds >= e.budget) res.passed = false;
    }
    return res;
}

std::vector<int> suite_criteria(const std::string& suite)
{
    if (suite == "oracle") return {1, 2, 3, 11};
    if (suite == "bounds") return {6, 7, 8, 9};
    if (suite == "figures") return {4, 5};
    if (suite == "specfun") return {10};
    if (suite == "whisper") return {12};
    if (suite == "all") {
        std::vector<int> all(criterion_count);
        for (int i = 0; i < criterion_count; ++i) all[i] = i + 1;
        return all;
    }
    throw Error(ErrorKind::validation, "unknown suite '" + suite + "'");
}

std::string criteria_json(const std::string& suite, const std::vector<CriterionResult>& results)
{
    nlohmann::json j = nlohmann::json::object();
    j["suite"] = suite;
    bool all = true;
    nlohmann::json list = nlohmann::json::array();
    for (auto const& r : results) {
        all = all && r.passed;
        list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    j["criteria"] = list;
    j["passed"] = all;
    return dump_json(j);
}

} // namespace helm
