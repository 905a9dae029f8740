#include "helm/stability.hpp"

#include "helm/assembly.hpp"
#include "helm/error.hpp"
#include "helm/io.hpp"
#include "helm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace helm {

namespace {

constexpr double rel_slack = 1e-12;
constexpr cplx I{0.0, 1.0};

void require_m0_ball(const ProblemSpec& spec, const char* what)
{
    require_valid(spec);
    if (spec.d != 3 || spec.m != 0)
        throw Error(ErrorKind::unsupported_mode, std::string(what) + " requires d = 3, m = 0");
}

// Least-squares slope of log y against log x.
double log_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    int const k = static_cast<int>(x.size());
    for (int i = 0; i < k; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= k;
    my /= k;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < k; ++i) {
        double const dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ProblemSpec with_omega(ProblemSpec s, double omega)
{
    s.omega = omega;
    return s;
}

} // namespace

bool is_alternating(const WaveSpeedProfile& profile)
{
    for (int j = 1; j + 2 <= profile.layers(); ++j)
        if (std::abs(profile.c(j + 2) - profile.c(j)) > rel_slack * profile.c(j)) return false;
    return true;
}

StabilityReport certify_beta_bounds(const ProblemSpec& spec)
{
    require_m0_ball(spec, "certify_beta_bounds");
    if (!is_alternating(spec.profile))
        throw Error(ErrorKind::inapplicable_profile, "speeds do not alternate between two values");

    BetaOptions opt;
    opt.cross_check = false;
    BetaSequence const seq = beta_sequence(spec, opt);
    auto const q = relative_jumps(spec.profile);
    int const n = spec.n();

    StabilityReport rep;
    double worst = 0.0;
    for (int l = 0; l <= n; ++l) {
        double const lg = seq.beta[l].log_abs();
        rep.beta_log_moduli.push_back(lg);
        rep.beta_moduli.push_back(std::exp(lg));
        worst = std::max(worst, std::abs(lg));
    }
    rep.alpha_fit = std::exp(worst / spec.omega);

    for (int l = 1; l <= n; ++l) {
        double const ql = q[l - 1];
        double const step = rep.beta_log_moduli[l] - rep.beta_log_moduli[l - 1];
        double const lo = std::log((1.0 - std::abs(ql)) / (1.0 + ql));
        double const hi = std::log((1.0 + std::abs(ql)) / (1.0 + ql));
        if (step < lo - rel_slack || step > hi + rel_slack) rep.per_step_violations.push_back(l);
    }

    double const qa = n >= 1 ? std::abs(q[0]) : 0.0;
    double const c0 = majorant_c0 * qa / ((1.0 - qa * qa) * (1.0 - qa * qa));
    for (int l = 2; l <= n; l += 2) {
        double const growth = 2.0 * (rep.beta_log_moduli[l] - rep.beta_log_moduli[l - 2]);
        double const bound = std::log1p(c0 * std::min(spec.delta(l), 1.0));
        if (growth > bound + rel_slack) rep.majorant_violations.push_back(l);
    }
    rep.per_step_ok = rep.per_step_violations.empty();
    rep.majorant_ok = rep.majorant_violations.empty();

    rep.refined = refined_small_z_check(spec);
    if (is_localisation_interference(spec)) {
        rep.growth = green_growth_law(spec);
        rep.growth_available = true;
    }
    return rep;
}

double refined_c1(const WaveSpeedProfile& profile)
{
    double const cmin = profile.c_min();
    return std::max(1.0, profile.c_max()) / (cmin * cmin);
}

RefinedCheck refined_small_z_check(const ProblemSpec& spec)
{
    require_m0_ball(spec, "refined_small_z_check");
    double const limit = 1.0 / (4.0 * refined_c1(spec.profile));
    double const cmin = spec.profile.c_min();
    std::vector<int> window;
    for (int l = 1; l <= spec.n(); ++l)
        if (spec.z(l) / cmin < limit) window.push_back(l);

    RefinedCheck out;
    if (window.empty()) return out;
    out.applicable = true;

    BetaOptions opt;
    opt.cross_check = false;
    double const scales[] = {1.0, 0.5, 0.25};
    std::vector<std::vector<RefinedEntry>> rows; // rows[k][i] at scale k
    for (double s : scales) {
        ProblemSpec const scaled = with_omega(spec, spec.omega * s);
        BetaSequence const seq = beta_sequence(scaled, opt);
        std::vector<RefinedEntry> row;
        for (int l : window) {
            double const z = scaled.z(l);
            double const im = seq.phased_beta(l).value().imag();
            cplx const beta = seq.beta[l].value();
            row.push_back({l, z, im, std::abs(im) / (z * z * z), beta.real() - 1.0,
                           -beta.imag() - z / scaled.profile.c(l + 1)});
        }
        rows.push_back(std::move(row));
    }
    out.entries = rows[0];

    out.fitted_exponent = out.s_exponent = out.t_exponent = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < window.size(); ++i) {
        std::vector<double> zs, im, sf, tf;
        for (auto const& row : rows) {
            zs.push_back(row[i].z);
            im.push_back(std::abs(row[i].im_phased));
            sf.push_back(std::abs(row[i].s_frak));
            tf.push_back(std::abs(row[i].t_frak));
        }
        auto fit = [&](const std::vector<double>& y) {
            // An identically vanishing quantity satisfies any power bound.
            if (std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; }))
                return std::numeric_limits<double>::infinity();
            return log_slope(zs, y);
        };
        out.fitted_exponent = std::min(out.fitted_exponent, fit(im));
        out.s_exponent = std::min(out.s_exponent, fit(sf));
        out.t_exponent = std::min(out.t_exponent, fit(tf));
    }
    return out;
}

GrowthLaw green_growth_law(const ProblemSpec& spec)
{
    require_valid(spec);
    if (!is_localisation_interference(spec))
        throw Error(ErrorKind::not_in_interference, "spec is not in localisation interference");
    auto const q = relative_jumps(spec.profile);
    int const n = spec.n();
    GreenColumn const col = green_last_column(spec);

    // suffix[l] = sum_{k=l}^{n} log((1+q_k) / (1 - (-1)^{k-1} q_k)).
    std::vector<double> suffix(n + 2, 0.0);
    for (int k = n; k >= 1; --k) {
        double const sign = (k % 2 == 1) ? 1.0 : -1.0;
        suffix[k] = suffix[k + 1] + std::log((1.0 + q[k - 1]) / (1.0 - sign * q[k - 1]));
    }

    GrowthLaw g;
    for (int l = 1; l <= n; ++l) {
        g.predicted_odd_log.push_back(suffix[l]);
        g.observed_odd_log.push_back(col.odd_log_abs[l - 1]);
        g.max_odd_log_gap = std::max(g.max_odd_log_gap, std::abs(suffix[l] - col.odd_log_abs[l - 1]));

        double const phase = spec.z(l) / spec.profile.c(l + 1) + l * std::numbers::pi / 2;
        double const factor = std::abs(std::sin(phase));
        double const pe = std::log(factor) + suffix[l + 1];
        g.predicted_even_log.push_back(pe);
        g.observed_even_log.push_back(col.even_log_abs[l - 1]);
        // Near-zero factors carry no relative information; compare those in absolute terms.
        if (factor > 1e-6)
            g.max_even_log_gap = std::max(g.max_even_log_gap, std::abs(pe - col.even_log_abs[l - 1]));
        else
            g.max_even_log_gap = std::max(g.max_even_log_gap,
                                          std::abs(std::exp(pe) - std::exp(col.even_log_abs[l - 1])) /
                                              std::exp(suffix[l + 1]));
    }
    return g;
}

ProblemSpec random_alternating_spec(std::uint64_t seed, double q_max, int n_max, double omega_max)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> n_dist(1, n_max);
    std::uniform_real_distribution<double> q_dist(-q_max, q_max), w_dist(1.0, omega_max), x_dist(0.0, 1.0);
    int const n = n_dist(rng);
    double const q = q_dist(rng);
    ProblemSpec s;
    s.omega = w_dist(rng);
    double const c2 = (1.0 + q) / (1.0 - q);
    for (int j = 0; j <= n; ++j) s.profile.speeds.push_back(j % 2 == 0 ? 1.0 : c2);

    std::vector<double> x;
    while (true) {
        x.clear();
        for (int j = 0; j < n; ++j) x.push_back(x_dist(rng));
        std::sort(x.begin(), x.end());
        bool ok = x.front() > 1e-6 && x.back() < 1.0 - 1e-6;
        for (int j = 1; j < n && ok; ++j) ok = x[j] - x[j - 1] > 1e-6;
        if (ok) break;
    }
    s.profile.jump_points.push_back(0.0);
    s.profile.jump_points.insert(s.profile.jump_points.end(), x.begin(), x.end());
    s.profile.jump_points.push_back(1.0);
    return s;
}

SweepRow sweep_row(std::uint64_t seed, const ProblemSpec& spec)
{
    StabilityReport const rep = certify_beta_bounds(spec);
    auto const [lo, hi] = std::minmax_element(rep.beta_moduli.begin(), rep.beta_moduli.end());
    return {seed, spec.n(), relative_jumps(spec.profile).front(), spec.omega, *hi, *lo, rep.violations()};
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::ostringstream os;
    os << "seed,n,q,omega,max_beta,min_beta,violations\n";
    for (auto const& r : rows)
        os << r.seed << ',' << r.n << ',' << format_double(r.q) << ',' << format_double(r.omega) << ','
           << format_double(r.max_beta) << ',' << format_double(r.min_beta) << ',' << r.violations << '\n';
    return os.str();
}

std::vector<SweepRow> beta_sweep(std::uint64_t seed_base, int count)
{
    std::vector<SweepRow> rows(std::max(count, 0));
    parallel_for(count, [&](int i) {
        std::uint64_t const seed = seed_base + static_cast<std::uint64_t>(i);
        rows[i] = sweep_row(seed, random_alternating_spec(seed));
    });
    return rows;
}

cplx whisper_wronskian(int m, double c1, double c2, double x1, double omega)
{
    return wronskian_w({3, m}, 1, 2, c2, c1, omega * x1);
}

std::pair<double, double> default_whisper_window(int m, double c1, double x1)
{
    double const lo = m + 0.5;
    double const hi = m + 2.5 * std::cbrt(static_cast<double>(m)) + 1.0;
    return {c1 * lo / x1, c1 * hi / x1};
}

WhisperResult whispering_gallery_scan(int m, double c1, double c2, double x1, std::pair<double, double> window,
                                      int samples, cplx g)
{
    if (m < 1 || !(c1 > 0) || !(c2 > c1) || !(x1 > 0 && x1 < 1) || samples < 3 ||
        !(window.first > 0 && window.second > window.first))
        throw Error(ErrorKind::validation, "whispering-gallery parameters out of range");

    auto mag = [&](double w) { return std::abs(whisper_wronskian(m, c1, c2, x1, w)); };
    double const step = (window.second - window.first) / (samples - 1);
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        double const v = mag(window.first + i * step);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best == 0 || best == samples - 1)
        throw Error(ErrorKind::window_too_coarse, "minimum of |W_m| on the window boundary",
                    window.first + best * step);

    // Golden-section polish inside the bracketing grid cells.
    double a = window.first + (best - 1) * step, b = window.first + (best + 1) * step;
    double const r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x = b - r * (b - a), y = a + r * (b - a);
    double fx = mag(x), fy = mag(y);
    for (int it = 0; it < 200 && b - a > 1e-14 * b; ++it) {
        if (fx < fy) {
            b = y;
            y = x;
            fy = fx;
            x = b - r * (b - a);
            fx = mag(x);
        } else {
            a = x;
            x = y;
            fx = fy;
            y = a + r * (b - a);
            fy = mag(y);
        }
    }
    double const omega = fx < fy ? x : y;

    WhisperResult res;
    res.m = m;
    res.omega_star = omega;
    FundamentalPair const pair{3, m};
    double const z = omega * x1;
    cplx const w12 = wronskian_w(pair, 1, 2, c2, c1, z);
    cplx const w22 = wronskian_w(pair, 2, 2, c2, c1, z);
    cplx const h = spherical_hankel_h1(m, omega / c2);
    res.w_min = std::abs(w12);
    res.A1 = 0.0;
    res.B2 = I * omega / c2 * h * g;
    res.A2 = -res.B2 * w22 / w12;
    res.B1 = h / (x1 * x1 * omega * w12) * g;

    res.spec.d = 3;
    res.spec.m = m;
    res.spec.omega = omega;
    res.spec.g = g;
    res.spec.profile.jump_points = {0.0, x1, 1.0};
    res.spec.profile.speeds = {c1, c2};
    return res;
}

std::string to_json(const StabilityReport& r)
{
    nlohmann::json j = nlohmann::json::object();
    j["beta_moduli"] = r.beta_moduli;
    j["per_step_ok"] = r.per_step_ok;
    j["per_step_violations"] = r.per_step_violations;
    j["majorant_ok"] = r.majorant_ok;
    j["majorant_violations"] = r.majorant_violations;
    j["alpha_fit"] = r.alpha_fit;
    nlohmann::json refined = nlohmann::json::array();
    for (auto const& e : r.refined.entries)
        refined.push_back({{"l", e.l}, {"z", e.z}, {"ratio", e.ratio}, {"s", e.s_frak}, {"t", e.t_frak}});
    j["refined_ratio"] = refined;
    j["refined_exponent"] = r.refined.applicable ? nlohmann::json(r.refined.fitted_exponent) : nlohmann::json(nullptr);
    if (r.growth_available) {
        j["green_growth_predicted"] = r.growth.predicted_odd_log;
        j["green_growth_observed"] = r.growth.observed_odd_log;
    } else {
        j["green_growth_predicted"] = nlohmann::json::array();
        j["green_growth_observed"] = nlohmann::json::array();
    }
    return dump_json(j);
}

std::string to_json(const WhisperResult& r)
{
    auto c = [](cplx v) { return nlohmann::json::array({v.real(), v.imag()}); };
    nlohmann::json j = nlohmann::json::object();
    j["m"] = r.m;
    j["omega_star"] = r.omega_star;
    j["abs_w"] = r.w_min;
    j["A1"] = c(r.A1);
    j["A2"] = c(r.A2);
    j["B1"] = c(r.B1);
    j["B2"] = c(r.B2);
    j["abs_B1"] = std::abs(r.B1);
    return dump_json(j);
}

} // namespace helm
