#pragma once

#include "helm/green.hpp"
#include "helm/problem.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace helm {

inline constexpr double majorant_c0 = 20.0;

struct RefinedEntry {
    int l;
    double z;
    double im_phased; // Im(e^{i z_l / c_{l+1}} beta_l)
    double ratio;     // |im_phased| / z_l^3
    double s_frak;    // Re beta_l - 1
    double t_frak;    // -Im beta_l - z_l / c_{l+1}
};

struct RefinedCheck {
    std::vector<RefinedEntry> entries;
    double fitted_exponent = 0.0;   // min over l of the slope of log|Im| vs log z
    double s_exponent = 0.0;        // same fit for s_frak
    double t_exponent = 0.0;        // same fit for t_frak
    bool applicable = false;        // false when no index lies in the window
};

struct GrowthLaw {
    std::vector<double> predicted_odd_log, observed_odd_log;
    std::vector<double> predicted_even_log, observed_even_log;
    double max_odd_log_gap = 0.0;
    double max_even_log_gap = 0.0;
};

struct StabilityReport {
    std::vector<double> beta_moduli;
    std::vector<double> beta_log_moduli;
    bool per_step_ok = true;
    std::vector<int> per_step_violations;
    bool majorant_ok = true;
    std::vector<int> majorant_violations;
    double alpha_fit = 1.0; // max_l |beta_l|^{+-1} = alpha^omega
    RefinedCheck refined;
    GrowthLaw growth;
    bool growth_available = false;

    int violations() const
    {
        return static_cast<int>(per_step_violations.size() + majorant_violations.size());
    }
};

/// True when c_{j+2} = c_j for every j (two alternating values, possibly equal).
bool is_alternating(const WaveSpeedProfile& profile);

/// Per-step and two-step majorant inequalities; d = 3, m = 0, alternating speeds.
StabilityReport certify_beta_bounds(const ProblemSpec& spec);

/// C_1 = max{1, c_max} / c_min^2.
double refined_c1(const WaveSpeedProfile& profile);

/// Indices with omega x_l / c_min < 1 / (4 C_1), rescanned at omega/2 and omega/4.
RefinedCheck refined_small_z_check(const ProblemSpec& spec);

/// Closed-form magnitudes against green_last_column; throws Error(not_in_interference).
GrowthLaw green_growth_law(const ProblemSpec& spec);

struct SweepRow {
    std::uint64_t seed;
    int n;
    double q;
    double omega;
    double max_beta;
    double min_beta;
    int violations;
};

/// Deterministic alternating spec: c = (1, (1+q)/(1-q), ...), uniform sorted jumps.
ProblemSpec random_alternating_spec(std::uint64_t seed, double q_max = 0.8, int n_max = 40, double omega_max = 60.0);

SweepRow sweep_row(std::uint64_t seed, const ProblemSpec& spec);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// certify_beta_bounds over random_alternating_spec(seed_base + i), i < count; parallel over specs.
std::vector<SweepRow> beta_sweep(std::uint64_t seed_base, int count);

struct WhisperResult {
    int m;
    double omega_star;
    double w_min;   // |W_m(omega*)|
    cplx A1, A2, B1, B2;
    ProblemSpec spec; // n = 1 configuration at omega*
};

/// W_m(omega) = w^{1,2}_{m,2,1,1} for the single-jump profile.
cplx whisper_wronskian(int m, double c1, double c2, double x1, double omega);

/// Default window around the lowest interface resonance: omega x1 / c1 in [m + 1/2, m + 2.5 m^{1/3} + 1].
std::pair<double, double> default_whisper_window(int m, double c1, double x1);

/// Grid minimisation of |W_m| plus golden-section polish; throws Error(window_too_coarse) on a boundary minimum.
WhisperResult whispering_gallery_scan(int m, double c1, double c2, double x1, std::pair<double, double> window,
                                      int samples, cplx g = 1.0);

std::string to_json(const StabilityReport& report);
std::string to_json(const WhisperResult& result);

} // namespace helm
