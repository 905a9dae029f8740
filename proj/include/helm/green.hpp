#pragma once

#include "helm/assembly.hpp"
#include "helm/problem.hpp"

#include <optional>
#include <vector>

namespace helm {

/// mantissa * exp(log_scale); keeps products of many factors representable.
struct Scaled {
    cplx mantissa = 1.0;
    double log_scale = 0.0;

    cplx value() const;
    double log_abs() const;
};

struct GammaQ {
    cplx gt_plus, gt_minus; // tilde quantities
    cplx g_plus, g_minus;   // phase-adjusted quantities
    cplx q;                 // g_minus / g_plus
    cplx q_tilde;           // gt_minus / gt_plus
};

/// 1 <= l <= n. Throws Error(gamma_plus_vanished) when |gt_plus| < 1e-300.
GammaQ gamma_q(const ProblemSpec& spec, int l);

struct BetaSequence {
    std::vector<Scaled> beta_tilde;  // l = 0..n, real-form iteration
    std::vector<Scaled> beta;        // l = 0..n, complex iteration with phase-adjusted gammas
    std::vector<GammaQ> gamma;       // l = 1..n, stored at index l-1
    std::vector<double> log_wprod;   // log prod_{k<=l} i w^{1,2}_{k+1,k+1,k}, l = 0..n
    std::optional<std::vector<Scaled>> beta_m0; // specialised d = 3, m = 0 path
    double m0_deviation = 0.0;       // max relative gap between beta and beta_m0

    int n() const { return static_cast<int>(beta.size()) - 1; }

    /// e^{i z_l / c_{l+1}} beta_l, recovered from beta_tilde_l and the interface Wronskian product.
    Scaled phased_beta(int l) const;
};

struct BetaOptions {
#ifdef NDEBUG
    bool cross_check = false;
#else
    bool cross_check = true;
#endif
};

BetaSequence beta_sequence(const ProblemSpec& spec, const BetaOptions& opt = {});

struct RealPair {
    double R, I;
    double log_scale;
};

/// (beta^R, beta^I) through the 2x2 real step matrices built from theta and phi.
std::vector<RealPair> beta_real_recursion(const ProblemSpec& spec);

/// Step matrix of the real linear recursion at index l.
std::array<std::array<double, 2>, 2> beta_step_matrix(const ProblemSpec& spec, int l);

struct GreenColumn {
    std::vector<cplx> odd_entries;  // (M^Green)_{2l-1,2n}, l = 1..n
    std::vector<cplx> even_entries; // (M^Green)_{2l,2n}
    std::vector<double> odd_log_abs;
    std::vector<double> even_log_abs;
    double log_abs_beta_n = 0.0;
};

inline constexpr double near_resonance_threshold = 1e-250;

/// Throws Error(near_resonant) with |beta_n| as magnitude when |beta_n| < threshold.
GreenColumn green_last_column(const ProblemSpec& spec, double threshold = near_resonance_threshold);

/// f1(kappa_NN) g / (omega w^{1,2}_{NNN}).
cplx rhs_scale(const ProblemSpec& spec);

/// B_N from the boundary condition.
cplx boundary_coefficient_bn(const ProblemSpec& spec);

CoefficientVector layer_coefficients(const ProblemSpec& spec, double threshold = near_resonance_threshold);

} // namespace helm
