#pragma once

#include "helm/assembly.hpp"
#include "helm/problem.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace helm {

/// u(r) = A_j f1(omega r / c_j) + B_j f2(omega r / c_j) on layer j.
struct RadialSolution {
    ProblemSpec spec;
    CoefficientVector coeffs;
};

/// Value and r-derivative using layer j's ansatz (j is 1-based, r may lie on either end of the layer).
ValueDeriv eval_in_layer(const RadialSolution& sol, int j, double r);

/// Left-limit convention at jump points; r = 0 uses the regular branch only.
ValueDeriv eval_radial(const RadialSolution& sol, double r);

struct InterfaceResidual {
    double value_jump;
    double derivative_jump;
};

/// Jumps of the value and r-derivative at each interior x_j, relative to max(1, summed size of the ansatz terms).
std::vector<InterfaceResidual> interface_residuals(const RadialSolution& sol);

/// Max over Chebyshev collocation points of the radial ODE defect, relative to the summed size of its terms.
double ode_residual(const RadialSolution& sol, int samples_per_layer = 16);

double dtn_residual(const RadialSolution& sol);

/// Fixed-order Gauss-Legendre; each layer is split into panels spanning at most pi in omega r / c_j.
double energy_norm(const RadialSolution& sol, int quad_order);

struct EnergyResult {
    double value;
    int order;
    bool converged;
};

/// Doubles the order from `start_order` until two successive values agree to `tol`.
EnergyResult energy_norm_adaptive(const RadialSolution& sol, int start_order = 32, double tol = 1e-10,
                                  int max_order = 1024);

/// Closed-form majorant for d = 3, m = 0; throws Error(unsupported_mode) otherwise.
double energy_upper_bound(const RadialSolution& sol);

/// sqrt(pi^2 - 4)/4 ((1+q)/(1-q))^ceil(n/2) |g| for localisation-interference specs with d = 3, m = 0.
std::optional<double> energy_lower_bound(const ProblemSpec& spec);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order);

/// (4 pi)^{-1/2}.
double y00();

/// Max of |u(r)| over a uniform radial grid, refined around the best sample.
double radial_sup(const RadialSolution& sol, int samples = 4001);

struct DiscSlice {
    int grid = 0;
    std::vector<double> coords;  // grid values in [-1, 1]
    std::vector<double> abs_u;   // row-major [iy * grid + ix], NaN outside the unit disc
    double sup = 0.0;
};

/// |u(r) Y_00| on a grid x grid lattice of [-1,1]^2; d = 3, m = 0 only.
DiscSlice disc_slice(const RadialSolution& sol, int grid);

struct DiagnosticsReport {
    std::vector<InterfaceResidual> interface;
    double max_interface = 0.0;
    double ode = 0.0;
    double dtn = 0.0;
    double energy = 0.0;
    int energy_order = 0;
    bool energy_converged = false;
    std::optional<double> energy_upper;
    std::optional<double> energy_lower;
    std::optional<double> sup_norm; // sup |u Y_00|, d = 3, m = 0
    double residual_threshold = 1e-9;

    bool residuals_pass() const;
};

DiagnosticsReport diagnose(const RadialSolution& sol, int quad_order = 32);

std::string to_json(const DiagnosticsReport& report);
std::string radial_csv(const RadialSolution& sol, int samples);
std::string disc_csv(const DiscSlice& slice);

} // namespace helm
