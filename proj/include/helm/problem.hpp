#pragma once

#include "helm/specfun.hpp"

#include <complex>
#include <string>
#include <vector>

namespace helm {

/// Piecewise-constant wave speed: value c[j-1] on (x[j-1], x[j]).
struct WaveSpeedProfile {
    std::vector<double> jump_points; // x_0 = 0 < x_1 < ... < x_N = 1
    std::vector<double> speeds;      // c_1 .. c_N

    int layers() const { return static_cast<int>(speeds.size()); }
    int interior_jumps() const { return layers() - 1; }
    double width(int j) const { return jump_points[j] - jump_points[j - 1]; }

    /// Speed of layer j, 1-based.
    double c(int j) const { return speeds[j - 1]; }

    double c_min() const;
    double c_max() const;
};

struct Violation {
    int index;
    std::string reason;
};

std::vector<Violation> validate(const WaveSpeedProfile& profile);

struct ProblemSpec {
    WaveSpeedProfile profile;
    int d = 3;
    int m = 0;
    double omega = 1.0;
    cplx g = 1.0;

    FundamentalPair pair() const { return {d, m}; }
    int n() const { return profile.interior_jumps(); }

    double z(int l) const { return omega * profile.jump_points[l]; }
    double kappa(int j, int l) const { return z(l) / profile.c(j); }
    double delta(int l) const { return omega * profile.width(l) / profile.c(l); }
    double lambda() const { return static_cast<double>(m) * (m + d - 2); }
};

/// Profile violations plus d, m, omega checks; empty when the spec is usable.
std::vector<Violation> validate(const ProblemSpec& spec);

/// Throws Error(validation) listing every violation.
void require_valid(const ProblemSpec& spec);

/// q_k = (c_{k+1} - c_k) / (c_{k+1} + c_k), k = 1..n.
std::vector<double> relative_jumps(const WaveSpeedProfile& profile);

struct GeneratorOptions {
    int d = 3;
    int m = 0;
    cplx g = 1.0;
};

/// Alternating c1, c2 with omega = (pi/2) sum c_j and h_j = (pi/2) c_j / omega.
ProblemSpec construct_localisation_example(int n, double c1, double c2, const GeneratorOptions& opt = {});

/// Alternating c1, c2 with omega = pi sum c_j and h_j = pi c_j / omega.
ProblemSpec construct_stable_example(int n, double c1, double c2, const GeneratorOptions& opt = {});

bool is_localisation_interference(const ProblemSpec& spec, double tol = 1e-10);

/// Fixed-key JSON document; numbers are printed with 17 significant digits.
std::string to_json(const ProblemSpec& spec);

/// Throws Error(validation) for malformed documents (structure only, not invariants).
ProblemSpec spec_from_json(const std::string& text);

} // namespace helm
