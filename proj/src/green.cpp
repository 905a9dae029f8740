#include "helm/green.hpp"

#include "helm/error.hpp"

#include <cassert>
#include <cmath>

namespace helm {

namespace {

constexpr cplx I{0.0, 1.0};

cplx i_pow(int k)
{
    switch (((k % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return I;
    case 2: return -1.0;
    default: return -I;
    }
}

Scaled normalise(cplx v, double log_scale)
{
    double const s = std::abs(v);
    if (s == 0.0 || !std::isfinite(s)) return {v, log_scale};
    return {v / s, log_scale + std::log(s)};
}

double relative_gap(const Scaled& a, const Scaled& b)
{
    cplx const aligned = a.mantissa * std::exp(a.log_scale - b.log_scale);
    return std::abs(aligned - b.mantissa) / std::abs(b.mantissa);
}

// log of i w^{1,2}_{l+1,l+1,l} = c_{l+1}^{d-2} / z_l^{d-1}.
double log_interface_wronskian(const ProblemSpec& s, int l)
{
    return (s.d - 2) * std::log(s.profile.c(l + 1)) - (s.d - 1) * std::log(s.z(l));
}

} // namespace

cplx Scaled::value() const { return mantissa * std::exp(log_scale); }

double Scaled::log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }

GammaQ gamma_q(const ProblemSpec& spec, int l)
{
    if (l < 1 || l > spec.n()) throw Error(ErrorKind::validation, "gamma index out of range");
    double const z = spec.z(l);
    CrossWronskians const w = cross_wronskians(spec.pair(), spec.profile.c(l), spec.profile.c(l + 1), z);
    double const cl = spec.profile.c(l), cl1 = spec.profile.c(l + 1);

    GammaQ g{};
    g.gt_plus = {w.JJ + w.YY, w.YJ - w.JY};
    g.gt_minus = {w.JJ - w.YY, w.JY + w.YJ};
    if (std::abs(g.gt_plus) < 1e-300)
        throw Error(ErrorKind::gamma_plus_vanished, "gamma-plus vanished at jump " + std::to_string(l),
                    std::abs(g.gt_plus));
    g.g_plus = I * std::polar(1.0, z / cl - z / cl1) * g.gt_plus;
    g.g_minus = I * std::polar(1.0, -z / cl - z / cl1) * g.gt_minus;
    g.q = g.g_minus / g.g_plus;
    g.q_tilde = g.gt_minus / g.gt_plus;
    return g;
}

Scaled BetaSequence::phased_beta(int l) const
{
    // i w_k is real and positive, so the product enters as a log scale.
    Scaled const& bt = beta_tilde[l];
    return {i_pow(l) * bt.mantissa, bt.log_scale - log_wprod[l]};
}

BetaSequence beta_sequence(const ProblemSpec& spec, const BetaOptions& opt)
{
    require_valid(spec);
    auto const pair = spec.pair();
    int const n = spec.n();
    BetaSequence seq;
    seq.beta_tilde.push_back({1.0, 0.0});
    seq.beta.push_back({1.0, 0.0});
    seq.log_wprod.push_back(0.0);

    double R = 1.0, Im = 0.0, log_t = 0.0;
    for (int l = 1; l <= n; ++l) {
        GammaQ const g = gamma_q(spec, l);
        seq.gamma.push_back(g);
        double const ca = spec.profile.c(l), cb = spec.profile.c(l + 1), z = spec.z(l);

        // Real cross-Wronskians of f1 = J + iY between kappa_{l,l} (a) and kappa_{l+1,l} (b).
        CrossWronskians const cw = cross_wronskians(pair, ca, cb, z);
        double const wJJ = cw.JJ, wJY = cw.JY, wYJ = cw.YJ, wYY = cw.YY;
        double nR, nI;
        if (l % 2 == 1) {
            nR = wJJ * R + wJY * Im;
            nI = wYJ * R + wYY * Im;
        } else {
            nR = wYY * R - wYJ * Im;
            nI = -wJY * R + wJJ * Im;
        }
        double const s = std::max(std::abs(nR), std::abs(nI));
        if (s > 0.0) {
            nR /= s;
            nI /= s;
            log_t += std::log(s);
        }
        R = nR;
        Im = nI;
        seq.beta_tilde.push_back({{R, Im}, log_t});
        seq.log_wprod.push_back(seq.log_wprod.back() + log_interface_wronskian(spec, l));

        cplx const w = wronskian_w(pair, 1, 2, cb, cb, z);
        Scaled const& prev = seq.beta.back();
        cplx const rotated = std::polar(1.0, -spec.delta(l)) * prev.mantissa;
        cplx const next = g.g_plus / (2.0 * I * w) * (rotated + g.q * std::conj(rotated));
        seq.beta.push_back(normalise(next, prev.log_scale));
    }

    if (spec.d == 3 && spec.m == 0 && opt.cross_check) {
        auto const q = relative_jumps(spec.profile);
        std::vector<Scaled> alt{{1.0, 0.0}};
        for (int l = 1; l <= n; ++l) {
            cplx const rotated = std::polar(1.0, -spec.delta(l)) * alt.back().mantissa;
            cplx const next = (rotated + q[l - 1] * std::conj(rotated)) / (1.0 + q[l - 1]);
            alt.push_back(normalise(next, alt.back().log_scale));
            seq.m0_deviation = std::max(seq.m0_deviation, relative_gap(alt.back(), seq.beta[l]));
        }
        seq.beta_m0 = std::move(alt);
    }
    return seq;
}

std::array<std::array<double, 2>, 2> beta_step_matrix(const ProblemSpec& spec, int l)
{
    GammaQ const g = gamma_q(spec, l);
    double const cb = spec.profile.c(l + 1);
    cplx const w = wronskian_w(spec.pair(), 1, 2, cb, cb, spec.z(l));
    cplx const lead = g.g_plus / (2.0 * I * w);
    cplx const theta = lead * std::polar(1.0, -spec.delta(l));
    cplx const phi = lead * g.q * std::polar(1.0, spec.delta(l));
    return {{{theta.real() + phi.real(), phi.imag() - theta.imag()},
             {theta.imag() + phi.imag(), theta.real() - phi.real()}}};
}

std::vector<RealPair> beta_real_recursion(const ProblemSpec& spec)
{
    require_valid(spec);
    std::vector<RealPair> out{{1.0, 0.0, 0.0}};
    for (int l = 1; l <= spec.n(); ++l) {
        auto const M = beta_step_matrix(spec, l);
        RealPair const& p = out.back();
        double R = M[0][0] * p.R + M[0][1] * p.I;
        double Im = M[1][0] * p.R + M[1][1] * p.I;
        double const s = std::hypot(R, Im);
        double log_scale = p.log_scale;
        if (s > 0.0) {
            R /= s;
            Im /= s;
            log_scale += std::log(s);
        }
        out.push_back({R, Im, log_scale});
    }
    return out;
}

cplx rhs_scale(const ProblemSpec& spec)
{
    double const cN = spec.profile.c(spec.n() + 1);
    cplx const f1 = fundamental_eval(spec.pair(), 1, spec.omega / cN).value;
    cplx const wNNN = -I / cN * std::pow(cN / spec.omega, spec.d - 1);
    return f1 * spec.g / (spec.omega * wNNN);
}

cplx boundary_coefficient_bn(const ProblemSpec& spec)
{
    double const k = spec.kappa(spec.n() + 1, spec.n() + 1);
    cplx const f1 = fundamental_eval(spec.pair(), 1, k).value;
    return I * f1 * spec.g * std::pow(k, spec.d - 2);
}

GreenColumn green_last_column(const ProblemSpec& spec, double threshold)
{
    BetaOptions opt;
    opt.cross_check = false;
    BetaSequence const seq = beta_sequence(spec, opt);
    int const n = spec.n();

    // e^{i z_l / c_{l+1}} beta_l in scaled form.
    auto phased = [&](int l) { return seq.phased_beta(l); };
    Scaled const den = phased(n);
    GreenColumn col;
    col.log_abs_beta_n = den.log_abs();
    if (!(col.log_abs_beta_n >= std::log(threshold)))
        throw Error(ErrorKind::near_resonant, "|beta_n| below near-resonance threshold",
                    std::exp(col.log_abs_beta_n));

    for (int l = 1; l <= n; ++l) {
        Scaled const a = phased(l - 1);
        cplx const odd_m = a.mantissa / den.mantissa;
        double const odd_e = a.log_scale - den.log_scale;
        col.odd_entries.push_back(odd_m * std::exp(odd_e));
        col.odd_log_abs.push_back(std::log(std::abs(odd_m)) + odd_e);

        Scaled const b = phased(l);
        cplx const even_m = -I * b.mantissa.imag() / den.mantissa;
        double const even_e = b.log_scale - den.log_scale;
        col.even_entries.push_back(even_m * std::exp(even_e));
        col.even_log_abs.push_back(std::log(std::abs(even_m)) + even_e);
    }
    return col;
}

CoefficientVector layer_coefficients(const ProblemSpec& spec, double threshold)
{
    GreenColumn const col = green_last_column(spec, threshold);
    cplx const rs = rhs_scale(spec);
    CoefficientVector x;
    for (int l = 1; l <= spec.n(); ++l) {
        x.entries.push_back(col.odd_entries[l - 1] * rs);
        x.entries.push_back(col.even_entries[l - 1] * rs);
    }
    x.A1 = 0.0;
    x.BN = boundary_coefficient_bn(spec);
    assert(!(spec.d == 3 && spec.m == 0) || std::abs(std::abs(x.BN) - std::abs(spec.g)) <= 1e-12 * (1 + std::abs(spec.g)));
    return x;
}

} // namespace helm
