#include "helm/specfun.hpp"

#include "helm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace helm {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::degenerate_normaliser: return "degenerate normaliser";
    case ErrorKind::singular_system: return "singular system";
    case ErrorKind::gamma_plus_vanished: return "gamma-plus vanished";
    case ErrorKind::near_resonant: return "near-resonant denominator";
    case ErrorKind::unsupported_mode: return "unsupported mode";
    case ErrorKind::inapplicable_profile: return "inapplicable profile";
    case ErrorKind::not_in_interference: return "not in interference";
    case ErrorKind::window_too_coarse: return "window too coarse";
    }
    return "unknown";
}

double wronskian_constant(int d)
{
    if (d == 1) return 1.0;
    if (d == 3) return std::sqrt(std::numbers::pi / 2.0);
    throw Error(ErrorKind::validation, "dimension must be 1 or 3");
}

void FundamentalPair::check() const
{
    if (d != 1 && d != 3) throw Error(ErrorKind::validation, "dimension must be 1 or 3");
    if (m < 0) throw Error(ErrorKind::validation, "mode must be non-negative");
    if (d == 1 && m != 0) throw Error(ErrorKind::validation, "mode must be 0 when dimension is 1");
}

namespace {

constexpr double small_arg = 0.5;
constexpr double rescale_at = 1e250;

// Ascending series, used only below small_arg where every term is positive-dominated.
double j_series(int m, double x)
{
    double lead = 1.0;
    for (int k = 1; k <= m; ++k) lead *= x / (2 * k + 1);
    double const y = -0.5 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        term *= y / (k * (2.0 * m + 2 * k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return lead * sum;
}

double j0_closed(double x) { return x < small_arg ? j_series(0, x) : std::sin(x) / x; }

double j1_closed(double x)
{
    return x < small_arg ? j_series(1, x) : (std::sin(x) / x - std::cos(x)) / x;
}

struct Neighbours {
    double at_m;
    double at_m_minus_1;
};

// Miller recurrence from an index well above max(m, x); normalised by j0 or j1.
Neighbours bessel_j_downward(int m, double x)
{
    int const start = m + 20 + std::max(20, static_cast<int>(std::ceil(1.5 * x)));
    double t_above = 0.0, t = 1e-300;
    double at_m = 0.0, at_m1 = 0.0;
    for (int k = start; k > 0; --k) {
        double const next = (2 * k + 1) / x * t - t_above;
        t_above = t;
        t = next;
        if (k - 1 == m) at_m = t;
        if (k - 1 == m - 1) at_m1 = t;
        if (std::abs(t) > rescale_at) {
            t /= rescale_at;
            t_above /= rescale_at;
            at_m /= rescale_at;
            at_m1 /= rescale_at;
        }
    }
    double const j0 = j0_closed(x);
    double const j1 = j1_closed(x);
    double const scale = std::abs(j0) >= std::abs(j1) ? j0 / t : j1 / t_above;
    return {at_m * scale, at_m1 * scale};
}

Neighbours bessel_j_pair(int m, double x)
{
    if (m == 0) return {j0_closed(x), 0.0};
    if (m == 1) return {j1_closed(x), j0_closed(x)};
    if (x < small_arg) return {j_series(m, x), j_series(m - 1, x)};
    return bessel_j_downward(m, x);
}

Neighbours bessel_y_pair(int m, double x)
{
    double const c = std::cos(x), s = std::sin(x);
    double y_prev = -c / x;
    if (m == 0) return {y_prev, 0.0};
    double y = -c / (x * x) - s / x;
    for (int k = 1; k < m; ++k) {
        double const next = (2 * k + 1) / x * y - y_prev;
        y_prev = y;
        y = next;
    }
    return {y, y_prev};
}

// f' from (f_m, f_{m-1}); for m = 0 the caller passes f_1 as `other`.
double spherical_derivative(int m, double x, double at_m, double other)
{
    if (m == 0) return -other;
    return other - (m + 1) / x * at_m;
}

} // namespace

double spherical_bessel_j(int m, double x) { return bessel_j_pair(m, x).at_m; }

double spherical_bessel_y(int m, double x) { return bessel_y_pair(m, x).at_m; }

cplx spherical_hankel_h1(int m, double x) { return {spherical_bessel_j(m, x), spherical_bessel_y(m, x)}; }

RealParts fundamental_real_parts(const FundamentalPair& pair, double x)
{
    if (pair.d == 1) {
        double const c = std::cos(x), s = std::sin(x);
        return {c, -s, s, c};
    }
    int const m = pair.m;
    Neighbours const j = bessel_j_pair(m, x);
    Neighbours const y = bessel_y_pair(m, x);
    double const j_other = m == 0 ? j1_closed(x) : j.at_m_minus_1;
    double const y_other = m == 0 ? bessel_y_pair(1, x).at_m : y.at_m_minus_1;
    return {j.at_m, spherical_derivative(m, x, j.at_m, j_other), y.at_m,
            spherical_derivative(m, x, y.at_m, y_other)};
}

ValueDeriv fundamental_eval(const FundamentalPair& pair, int which, double x)
{
    RealParts const p = fundamental_real_parts(pair, x);
    if (which == 1) return {{p.J, p.Y}, {p.Jp, p.Yp}};
    if (which == 2) return {{p.J, 0.0}, {p.Jp, 0.0}};
    throw Error(ErrorKind::validation, "fundamental index must be 1 or 2");
}

CrossWronskians cross_wronskians(const FundamentalPair& pair, double c_a, double c_b, double z)
{
    double const a = z / c_a, b = z / c_b;
    RealParts const pa = fundamental_real_parts(pair, a);
    RealParts const pb = fundamental_real_parts(pair, b);
    CrossWronskians w;
    w.JY = pb.J * pa.Yp / c_a - pb.Jp * pa.Y / c_b;
    w.YJ = pb.Y * pa.Jp / c_a - pb.Yp * pa.J / c_b;
    if (pair.d == 1) {
        w.JJ = pb.J * pa.Jp / c_a - pb.Jp * pa.J / c_b;
        w.YY = pb.Y * pa.Yp / c_a - pb.Yp * pa.Y / c_b;
        return w;
    }
    // With a c_a = b c_b the terms m f(b) g(a) / z cancel exactly, so they are dropped:
    // J through j' = (m/x) j - j_{m+1}, Y through y' = y_{m-1} - ((m+1)/x) y.
    int const m = pair.m;
    double const ja_up = spherical_bessel_j(m + 1, a), jb_up = spherical_bessel_j(m + 1, b);
    double const ya_dn = m == 0 ? j0_closed(a) : bessel_y_pair(m, a).at_m_minus_1;
    double const yb_dn = m == 0 ? j0_closed(b) : bessel_y_pair(m, b).at_m_minus_1;
    w.JJ = jb_up * pa.J / c_b - pb.J * ja_up / c_a;
    w.YY = pb.Y * ya_dn / c_a - yb_dn * pa.Y / c_b;
    return w;
}

cplx wronskian_w(const FundamentalPair& pair, int p, int q, double c_j, double c_k, double z)
{
    if ((p != 1 && p != 2) || (q != 1 && q != 2))
        throw Error(ErrorKind::validation, "fundamental index must be 1 or 2");
    CrossWronskians const w = cross_wronskians(pair, c_k, c_j, z);
    if (p == 1 && q == 1) return {w.JJ - w.YY, w.JY + w.YJ};
    if (p == 1) return {w.JJ, w.YJ};
    if (q == 1) return {w.JJ, w.JY};
    return w.JJ;
}

std::optional<cplx> eval_limit_at_origin(const FundamentalPair& pair, int which)
{
    if (which == 1) return std::nullopt;
    if (pair.d == 1) return cplx(1.0);
    return cplx(pair.m == 0 ? 1.0 : 0.0);
}

} // namespace helm
