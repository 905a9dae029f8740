// Extended-precision route for the raw interface system.
#include "helm/assembly.hpp"
#include "helm/error.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <vector>

namespace helm {

namespace {

using Q = boost::multiprecision::float128;

struct QC {
    Q re = 0, im = 0;
};

QC operator-(QC a, QC b) { return {a.re - b.re, a.im - b.im}; }
QC operator-(QC a) { return {-a.re, -a.im}; }
QC operator*(QC a, QC b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
QC operator/(QC a, QC b)
{
    Q const den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
Q mag(QC a) { return sqrt(a.re * a.re + a.im * a.im); }

struct QValue {
    QC f, fp;
};

// f1 = J + iY and f2 = J with J, Y from Boost.Math (d = 3) or cos, sin (d = 1).
QValue eval(int d, int m, int which, Q x)
{
    Q J, Jp, Y, Yp;
    if (d == 1) {
        J = cos(x);
        Jp = -sin(x);
        Y = sin(x);
        Yp = cos(x);
    } else {
        J = boost::math::sph_bessel(m, x);
        Jp = boost::math::sph_bessel_prime(m, x);
        Y = boost::math::sph_neumann(m, x);
        Yp = boost::math::sph_neumann_prime(m, x);
    }
    if (which == 1) return {{J, Y}, {Jp, Yp}};
    return {{J, 0}, {Jp, 0}};
}

} // namespace

CoefficientVector reference_solve(const ProblemSpec& spec)
{
    require_valid(spec);
    int const n = spec.n(), d = spec.d, m = spec.m, size = 2 * n;
    Q const omega = spec.omega;
    auto x = [&](int l) { return Q(spec.profile.jump_points[l]); };
    auto c = [&](int j) { return Q(spec.profile.c(j)); };

    Q const kN = omega / c(n + 1);
    QValue const b1 = eval(d, m, 1, kN), b2 = eval(d, m, 2, kN);
    QC const wr = b1.f * b2.fp - b1.fp * b2.f;
    QC const g{Q(spec.g.real()), Q(spec.g.imag())};
    QC const BN = b1.f * g / (QC{kN, 0} * wr);

    std::vector<std::vector<QC>> a(size, std::vector<QC>(size));
    std::vector<QC> rhs(size);
    for (int l = 1; l <= n; ++l) {
        int const r0 = 2 * (l - 1);
        Q const ka = omega * x(l) / c(l), kb = omega * x(l) / c(l + 1);
        QValue const f1a = eval(d, m, 1, ka), f2a = eval(d, m, 2, ka);
        QValue const f1b = eval(d, m, 1, kb), f2b = eval(d, m, 2, kb);
        QC const ica{1 / c(l), 0}, icb{1 / c(l + 1), 0};
        // B_l and A_{l+1}
        a[r0][r0] = f2a.f;
        a[r0 + 1][r0] = f2a.fp * ica;
        a[r0][r0 + 1] = -f1b.f;
        a[r0 + 1][r0 + 1] = -(f1b.fp * icb);
        // A_l
        if (l >= 2) {
            a[r0][r0 - 1] = f1a.f;
            a[r0 + 1][r0 - 1] = f1a.fp * ica;
        }
        // B_{l+1}, known at l = n
        QC const t0 = -f2b.f, t1 = -(f2b.fp * icb);
        if (l < n) {
            a[r0][r0 + 2] = t0;
            a[r0 + 1][r0 + 2] = t1;
        } else {
            rhs[r0] = -(BN * t0);
            rhs[r0 + 1] = -(BN * t1);
        }
    }

    for (int k = 0; k < size; ++k) {
        int p = k;
        for (int i = k + 1; i < size; ++i)
            if (mag(a[i][k]) > mag(a[p][k])) p = i;
        if (mag(a[p][k]) == 0) throw Error(ErrorKind::singular_system, "reference elimination hit a zero pivot");
        std::swap(a[p], a[k]);
        std::swap(rhs[p], rhs[k]);
        for (int i = k + 1; i < size; ++i) {
            QC const f = a[i][k] / a[k][k];
            if (f.re == 0 && f.im == 0) continue;
            for (int j = k; j < size; ++j) a[i][j] = a[i][j] - f * a[k][j];
            rhs[i] = rhs[i] - f * rhs[k];
        }
    }
    std::vector<QC> sol(size);
    for (int i = size - 1; i >= 0; --i) {
        QC acc = rhs[i];
        for (int j = i + 1; j < size; ++j) acc = acc - a[i][j] * sol[j];
        sol[i] = acc / a[i][i];
    }

    auto to_cplx = [](QC v) { return cplx(static_cast<double>(v.re), static_cast<double>(v.im)); };
    CoefficientVector out;
    for (auto const& v : sol) out.entries.push_back(to_cplx(v));
    out.A1 = 0.0;
    out.BN = to_cplx(BN);
    return out;
}

} // namespace helm
