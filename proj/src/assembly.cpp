#include "helm/assembly.hpp"

#include "helm/error.hpp"

#include <algorithm>
#include <cmath>

namespace helm {

namespace {

constexpr double pivot_floor = 1e-300;

double inf_norm(const std::vector<cplx>& v)
{
    double m = 0.0;
    for (auto const& e : v) m = std::max(m, std::abs(e));
    return m;
}

using Dense = std::vector<std::vector<cplx>>;

std::vector<cplx> multiply(const Dense& a, const std::vector<cplx>& x)
{
    std::vector<cplx> y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

double relative_residual(const Dense& a, const std::vector<cplx>& x, const std::vector<cplx>& b)
{
    auto r = multiply(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    double const nb = inf_norm(b);
    return nb > 0.0 ? inf_norm(r) / nb : inf_norm(r);
}

CoefficientVector pack(std::vector<cplx> x, cplx bn) { return {std::move(x), 0.0, bn}; }

// Both layouts share the pattern: row block l touches columns 2l-3 .. 2l.
BandMatrix to_band(const Dense& a)
{
    int const n = static_cast<int>(a.size());
    BandMatrix band(n, 2, 2);
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) band.at(i, j) = a[i][j];
    return band;
}

std::vector<cplx> solve_with(const Dense& a, const std::vector<cplx>& b, SolverKind kind)
{
    if (kind == SolverKind::reference_lu) return lu_solve(a, b);
    BandMatrix band = to_band(a);
    band.factorize();
    return band.solve(b);
}

} // namespace

Block multiply(const Block& a, const Block& b)
{
    Block c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

cplx det(const Block& a) { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

RawSystem assemble_raw(const ProblemSpec& spec)
{
    require_valid(spec);
    int const n = spec.n();
    if (n < 1) throw Error(ErrorKind::validation, "interface system needs at least one interior jump");
    auto const pair = spec.pair();
    auto const& p = spec.profile;

    RawSystem raw;
    raw.spec = spec;
    raw.n = n;
    for (int l = 1; l <= n; ++l) {
        double const cl = p.c(l), cl1 = p.c(l + 1);
        ValueDeriv const f1a = fundamental_eval(pair, 1, spec.kappa(l, l));
        ValueDeriv const f2a = fundamental_eval(pair, 2, spec.kappa(l, l));
        ValueDeriv const f1b = fundamental_eval(pair, 1, spec.kappa(l + 1, l));
        ValueDeriv const f2b = fundamental_eval(pair, 2, spec.kappa(l + 1, l));
        raw.S.push_back({{{f2a.value, -f1b.value}, {f2a.derivative / cl, -f1b.derivative / cl1}}});
        raw.t.push_back({-f2b.value, -f2b.derivative / cl1});
        raw.r.push_back({f1a.value, f1a.derivative / cl});
    }
    double const kNN = spec.kappa(n + 1, n + 1);
    ValueDeriv const f1 = fundamental_eval(pair, 1, kNN);
    ValueDeriv const f2 = fundamental_eval(pair, 2, kNN);
    cplx const wr = f1.value * f2.derivative - f1.derivative * f2.value;
    raw.C = f1.value * spec.g / (kNN * wr);
    raw.rhs.assign(2 * n, 0.0);
    raw.rhs[2 * n - 2] = -raw.C * raw.t[n - 1][0];
    raw.rhs[2 * n - 1] = -raw.C * raw.t[n - 1][1];
    return raw;
}

Block normaliser_block(const RawSystem& raw, int l)
{
    Vec2 const& t = raw.t[l - 1];
    Vec2 const& r = raw.r[l - 1];
    cplx const w = t[1] * r[0] - t[0] * r[1];
    return {{{t[1] / w, -t[0] / w}, {r[1] / w, -r[0] / w}}};
}

BlockSystem normalize(const RawSystem& raw)
{
    ProblemSpec const& s = raw.spec;
    auto const pair = s.pair();
    int const n = raw.n;
    BlockSystem sys;
    sys.n = n;
    sys.R_hat = {{{0.0, 1.0}, {0.0, 0.0}}};
    sys.T_hat = {{{0.0, 0.0}, {-1.0, 0.0}}};
    for (int l = 1; l <= n; ++l) {
        double const cl = s.profile.c(l), cl1 = s.profile.c(l + 1), z = s.z(l);
        cplx const w21 = wronskian_w(pair, 2, 1, cl1, cl, z);
        if (std::abs(w21) < pivot_floor)
            throw Error(ErrorKind::degenerate_normaliser, "normaliser w^{2,1} vanished at jump " + std::to_string(l),
                        std::abs(w21));
        Block S{};
        S[0][0] = wronskian_w(pair, 2, 2, cl1, cl, z) / w21;
        S[0][1] = wronskian_w(pair, 1, 2, cl1, cl1, z) / w21;
        S[1][0] = -wronskian_w(pair, 1, 2, cl, cl, z) / w21;
        S[1][1] = wronskian_w(pair, 1, 1, cl, cl1, z) / w21;
        sys.S_hat.push_back(S);
        sys.normaliser.push_back(w21);
    }
    double const cN = s.profile.c(n + 1);
    cplx const f1 = fundamental_eval(pair, 1, s.kappa(n + 1, n + 1)).value;
    cplx const wNNN = wronskian_w(pair, 1, 2, cN, cN, s.omega);
    sys.rhs_scale = f1 * s.g / (s.omega * wNNN);
    sys.rhs.assign(2 * n, 0.0);
    sys.rhs[2 * n - 1] = sys.rhs_scale;
    sys.b_last = raw.C;
    return sys;
}

std::vector<std::vector<cplx>> to_dense(const RawSystem& raw)
{
    int const n = raw.n;
    Dense a(2 * n, std::vector<cplx>(2 * n, 0.0));
    for (int l = 1; l <= n; ++l) {
        int const r0 = 2 * (l - 1);
        for (int i = 0; i < 2; ++i) {
            a[r0 + i][r0] = raw.S[l - 1][i][0];
            a[r0 + i][r0 + 1] = raw.S[l - 1][i][1];
            if (l >= 2) a[r0 + i][r0 - 1] = raw.r[l - 1][i];
            if (l < n) a[r0 + i][r0 + 2] = raw.t[l - 1][i];
        }
    }
    return a;
}

std::vector<std::vector<cplx>> to_dense(const BlockSystem& sys)
{
    int const n = sys.n;
    Dense a(2 * n, std::vector<cplx>(2 * n, 0.0));
    for (int l = 1; l <= n; ++l) {
        int const r0 = 2 * (l - 1);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                a[r0 + i][r0 + j] = sys.S_hat[l - 1][i][j];
                if (l >= 2) a[r0 + i][r0 - 2 + j] = sys.R_hat[i][j];
                if (l < n) a[r0 + i][r0 + 2 + j] = sys.T_hat[i][j];
            }
    }
    return a;
}

DenseSolution dense_solve(const RawSystem& raw, SolverKind kind)
{
    Dense const a = to_dense(raw);
    auto x = solve_with(a, raw.rhs, kind);
    double const res = relative_residual(a, x, raw.rhs);
    return {pack(std::move(x), raw.C), res};
}

DenseSolution dense_solve(const BlockSystem& sys, SolverKind kind)
{
    Dense const a = to_dense(sys);
    auto x = solve_with(a, sys.rhs, kind);
    double const res = relative_residual(a, x, sys.rhs);
    return {pack(std::move(x), sys.b_last), res};
}

double normalised_residual(const BlockSystem& sys, const CoefficientVector& x)
{
    return relative_residual(to_dense(sys), x.entries, sys.rhs);
}

BandMatrix::BandMatrix(int size, int kl, int ku)
    : n_(size), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), band_(static_cast<std::size_t>(size) * width_, 0.0),
      pivot_(size, 0)
{
}

cplx& BandMatrix::at(int i, int j) { return band_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)]; }

cplx BandMatrix::get(int i, int j) const
{
    int const off = j - i + kl_;
    if (off < 0 || off >= width_) return 0.0;
    return band_[static_cast<std::size_t>(i) * width_ + off];
}

void BandMatrix::factorize()
{
    for (int k = 0; k < n_; ++k) {
        int const last = std::min(n_ - 1, k + kl_);
        int p = k;
        for (int i = k + 1; i <= last; ++i)
            if (std::abs(get(i, k)) > std::abs(get(p, k))) p = i;
        pivot_[k] = p;
        if (std::abs(get(p, k)) < pivot_floor)
            throw Error(ErrorKind::singular_system, "pivot below floor in banded elimination", std::abs(get(p, k)));
        int const right = std::min(n_ - 1, k + kl_ + ku_);
        if (p != k)
            for (int j = k; j <= right; ++j) std::swap(at(k, j), at(p, j));
        cplx const piv = get(k, k);
        for (int i = k + 1; i <= last; ++i) {
            cplx const f = get(i, k) / piv;
            at(i, k) = f;
            if (f == 0.0) continue;
            for (int j = k + 1; j <= right; ++j) at(i, j) -= f * get(k, j);
        }
    }
    factored_ = true;
}

std::vector<cplx> BandMatrix::solve(std::vector<cplx> b) const
{
    for (int k = 0; k < n_; ++k) {
        if (pivot_[k] != k) std::swap(b[k], b[pivot_[k]]);
        int const last = std::min(n_ - 1, k + kl_);
        for (int i = k + 1; i <= last; ++i) b[i] -= get(i, k) * b[k];
    }
    for (int k = n_ - 1; k >= 0; --k) {
        int const right = std::min(n_ - 1, k + kl_ + ku_);
        cplx s = b[k];
        for (int j = k + 1; j <= right; ++j) s -= get(k, j) * b[j];
        b[k] = s / get(k, k);
    }
    return b;
}

cplx BandMatrix::determinant() const
{
    cplx d = 1.0;
    for (int k = 0; k < n_; ++k) {
        d *= get(k, k);
        if (pivot_[k] != k) d = -d;
    }
    return d;
}

namespace {

// Returns the permutation sign; a is overwritten by L\U.
int lu_in_place(Dense& a, std::vector<int>& perm)
{
    int const n = static_cast<int>(a.size());
    int sign = 1;
    perm.resize(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        perm[k] = p;
        if (std::abs(a[p][k]) < pivot_floor)
            throw Error(ErrorKind::singular_system, "pivot below floor in dense elimination", std::abs(a[p][k]));
        if (p != k) {
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            cplx const f = a[i][k] / a[k][k];
            a[i][k] = f;
            for (int j = k + 1; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return sign;
}

} // namespace

std::vector<cplx> lu_solve(Dense a, std::vector<cplx> b)
{
    std::vector<int> perm;
    lu_in_place(a, perm);
    int const n = static_cast<int>(a.size());
    for (int k = 0; k < n; ++k) {
        std::swap(b[k], b[perm[k]]);
        for (int i = k + 1; i < n; ++i) b[i] -= a[i][k] * b[k];
    }
    for (int k = n - 1; k >= 0; --k) {
        cplx s = b[k];
        for (int j = k + 1; j < n; ++j) s -= a[k][j] * b[j];
        b[k] = s / a[k][k];
    }
    return b;
}

cplx lu_determinant(Dense a)
{
    std::vector<int> perm;
    cplx d = static_cast<double>(lu_in_place(a, perm));
    for (std::size_t k = 0; k < a.size(); ++k) d *= a[k][k];
    return d;
}

std::vector<std::array<cplx, 2>> w_sequence(const ProblemSpec& spec)
{
    auto const pair = spec.pair();
    std::vector<std::array<cplx, 2>> W{{1.0, 0.0}};
    for (int l = 1; l <= spec.n(); ++l) {
        double const cl = spec.profile.c(l), cl1 = spec.profile.c(l + 1), z = spec.z(l);
        auto const& prev = W.back();
        std::array<cplx, 2> next{};
        for (int q = 1; q <= 2; ++q) {
            cplx const w1q = wronskian_w(pair, 1, q, cl, cl1, z);
            cplx const w2q = wronskian_w(pair, 2, q, cl, cl1, z);
            next[q - 1] = prev[0] * w2q - prev[1] * w1q;
        }
        W.push_back(next);
    }
    return W;
}

cplx determinant_recursion(const ProblemSpec& spec)
{
    auto const W = w_sequence(spec);
    auto const pair = spec.pair();
    cplx d = W.back()[0];
    for (int l = 1; l <= spec.n(); ++l)
        d /= wronskian_w(pair, 2, 1, spec.profile.c(l + 1), spec.profile.c(l), spec.z(l));
    return d;
}

} // namespace helm
