#pragma once

/* Fundamental systems of the radial Helmholtz operator.
 *
 *   d = 3 :  f1 = h_m^(1),  f2 = j_m
 *   d = 1 :  f1 = exp(ix),  f2 = cos x   (m = 0 only)
 *
 * Both families are written as f1 = J + iY, f2 = J with real J, Y.
 */

#include <complex>
#include <optional>

namespace helm {

using cplx = std::complex<double>;

/// Normalisation constant of the Wronskian for d = 1 and d = 3.
double wronskian_constant(int d);

struct FundamentalPair {
    int d = 3;
    int m = 0;

    /// Throws Error(validation) unless d in {1,3} and (d == 1 implies m == 0).
    void check() const;
};

/// j_m(x), x > 0. Closed forms for m < 2, downward recurrence otherwise.
double spherical_bessel_j(int m, double x);

/// y_m(x), x > 0, by upward recurrence from y_0 and y_1.
double spherical_bessel_y(int m, double x);

/// h_m^(1)(x) = j_m(x) + i y_m(x).
cplx spherical_hankel_h1(int m, double x);

struct ValueDeriv {
    cplx value;
    cplx derivative;
};

/// (f_which(x), f_which'(x)) for which in {1,2}.
ValueDeriv fundamental_eval(const FundamentalPair& pair, int which, double x);

/// Real and imaginary parts of f1 with their derivatives: f1 = J + iY.
struct RealParts {
    double J, Jp, Y, Yp;
};

RealParts fundamental_real_parts(const FundamentalPair& pair, double x);

/// Real cross-Wronskians w_PQ = P(b) Q'(a) / c_a - P'(b) Q(a) / c_b, P, Q in {J, Y},
/// a = z / c_a, b = z / c_b. The J-J and Y-Y entries avoid the small-argument cancellation.
struct CrossWronskians {
    double JJ, JY, YJ, YY;
};
CrossWronskians cross_wronskians(const FundamentalPair& pair, double c_a, double c_b, double z);

/// w^{p,q} = f_p(z/c_j) f_q'(z/c_k) / c_k - f_p'(z/c_j) f_q(z/c_k) / c_j.
cplx wronskian_w(const FundamentalPair& pair, int p, int q, double c_j, double c_k, double z);

/// Value of f_which at the origin; nullopt marks the singular outgoing branch.
std::optional<cplx> eval_limit_at_origin(const FundamentalPair& pair, int which);

} // namespace helm
