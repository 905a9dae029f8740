#pragma once
/* Ascending-series values of j_m and y_m in 50-digit arithmetic.
 *
 *   j_m(x) = x^m/(2m+1)!! * sum_k (-x^2/2)^k / (k! (2m+3)(2m+5)...(2m+2k+1))
 *   y_m(x) = -(2m-1)!!/x^{m+1} * sum_k (-x^2/2)^k / (k! (1-2m)(3-2m)...(2k-1-2m))
 *
 * Independent of the recurrences in specfun; used as a reference only.
 */
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace helm::oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

inline mp series_sum(int m, const mp& x, bool regular)
{
    mp const u = -x * x / 2;
    mp term = 1, sum = 1;
    for (int k = 1; k < 400; ++k) {
        int const odd = regular ? 2 * m + 2 * k + 1 : 2 * k - 1 - 2 * m;
        term *= u / (mp(k) * odd);
        sum += term;
        if (k > x && abs(term) < abs(sum) * mp("1e-45")) break;
    }
    return sum;
}

inline double j(int m, double xd)
{
    mp const x = xd;
    mp df = 1; // (2m+1)!!
    for (int i = 3; i <= 2 * m + 1; i += 2) df *= i;
    return static_cast<double>(pow(x, m) / df * series_sum(m, x, true));
}

inline double y(int m, double xd)
{
    mp const x = xd;
    mp df = 1; // (2m-1)!!
    for (int i = 3; i <= 2 * m - 1; i += 2) df *= i;
    return static_cast<double>(-df / pow(x, m + 1) * series_sum(m, x, false));
}

} // namespace helm::oracle
