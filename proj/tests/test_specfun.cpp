#include "helm/error.hpp"
#include "helm/series_oracle.hpp"
#include "helm/specfun.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <catch_amalgamated.hpp>

#include <cmath>

using namespace helm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using mp = oracle::mp;

// P(b) Q'(a) / c_a - P'(b) Q(a) / c_b in 50 digits, P, Q in {j, y}.
mp cross_mp(int m, bool p_regular, bool q_regular, double ca, double cb, double z)
{
    namespace bm = boost::math;
    mp const a = mp(z) / ca, b = mp(z) / cb;
    auto f = [&](bool reg, const mp& x) { return reg ? bm::sph_bessel(m, x) : bm::sph_neumann(m, x); };
    auto fp = [&](bool reg, const mp& x) { return reg ? bm::sph_bessel_prime(m, x) : bm::sph_neumann_prime(m, x); };
    return f(p_regular, b) * fp(q_regular, a) / ca - fp(p_regular, b) * f(q_regular, a) / cb;
}

} // namespace

TEST_CASE("closed forms for order zero and one")
{
    for (double x : {1e-3, 0.2, 1.0, 3.7, 25.0, 400.0}) {
        CHECK_THAT(spherical_bessel_j(0, x), WithinAbs(std::sin(x) / x, 1e-15 / std::min(x, 1.0)));
        CHECK_THAT(spherical_bessel_y(0, x), WithinRel(-std::cos(x) / x, 1e-13));
        double const j1 = std::sin(x) / (x * x) - std::cos(x) / x;
        CHECK_THAT(spherical_bessel_y(1, x), WithinRel(-std::cos(x) / (x * x) - std::sin(x) / x, 1e-13));
        if (x > 0.1) CHECK_THAT(spherical_bessel_j(1, x), WithinAbs(j1, 1e-15));
    }
}

TEST_CASE("recurrences match the ascending series")
{
    for (int m = 0; m <= 40; m += 3)
        for (double x : {1e-4, 0.013, 0.9, 4.4, 11.0, 19.5}) {
            INFO("m=" << m << " x=" << x);
            CHECK_THAT(spherical_bessel_j(m, x), WithinRel(oracle::j(m, x), 1e-11));
            double const y = oracle::y(m, x);
            if (std::isfinite(y)) CHECK_THAT(spherical_bessel_y(m, x), WithinRel(y, 1e-11));
        }
}

TEST_CASE("large arguments match Boost.Math")
{
    for (int m : {0, 2, 7, 25})
        for (double x : {60.0, 150.0, 1000.0}) {
            INFO("m=" << m << " x=" << x);
            CHECK_THAT(spherical_bessel_j(m, x), WithinAbs(boost::math::sph_bessel(m, x), 1e-14 / x * 10));
            CHECK_THAT(spherical_bessel_y(m, x), WithinAbs(boost::math::sph_neumann(m, x), 1e-14 / x * 10));
        }
}

TEST_CASE("hankel function and its derivative")
{
    for (double x : {0.05, 1.0, 9.0, 80.0}) {
        cplx const h = spherical_hankel_h1(0, x);
        CHECK_THAT(h.real(), WithinAbs(std::sin(x) / x, 1e-14));
        CHECK_THAT(std::abs(h) * x, WithinAbs(1.0, 1e-14));
        ValueDeriv const f = fundamental_eval({3, 0}, 1, x);
        cplx const expected = std::exp(cplx(0, x)) * cplx(-1.0 / (x * x), 1.0 / x) * cplx(0, -1);
        CHECK(std::abs(f.derivative - expected) <= 1e-13 * std::abs(expected));
    }
}

TEST_CASE("one-dimensional pair")
{
    for (double x : {0.0, 0.4, 3.0, 17.0}) {
        ValueDeriv const f1 = fundamental_eval({1, 0}, 1, x);
        ValueDeriv const f2 = fundamental_eval({1, 0}, 2, x);
        CHECK(std::abs(f1.value - std::exp(cplx(0, x))) < 1e-15);
        CHECK(std::abs(f1.derivative - cplx(0, 1) * std::exp(cplx(0, x))) < 1e-15);
        CHECK_THAT(f2.value.real(), WithinAbs(std::cos(x), 1e-15));
        CHECK_THAT(f2.derivative.real(), WithinAbs(-std::sin(x), 1e-15));
    }
}

TEST_CASE("real parts satisfy the Wronskian relation")
{
    for (int m = 0; m <= 30; m += 5)
        for (double r : {0.02, 0.7, 6.0, 44.0}) {
            auto const p = fundamental_real_parts({3, m}, r);
            CHECK_THAT(r * r * (p.J * p.Yp - p.Jp * p.Y), WithinAbs(1.0, 1e-11));
        }
}

TEST_CASE("cross Wronskians against 50-digit Boost values")
{
    for (int m : {0, 1, 3, 8})
        for (double z : {1e-5, 3e-3, 0.4, 6.0, 30.0}) {
            INFO("m=" << m << " z=" << z);
            CrossWronskians const w = cross_wronskians({3, m}, 1.0, 2.5, z);
            double const jj = static_cast<double>(cross_mp(m, true, true, 1.0, 2.5, z));
            double const yy = static_cast<double>(cross_mp(m, false, false, 1.0, 2.5, z));
            double const jy = static_cast<double>(cross_mp(m, true, false, 1.0, 2.5, z));
            double const yj = static_cast<double>(cross_mp(m, false, true, 1.0, 2.5, z));
            CHECK_THAT(w.JJ, WithinRel(jj, 1e-11));
            CHECK_THAT(w.YY, WithinRel(yy, 1e-11));
            CHECK_THAT(w.JY, WithinRel(jy, 1e-9));
            CHECK_THAT(w.YJ, WithinRel(yj, 1e-9));
        }
}

TEST_CASE("wronskian_w with equal speeds reduces to the constant")
{
    for (int m : {0, 4})
        for (double z : {0.3, 5.0}) {
            double const c = 1.7, x = z / c;
            cplx const w = wronskian_w({3, m}, 1, 2, c, c, z);
            // h j' - h' j = -i / x^2
            CHECK(std::abs(w * c * x * x - cplx(0, -1)) < 1e-12);
            CHECK(std::abs(wronskian_w({3, m}, 2, 2, c, c, z)) < 1e-15 / (x * x));
            CHECK(std::abs(wronskian_w({3, m}, 2, 1, c, c, z) + w) < 1e-12 * std::abs(w));
        }
    cplx const w1 = wronskian_w({1, 0}, 1, 2, 2.0, 2.0, 3.0);
    CHECK(std::abs(w1 * 2.0 - cplx(0, -1)) < 1e-14);
}

TEST_CASE("swapping speeds negates same-kind Wronskians")
{
    for (int p = 1; p <= 2; ++p) {
        cplx const a = wronskian_w({3, 2}, p, p, 1.0, 3.0, 2.2);
        cplx const b = wronskian_w({3, 2}, p, p, 3.0, 1.0, 2.2);
        CHECK(std::abs(a + b) < 1e-13 * std::abs(a));
    }
}

TEST_CASE("values at the origin")
{
    CHECK_FALSE(eval_limit_at_origin({3, 0}, 1).has_value());
    CHECK(eval_limit_at_origin({3, 0}, 2).value() == cplx(1.0));
    CHECK(eval_limit_at_origin({3, 3}, 2).value() == cplx(0.0));
    CHECK_FALSE(eval_limit_at_origin({1, 0}, 1).has_value());
    CHECK(eval_limit_at_origin({1, 0}, 2).value() == cplx(1.0));
}

TEST_CASE("pair validation")
{
    CHECK_THROWS_AS(FundamentalPair({2, 0}).check(), Error);
    CHECK_THROWS_AS(FundamentalPair({1, 1}).check(), Error);
    CHECK_NOTHROW(FundamentalPair({3, 12}).check());
    CHECK_THROWS_AS(wronskian_w({3, 0}, 3, 1, 1.0, 1.0, 1.0), Error);
}
