#include "helm/error.hpp"
#include "helm/green.hpp"
#include "helm/suites.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace helm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

double max_rel(const CoefficientVector& a, const CoefficientVector& b)
{
    double e = rel(a.BN, b.BN);
    for (std::size_t k = 0; k < b.entries.size(); ++k) e = std::max(e, rel(a.entries[k], b.entries[k]));
    return e;
}

} // namespace

TEST_CASE("recursion coefficients against the quad reference")
{
    for (std::uint64_t seed : {7u, 19u, 23u, 101u, 640u}) {
        ProblemSpec const s = random_oracle_spec(seed);
        INFO("seed " << seed << " d=" << s.d << " m=" << s.m << " n=" << s.n());
        CHECK(max_rel(layer_coefficients(s), reference_solve(s)) < 1e-9);
    }
    GeneratorOptions opt;
    opt.m = 3;
    ProblemSpec const s = construct_localisation_example(6, 1.0, 2.0, opt);
    CHECK(max_rel(layer_coefficients(s), reference_solve(s)) < 1e-9);
}

TEST_CASE("boundary coefficient matches the raw system")
{
    ProblemSpec const s = random_oracle_spec(5, 6);
    CHECK(rel(boundary_coefficient_bn(s), assemble_raw(s).C) < 1e-14);
    CHECK(layer_coefficients(s).A1 == cplx(0.0));
}

TEST_CASE("specialised m = 0 path agrees with the general one")
{
    BetaOptions opt;
    opt.cross_check = true;
    for (int n : {3, 9, 20}) {
        BetaSequence const b = beta_sequence(construct_stable_example(n, 1.0, 2.0), opt);
        REQUIRE(b.beta_m0.has_value());
        CHECK(b.m0_deviation < 1e-12);
    }
}

TEST_CASE("localisation beta moduli follow the quarter-wave product")
{
    for (double c2 : {2.0, 3.0, 5.0}) {
        ProblemSpec const s = construct_localisation_example(9, 1.0, c2);
        auto const q = relative_jumps(s.profile);
        BetaSequence const b = beta_sequence(s);
        double log_expected = 0.0;
        CHECK_THAT(b.beta[0].log_abs(), WithinAbs(0.0, 1e-15));
        for (int l = 1; l <= s.n(); ++l) {
            double const sign = l % 2 == 0 ? 1.0 : -1.0;
            log_expected += std::log((1 + sign * q[l - 1]) / (1 + q[l - 1]));
            CHECK_THAT(b.beta[l].log_abs(), WithinAbs(log_expected, 1e-12));
            CHECK_THAT(b.phased_beta(l).log_abs(), WithinAbs(log_expected, 1e-12));
        }
    }
}

TEST_CASE("constant speed leaves beta on the unit circle")
{
    ProblemSpec s;
    s.profile.jump_points = {0.0, 0.25, 0.6, 1.0};
    s.profile.speeds = {1.5, 1.5, 1.5};
    s.omega = 17.0;
    BetaSequence const b = beta_sequence(s);
    for (int l = 0; l <= 2; ++l) CHECK_THAT(b.beta[l].log_abs(), WithinAbs(0.0, 1e-13));
    CoefficientVector const c = layer_coefficients(s);
    CHECK(std::abs(c.A(2)) < 1e-13 * std::abs(c.B(3)));
    CHECK(std::abs(c.A(3)) < 1e-13 * std::abs(c.B(3)));
    CHECK(rel(c.B(1), c.B(3)) < 1e-13);
}

TEST_CASE("real recursion reproduces the complex iteration")
{
    ProblemSpec s = random_oracle_spec(88, 12);
    s.d = 3;
    auto const real = beta_real_recursion(s);
    BetaSequence const b = beta_sequence(s);
    for (int l = 0; l <= s.n(); ++l) {
        cplx const bt = b.beta[l].value();
        cplx const rr = cplx(real[l].R, real[l].I) * std::exp(real[l].log_scale);
        CHECK(rel(rr, bt) < 1e-12);
    }
}

TEST_CASE("step matrices compose to the real recursion")
{
    ProblemSpec const s = construct_stable_example(5, 1.0, 2.5);
    auto const real = beta_real_recursion(s);
    for (int l = 1; l <= s.n(); ++l) {
        auto const M = beta_step_matrix(s, l);
        double const scale = std::exp(real[l - 1].log_scale - real[l].log_scale);
        double const R = (M[0][0] * real[l - 1].R + M[0][1] * real[l - 1].I) * scale;
        double const I = (M[1][0] * real[l - 1].R + M[1][1] * real[l - 1].I) * scale;
        double const size = std::hypot(real[l].R, real[l].I);
        CHECK(std::abs(R - real[l].R) < 1e-12 * size);
        CHECK(std::abs(I - real[l].I) < 1e-12 * size);
    }
}

TEST_CASE("Green column for the quarter-wave stack")
{
    GreenColumn const g = green_last_column(construct_localisation_example(4, 1.0, 3.0));
    REQUIRE(g.odd_entries.size() == 4);
    // odd moduli 9, 3, 3, 1; even entries at l = 2, 4 vanish
    double const odd[] = {9.0, 3.0, 3.0, 1.0};
    for (int l = 0; l < 4; ++l) CHECK_THAT(std::abs(g.odd_entries[l]), WithinRel(odd[l], 1e-12));
    CHECK(std::abs(g.even_entries[1]) < 1e-12);
    CHECK(std::abs(g.even_entries[3]) < 1e-12);
    CHECK_THAT(g.log_abs_beta_n, WithinAbs(-2 * std::log(3.0), 1e-12));
}

TEST_CASE("near-resonant beta is reported with its modulus")
{
    ProblemSpec const s = construct_localisation_example(4, 1.0, 3.0);
    try {
        green_last_column(s, 1.0);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::near_resonant);
        CHECK_THAT(e.magnitude(), WithinRel(1.0 / 9.0, 1e-12));
    }
    CHECK_THROWS_AS(layer_coefficients(s, 1.0), Error);
}

TEST_CASE("scaled numbers")
{
    Scaled const s{cplx(0.0, 2.0), 700.0};
    CHECK_THAT(s.log_abs(), WithinAbs(700.0 + std::log(2.0), 1e-12));
    Scaled const t{cplx(3.0, 4.0), 0.0};
    CHECK(std::abs(t.value() - cplx(3.0, 4.0)) < 1e-15);
}
