#include "helm/error.hpp"
#include "helm/stability.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

using namespace helm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error");
    return ErrorKind::validation;
}

} // namespace

TEST_CASE("alternation test")
{
    CHECK(is_alternating({{0.0, 0.3, 0.5, 1.0}, {1.0, 2.0, 1.0}}));
    CHECK(is_alternating({{0.0, 1.0}, {4.0}}));
    CHECK_FALSE(is_alternating({{0.0, 0.3, 0.5, 1.0}, {1.0, 2.0, 3.0}}));
}

TEST_CASE("constant speed keeps every beta on the unit circle")
{
    ProblemSpec s;
    s.profile.jump_points = {0.0, 0.1, 0.45, 0.7, 1.0};
    s.profile.speeds = {1.3, 1.3, 1.3, 1.3};
    s.omega = 40.0;
    StabilityReport const r = certify_beta_bounds(s);
    for (double b : r.beta_moduli) CHECK_THAT(b, WithinAbs(1.0, 1e-13));
    CHECK(r.violations() == 0);
    CHECK_THAT(r.alpha_fit, WithinAbs(1.0, 1e-13));
}

TEST_CASE("bounds hold on generated families")
{
    for (int n : {1, 4, 11}) {
        CHECK(certify_beta_bounds(construct_localisation_example(n, 1.0, 3.0)).violations() == 0);
        CHECK(certify_beta_bounds(construct_stable_example(n, 1.0, 4.0)).violations() == 0);
    }
}

TEST_CASE("certification preconditions")
{
    GeneratorOptions opt;
    opt.m = 2;
    CHECK(kind_of([&] { certify_beta_bounds(construct_stable_example(2, 1.0, 2.0, opt)); }) ==
          ErrorKind::unsupported_mode);
    ProblemSpec s;
    s.profile = {{0.0, 0.3, 0.5, 1.0}, {1.0, 2.0, 3.0}};
    s.omega = 5.0;
    CHECK(kind_of([&] { certify_beta_bounds(s); }) == ErrorKind::inapplicable_profile);
}

TEST_CASE("Green growth law on quarter-wave stacks")
{
    // first odd entry is 3^{ceil(n/2)} for c2 / c1 = 3
    for (auto [n, expected] : {std::pair{1, 3.0}, {4, 9.0}, {16, 6561.0}}) {
        GrowthLaw const g = green_growth_law(construct_localisation_example(n, 1.0, 3.0));
        REQUIRE(g.observed_odd_log.size() == static_cast<std::size_t>(n));
        CHECK_THAT(std::exp(g.observed_odd_log.front()), WithinRel(expected, 1e-10));
        CHECK_THAT(std::exp(g.predicted_odd_log.front()), WithinRel(expected, 1e-14));
        CHECK(g.max_odd_log_gap < 1e-9);
    }
    CHECK(kind_of([] { green_growth_law(construct_stable_example(4, 1.0, 3.0)); }) ==
          ErrorKind::not_in_interference);
}

TEST_CASE("refined small-argument check")
{
    ProblemSpec s;
    s.omega = 10.0;
    s.profile = {{0.0, 0.002, 0.004, 0.007, 0.01, 0.3, 0.6, 1.0}, {1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0}};
    CHECK_THAT(refined_c1(s.profile), WithinAbs(2.0, 1e-15));
    RefinedCheck const r = refined_small_z_check(s);
    CHECK(r.applicable);
    CHECK(r.entries.size() >= 4);
    CHECK(r.fitted_exponent >= 2.8);
    for (auto const& e : r.entries) CHECK(e.z * refined_c1(s.profile) < 0.25 * s.profile.c_min() + 1e-15);

    RefinedCheck const none = refined_small_z_check(construct_stable_example(3, 1.0, 2.0));
    CHECK_FALSE(none.applicable);
}

TEST_CASE("random alternating specs are deterministic")
{
    ProblemSpec const a = random_alternating_spec(77);
    ProblemSpec const b = random_alternating_spec(77);
    CHECK(a.profile.jump_points == b.profile.jump_points);
    CHECK(a.profile.speeds == b.profile.speeds);
    CHECK(a.omega == b.omega);
    CHECK(is_alternating(a.profile));
    CHECK(a.profile.speeds.front() == 1.0);
    CHECK(validate(a).empty());
}

TEST_CASE("sweep is independent of the worker count")
{
    setenv("HELM_THREADS", "1", 1);
    auto const serial = beta_sweep(9000, 12);
    setenv("HELM_THREADS", "3", 1);
    auto const parallel = beta_sweep(9000, 12);
    unsetenv("HELM_THREADS");
    REQUIRE(serial.size() == 12);
    CHECK(sweep_csv(serial) == sweep_csv(parallel));
    CHECK(sweep_csv(serial).rfind("seed,n,q,omega,max_beta,min_beta,violations\n", 0) == 0);
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i].seed == 9000 + i);
}

TEST_CASE("whispering-gallery coefficients against the quad reference")
{
    for (int m : {5, 10, 15}) {
        WhisperResult const w = whispering_gallery_scan(m, 1.0, 2.0, 0.5, default_whisper_window(m, 1.0, 0.5), 2001);
        INFO("m=" << m);
        CoefficientVector const ref = reference_solve(w.spec);
        CHECK(w.A1 == cplx(0.0));
        CHECK(rel(w.B1, ref.B(1)) < 1e-10);
        CHECK(rel(w.A2, ref.A(2)) < 1e-10);
        CHECK(rel(w.B2, ref.BN) < 1e-12);
        CHECK_THAT(w.w_min, WithinAbs(std::abs(whisper_wronskian(m, 1.0, 2.0, 0.5, w.omega_star)), 1e-300));
        auto const [lo, hi] = default_whisper_window(m, 1.0, 0.5);
        CHECK(w.omega_star > lo);
        CHECK(w.omega_star < hi);
        // local minimum of |W|
        double const h = 1e-4 * w.omega_star;
        CHECK(std::abs(whisper_wronskian(m, 1.0, 2.0, 0.5, w.omega_star - h)) > w.w_min);
        CHECK(std::abs(whisper_wronskian(m, 1.0, 2.0, 0.5, w.omega_star + h)) > w.w_min);
    }
}

TEST_CASE("whispering-gallery scan rejects a boundary minimum")
{
    auto const [lo, hi] = default_whisper_window(8, 1.0, 0.5);
    double const mid = 0.5 * (lo + hi);
    ErrorKind const k = kind_of([&] {
        whispering_gallery_scan(8, 1.0, 2.0, 0.5, {lo, lo + 1e-3 * (mid - lo)}, 50);
    });
    CHECK(k == ErrorKind::window_too_coarse);
    CHECK(kind_of([&] { whispering_gallery_scan(8, 1.0, 2.0, 0.5, {hi, lo}, 50); }) == ErrorKind::validation);
}

TEST_CASE("stability report JSON")
{
    std::string const j = to_json(certify_beta_bounds(construct_localisation_example(3, 1.0, 3.0)));
    CHECK(j.find("beta_moduli") != std::string::npos);
}
