#include "helm/assembly.hpp"
#include "helm/error.hpp"
#include "helm/suites.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace helm;

namespace {

double max_abs_diff(const Block& a, const Block& b)
{
    double e = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) e = std::max(e, std::abs(a[i][j] - b[i][j]));
    return e;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

std::vector<cplx> apply(const std::vector<std::vector<cplx>>& a, const std::vector<cplx>& x)
{
    std::vector<cplx> y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

} // namespace

TEST_CASE("normaliser maps coupling blocks to constants")
{
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        RawSystem const raw = assemble_raw(random_oracle_spec(seed, 8));
        BlockSystem const sys = normalize(raw);
        for (int l = 1; l <= raw.n; ++l) {
            Block const D = normaliser_block(raw, l);
            Block const T = {{{raw.t[l - 1][0], 0.0}, {raw.t[l - 1][1], 0.0}}};
            Block const R = {{{0.0, raw.r[l - 1][0]}, {0.0, raw.r[l - 1][1]}}};
            CHECK(max_abs_diff(multiply(D, T), sys.T_hat) < 1e-12);
            CHECK(max_abs_diff(multiply(D, R), sys.R_hat) < 1e-12);
            Block const DS = multiply(D, raw.S[l - 1]);
            double const scale = std::max(1.0, std::abs(det(sys.S_hat[l - 1])));
            CHECK(max_abs_diff(DS, sys.S_hat[l - 1]) < 1e-10 * scale);
        }
    }
}

TEST_CASE("normalised right-hand side has a single entry")
{
    BlockSystem const sys = normalize(assemble_raw(random_oracle_spec(21, 6)));
    for (std::size_t i = 0; i + 1 < sys.rhs.size(); ++i) CHECK(sys.rhs[i] == cplx(0.0));
    CHECK(std::abs(sys.rhs.back()) > 0.0);
}

TEST_CASE("banded and dense LU agree and have small residuals")
{
    for (std::uint64_t seed = 30; seed < 40; ++seed) {
        ProblemSpec const s = random_oracle_spec(seed, 12);
        RawSystem const raw = assemble_raw(s);
        BlockSystem const sys = normalize(raw);
        DenseSolution const band = dense_solve(sys, SolverKind::banded);
        DenseSolution const lu = dense_solve(sys, SolverKind::reference_lu);
        CHECK(band.residual < 1e-12);
        CHECK(lu.residual < 1e-12);
        CHECK(normalised_residual(sys, band.coeffs) < 1e-12);
        CHECK(dense_solve(raw).residual < 1e-12);
        for (std::size_t k = 0; k < band.coeffs.entries.size(); ++k) {
            double const size = std::max(std::abs(lu.coeffs.entries[k]), 1e-300);
            CHECK(std::abs(band.coeffs.entries[k] - lu.coeffs.entries[k]) <= 1e-8 * std::max(size, 1e-8));
        }
    }
}

TEST_CASE("quad-precision reference solves the raw system")
{
    ProblemSpec const s = random_oracle_spec(44, 10);
    RawSystem const raw = assemble_raw(s);
    CoefficientVector const ref = reference_solve(s);
    auto const a = to_dense(raw);
    auto const y = apply(a, ref.entries);
    double err = 0.0, size = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        err = std::max(err, std::abs(y[i] - raw.rhs[i]));
        size = std::max(size, std::abs(raw.rhs[i]));
    }
    CHECK(err <= 1e-12 * size);
    CHECK(ref.A1 == cplx(0.0));
    CHECK(rel(ref.BN, raw.C) < 1e-14);
}

TEST_CASE("determinant recursion against dense elimination")
{
    for (std::uint64_t seed = 50; seed < 60; ++seed) {
        ProblemSpec const s = random_oracle_spec(seed, 8);
        BlockSystem const sys = normalize(assemble_raw(s));
        cplx const direct = lu_determinant(to_dense(sys));
        CHECK(rel(determinant_recursion(s), direct) < 1e-10);
        BandMatrix band(2 * sys.n, 2, 2);
        auto const a = to_dense(sys);
        for (int i = 0; i < 2 * sys.n; ++i)
            for (int j = std::max(0, i - 2); j <= std::min(2 * sys.n - 1, i + 2); ++j) band.at(i, j) = a[i][j];
        band.factorize();
        CHECK(rel(band.determinant(), direct) < 1e-10);
    }
}

TEST_CASE("W sequence starts from the identity data")
{
    ProblemSpec const s = construct_localisation_example(3, 1.0, 3.0);
    auto const W = w_sequence(s);
    REQUIRE(W.size() == 4);
    CHECK(W[0][0] == cplx(1.0));
    CHECK(W[0][1] == cplx(0.0));
}

TEST_CASE("block helpers")
{
    Block const a = {{{1.0, 2.0}, {3.0, 4.0}}};
    Block const b = {{{0.0, 1.0}, {1.0, 0.0}}};
    Block const ab = multiply(a, b);
    CHECK(ab[0][0] == cplx(2.0));
    CHECK(ab[1][1] == cplx(3.0));
    CHECK(det(a) == cplx(-2.0));
}

TEST_CASE("singular band matrix is rejected")
{
    BandMatrix m(3, 1, 1);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = 1.0;
    try {
        m.factorize();
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::singular_system);
    }
}

TEST_CASE("dense LU solves a small system")
{
    std::vector<std::vector<cplx>> a = {{0.0, 2.0}, {cplx(0, 1), 1.0}};
    auto const x = lu_solve(a, {4.0, cplx(1, 2)});
    CHECK(std::abs(x[0] - cplx(2, 1)) < 1e-15);
    CHECK(std::abs(x[1] - cplx(2.0)) < 1e-15);
    CHECK(std::abs(lu_determinant(a) - cplx(0, -2)) < 1e-15);
}
