#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "burgers_rg/dynamics.hpp"
#include "burgers_rg/oracles.hpp"
#include "test_support.hpp"

using namespace burgers_rg;
using namespace burgers_rg::testing;

namespace {

const GridSpec grid(30.0, 1024);

SpectralField dipole(double norm, const GridSpec& g = grid) {
    return normalize_to_norm(profile(ProfileTag::bump_dipole, 1.0, 3, g), norm, {2.0});
}

OracleConfig fd(int fine_factor) {
    OracleConfig c;
    c.fine_factor = fine_factor;
    return c;
}

} // namespace

TEST_CASE("Cole-Hopf of zero data is zero") {
    const auto u = cole_hopf_solve(SpectralField::zero(grid), 0.5, 4.0);
    CHECK(u.max_abs() == 0.0);
    CHECK(u.time() == 4.0);
}

TEST_CASE("Cole-Hopf argument checks") {
    const auto f = dipole(2.0);
    CHECK(kind_of([&] { cole_hopf_solve(f, 0.0, 4.0); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([&] { cole_hopf_solve(f, 0.5, 0.5); }) == ErrorKind::invalid_argument);
    CHECK(sup_diff(cole_hopf_solve(f, 0.5, 1.0), f) == 0.0);
}

TEST_CASE("Cole-Hopf agrees with the spectral solver") {
    for (double lambda : {0.5, -0.5}) {
        const auto f = dipole(2.0);
        const auto ch = cole_hopf_solve(f, lambda, 4.0);
        const auto sb = solve_block(f, NonlinearitySpec::burgers(lambda), SolveConfig{}).final();
        CHECK(sup_diff(ch, sb) <= 1e-5);
        CHECK(sup_diff(ch, sb) <= 1e-11);
        // the nonlinearity is visible at this size
        CHECK(sup_diff(ch, linear_heat_solve(f, 4.0)) > 1e-6);
    }
}

TEST_CASE("linear heat oracle") {
    const auto f = dipole(2.0);
    const auto lin = linear_heat_solve(f, 4.0);
    const auto sb = solve_block(f, NonlinearitySpec::burgers(0.0), SolveConfig{}).final();
    CHECK(sup_diff(lin, sb) <= 1e-12);
    CHECK(lin.time() == 4.0);
}

TEST_CASE("finite differences without nonlinearity match the heat flow to second order") {
    const GridSpec coarse(20.0, 512);
    const auto f = dipole(2.0, coarse);
    const auto lin = linear_heat_solve(f, 4.0);
    const double e4 = sup_diff(fd_brute_solve(f, NonlinearitySpec::burgers(0.0), 4.0, fd(4)), lin);
    const double e8 = sup_diff(fd_brute_solve(f, NonlinearitySpec::burgers(0.0), 4.0, fd(8)), lin);
    CHECK(e4 <= 1e-4);
    CHECK(e4 / e8 >= 4.0 / 4.0);
    CHECK(e4 / e8 <= 4.0 * 4.0);
}

TEST_CASE("oracle triangle on Burgers data") {
    const auto f = dipole(2.0);
    const auto spec = NonlinearitySpec::burgers(0.5);
    const auto ch = cole_hopf_solve(f, 0.5, 4.0);
    const auto sb = solve_block(f, spec, SolveConfig{}).final();
    const auto bf = fd_brute_solve(f, spec, 4.0, fd(4));
    CHECK(sup_diff(ch, sb) <= 1e-5);
    CHECK(sup_diff(bf, ch) <= 1e-4);
    CHECK(sup_diff(bf, sb) <= 1e-4);
    CHECK(sup_diff(ch, linear_heat_solve(f, 4.0)) > 100.0 * sup_diff(bf, ch));
    // frozen from the reference run
    CHECK(sup_diff(bf, ch) == doctest::Approx(1.0440985745083231e-07).epsilon(1e-3));
}

TEST_CASE("finite-difference refinement against Cole-Hopf") {
    const GridSpec coarse(20.0, 512);
    const auto f = dipole(2.0, coarse);
    const auto spec = NonlinearitySpec::burgers(0.5);
    const auto ch = cole_hopf_solve(f, 0.5, 4.0);
    const double e4 = sup_diff(fd_brute_solve(f, spec, 4.0, fd(4)), ch);
    const double e8 = sup_diff(fd_brute_solve(f, spec, 4.0, fd(8)), ch);
    CHECK(e4 / e8 >= 4.0 / 4.0);
    CHECK(e4 / e8 <= 4.0 * 4.0);
}

TEST_CASE("finite differences on the odd series nonlinearity") {
    // u^3 u_x is a polynomial, so the radii are infinite and the data can be large
    // enough for the nonlinear part to dominate the discretization error.
    const double inf = std::numeric_limits<double>::infinity();
    const auto f = normalize_to_norm(profile(ProfileTag::hermite_odd, 1.0, 1, grid), 20.0, {2.5});
    const auto spec = NonlinearitySpec::h2_odd({Term{1, 1, 1.0}}, 1, 1, 1.0, inf, inf);
    SolveConfig cfg;
    cfg.q = 2.5;
    const auto bf = fd_brute_solve(f, spec, 4.0, fd(4));
    const auto sb = solve_block(f, spec, cfg).final();
    CHECK(sup_diff(bf, sb) <= 1e-4);
    CHECK(parity_defect(bf) <= 1e-12);
    CHECK(sup_diff(sb, linear_heat_solve(f, 4.0)) > 100.0 * sup_diff(bf, sb));
}

TEST_CASE("oracle config validation") {
    CHECK(kind_of([] { fd(2).validate(); }) == ErrorKind::invalid_argument);
    OracleConfig c;
    c.fd_dt_safety = 1.5;
    CHECK(kind_of([&] { c.validate(); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([] { fd_brute_solve(dipole(2.0), NonlinearitySpec::burgers(0.5), 4.0, fd(2)); }) ==
          ErrorKind::invalid_argument);
}
