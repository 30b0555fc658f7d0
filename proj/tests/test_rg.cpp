#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "burgers_rg/constants.hpp"
#include "burgers_rg/rg.hpp"
#include "test_support.hpp"

using namespace burgers_rg;
using namespace burgers_rg::testing;

namespace {

const GridSpec grid(40.0, 2048);

RGConfig linear_config(double L = 2.0) {
    RGConfig cfg;
    cfg.L = L;
    cfg.solver.L = L;
    cfg.nonlinearity = NonlinearitySpec::burgers(0.0);
    return cfg;
}

RGConfig burgers_config(double lambda, int iters) {
    RGConfig cfg;
    cfg.nonlinearity = NonlinearitySpec::burgers(lambda);
    cfg.max_iters = iters;
    return cfg;
}

SpectralField small_data(double norm, double q = 2.0) {
    return normalize_to_norm(profile(ProfileTag::hermite_odd, 1.0, 1), norm, {q});
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("the fixed point is fixed by the linear step") {
    const auto cfg = linear_config();
    const auto s0 = initial_state(fixed_point(grid), cfg);
    CHECK(s0.A == doctest::Approx(1.0).epsilon(1e-12));
    const auto s1 = rg_step(s0, cfg);
    CHECK(s1.n == 1);
    CHECK(s1.A == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s1.g_norm <= 1e-8);
    CHECK(bq_norm_unchecked(s1.f - fixed_point(grid), 2.0) <= 1e-8);
    REQUIRE(s1.history.size() == 2);
    CHECK(s1.history[1].t == 4.0);
}

TEST_CASE("the linear step contracts zero-moment data") {
    const GridSpec probe_grid(128.0, 4096);
    const std::vector<double> Ls{2.0, 4.0, 8.0};
    const auto est = estimate_contraction_constant(Ls, 2.0, default_probe_family(probe_grid, 2.0));
    for (double L : Ls) {
        const auto cfg = linear_config(L);
        const auto g0 = profile(ProfileTag::hermite_odd, 1.0, 3, probe_grid);
        const auto s0 = initial_state(g0, cfg);
        CHECK(std::abs(s0.A) <= 1e-12);
        const auto s1 = rg_step(s0, cfg);
        CHECK(s1.f_norm / s0.f_norm <= est.C_emp / L);
    }
}

TEST_CASE("linear runs keep the prefactor") {
    auto cfg = linear_config();
    cfg.max_iters = 4;
    const auto f0 = small_data(0.02) + profile(ProfileTag::hermite_odd, 0.8, 5).scaled(0.003);
    const double A0 = -moments(f0).first_moment;
    const auto res = run_rg(f0, cfg);
    for (const auto& r : res.history) CHECK(r.A == doctest::Approx(A0).epsilon(1e-12));
    CHECK(res.A_limit == doctest::Approx(A0).epsilon(1e-12));
}

TEST_CASE("linear steps compose") {
    const auto f0 = small_data(0.02) + profile(ProfileTag::hermite_odd, 0.8, 3).scaled(0.01);
    const auto two = rg_step(rg_step(initial_state(f0, linear_config(2.0)), linear_config(2.0)), linear_config(2.0));
    const auto one = rg_step(initial_state(f0, linear_config(4.0)), linear_config(4.0));
    CHECK(sup_diff(two.f, one.f) <= 1e-9 * one.f.max_abs());
}

TEST_CASE("rate bound with no residual") {
    auto cfg = linear_config();
    cfg.max_iters = 4;
    cfg.stop_g_tol = 1e-30;
    const auto res = run_rg(fixed_point(grid).scaled(0.02), cfg);
    CHECK(res.history.size() == 5);
    for (const auto& r : res.history) CHECK(r.e_n <= 1e-8);
    const auto constants = eval_constants(2.0, 2.0, 0.5, cfg.nonlinearity, 0.02);
    CHECK(verify_rate_bound(res.history, cfg, constants).violations == 0);
}

TEST_CASE("coupling bookkeeping matches the split into a common coupling and term powers") {
    const std::vector<Term> terms{Term{1, 1, 1.0}, Term{2, 1, -0.5}, Term{1, 2, 0.25}};
    const int a = 1, b = 1;
    const double lambda = 0.8, L = 2.0;
    RGConfig cfg;
    cfg.bq.q = 2.5;
    cfg.solver.q = 2.5;
    cfg.max_iters = 3;
    cfg.nonlinearity = NonlinearitySpec::h2_odd(terms, a, b, lambda);
    auto s = initial_state(small_data(0.001, 2.5), cfg);
    for (int n = 0; n <= 3; ++n) {
        const auto eff = effective_nonlinearity(s, cfg);
        const double common = lambda * std::pow(L, -n * (4 * a + 3 * b - 2));
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const Term& t = terms[i];
            const double per_term = lambda * t.c * std::pow(L, -n * (4 * t.m + 3 * t.n - 2));
            const double split = common * t.c * std::pow(L, n * (4 * (a - t.m) + 3 * (b - t.n)));
            const double got = eff.lambda * eff.terms[i].c;
            CHECK(std::abs(got - per_term) <= 1e-15 * std::abs(per_term));
            CHECK(std::abs(got - split) <= 1e-15 * std::abs(split));
        }
        CHECK(s.lambda == common);
        if (n < 3) s = rg_step(s, cfg);
    }
}

TEST_CASE("burgers run invariants") {
    const auto cfg = burgers_config(0.5, 5);
    const auto res = run_rg(small_data(0.02), cfg);
    REQUIRE(res.history.size() == 6);
    for (std::size_t n = 0; n < res.history.size(); ++n) {
        const auto& r = res.history[n];
        CHECK(std::abs(r.mass) <= 1e-10);
        CHECK(r.lambda == doctest::Approx(0.5 * std::pow(2.0, -static_cast<double>(n))).epsilon(1e-15));
        if (n >= 1) {
            // recomputed increment against the Duhamel increment
            const double dA = r.A - res.history[n - 1].A;
            CHECK(r.dA_duhamel == doctest::Approx(dA).epsilon(1e-6));
            CHECK(r.block_mass_drift <= 1e-12);
        }
    }
    CHECK(res.contracting);
    CHECK(res.g_ratios.size() == 5);
    CHECK(res.dA_ratios.size() == 4);

    const auto constants = eval_constants(2.0, 2.0, 0.5, cfg.nonlinearity, 0.02,
                                          estimate_contraction_constant(
                                              std::vector<double>{2.0, 4.0, 8.0}, 2.0,
                                              default_probe_family(GridSpec(128.0, 4096), 2.0)));
    const auto steps = check_step_bounds(res.history, constants);
    CHECK(steps.checked == 5);
    CHECK(steps.prefactor_violations == 0);
    CHECK(steps.residual_violations == 0);
}

TEST_CASE("step bounds need a contraction constant") {
    const auto res = run_rg(small_data(0.02), burgers_config(0.5, 2));
    const auto constants = eval_constants(2.0, 2.0, 0.5, NonlinearitySpec::burgers(0.5), 0.02);
    CHECK(kind_of([&] { check_step_bounds(res.history, constants); }) == ErrorKind::invalid_argument);
}

TEST_CASE("hypothesis checks") {
    // nonzero mass
    CHECK(kind_of([] { initial_state(profile(ProfileTag::gaussian_phi), burgers_config(0.5, 2)); }) ==
          ErrorKind::hypothesis);
    // the odd-series form needs odd data
    RGConfig h2;
    h2.bq.q = 2.5;
    h2.solver.q = 2.5;
    h2.nonlinearity = NonlinearitySpec::h2_odd({Term{1, 1, 1.0}}, 1, 1, 1.0);
    const auto dip = decompose(profile(ProfileTag::bump_dipole), {2.5}).g.scaled(0.001);
    CHECK(kind_of([&] { initial_state(dip, h2); }) == ErrorKind::hypothesis);
    // working threshold applies to nonlinear runs only
    CHECK(kind_of([] { run_rg(small_data(0.2), burgers_config(0.5, 2)); }) == ErrorKind::hypothesis);
    auto lin = linear_config();
    lin.max_iters = 1;
    CHECK_FALSE(kind_of([&] { run_rg(small_data(0.2), lin); }).has_value());
}

TEST_CASE("config validation") {
    RGConfig cfg;
    cfg.solver.L = 3.0;
    CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::invalid_argument);
    RGConfig d;
    d.delta = 1.5;
    CHECK(kind_of([&] { d.validate(); }) == ErrorKind::invalid_argument);
    RGConfig it;
    it.max_iters = -1;
    CHECK(kind_of([&] { it.validate(); }) == ErrorKind::invalid_argument);
}

TEST_CASE("exponents of an exactly self-similar family") {
    const GridSpec wide(128.0, 4096);
    std::vector<SpectralField> snaps;
    for (double t : {1.0, 4.0, 16.0, 64.0}) {
        std::vector<double> s(wide.size());
        for (std::size_t j = 0; j < wide.size(); ++j) {
            const double y = wide.x(j) / std::sqrt(t);
            s[j] = -(y / 2.0) * std::exp(-y * y / 4.0) / std::sqrt(4.0 * std::numbers::pi) / t;
        }
        snaps.push_back(SpectralField::from_samples(wide, s, t));
    }
    const auto fit = estimate_exponents(snaps);
    CHECK(fit.alpha == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.beta == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(kind_of([&] { estimate_exponents(std::span(snaps).first(3)); }) == ErrorKind::invalid_argument);
}

TEST_CASE("peak refinement") {
    const auto [x, v] = refined_peak(fixed_point(grid));
    // f1* = -(x/2) e^{-x^2/4}/sqrt(4 pi) peaks at |x| = sqrt(2)
    CHECK(std::abs(x) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(std::abs(v) == doctest::Approx(std::exp(-0.5) / std::sqrt(2.0) / std::sqrt(4.0 * std::numbers::pi))
                             .epsilon(1e-12));
    CHECK(kind_of([] { refined_peak(SpectralField::zero(grid)); }) == ErrorKind::invalid_argument);
}

TEST_CASE("linear heat exponents approach the self-similar values") {
    auto cfg = linear_config();
    cfg.max_iters = 8;
    const auto f0 = small_data(0.02) + profile(ProfileTag::hermite_odd, 0.8, 3).scaled(0.02);
    const auto res = run_rg(f0, cfg);
    const auto early = estimate_exponents(res.profiles, 2.0, 0, 3);
    const auto late = estimate_exponents(res.profiles, 2.0, 5, 8);
    CHECK(std::abs(late.alpha - 1.0) <= std::abs(early.alpha - 1.0));
    CHECK(std::abs(late.beta - 0.5) <= std::abs(early.beta - 0.5));
    CHECK(late.alpha == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(late.beta == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("run records are deterministic") {
    const auto res = run_rg(small_data(0.02), burgers_config(-0.5, 3));
    const auto dir = std::filesystem::temp_directory_path() / "burgers_rg_test_rg";
    std::filesystem::create_directories(dir);
    write_run_records(res.history, dir / "a.csv");
    const auto again = run_rg(small_data(0.02), burgers_config(-0.5, 3));
    write_run_records(again.history, dir / "b.csv");
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.csv").starts_with("n,t,A_n,g_norm,f_norm,lambda_n,"));
    write_profile_final(res.profiles.back(), res.A_limit, dir / "p.csv");
    CHECK(slurp(dir / "p.csv").starts_with("x,scaled_u,A_limit_times_f1star,residual"));
}
