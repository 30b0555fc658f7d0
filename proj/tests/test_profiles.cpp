#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "burgers_rg/profiles.hpp"
#include "test_support.hpp"

using namespace burgers_rg;
using namespace burgers_rg::testing;

namespace {

const GridSpec grid(40.0, 2048);
const BqParams params{2.0};

/// \int x^k e^{-x^2} dx by the trapezoid rule on [-12, 12]; spectrally accurate.
double gaussian_power_integral(int k) {
    const int n = 24000;
    const double h = 24.0 / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = -12.0 + i * h;
        s += std::pow(x, k) * std::exp(-x * x) * ((i == 0 || i == n) ? 0.5 : 1.0);
    }
    return s * h;
}

} // namespace

TEST_CASE("reference profile moments") {
    const auto star = moments(profile(ProfileTag::fixed_point_f1star));
    CHECK(std::abs(star.mass) <= 1e-12);
    CHECK(star.first_moment == doctest::Approx(-1.0).epsilon(1e-12));

    const auto phi = moments(profile(ProfileTag::gaussian_phi));
    CHECK(phi.mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(phi.first_moment) <= 1e-12);

    for (int order : {1, 3, 5, 7}) {
        const auto h = moments(profile(ProfileTag::hermite_odd, 1.0, order));
        CHECK(std::abs(h.mass) <= 1e-12);
        if (order > 1) CHECK(std::abs(h.first_moment) <= 1e-12);
    }
    const auto dip = moments(profile(ProfileTag::bump_dipole));
    CHECK(std::abs(dip.mass) <= 1e-12);
}

TEST_CASE("hermite moment coefficient matches quadrature") {
    for (int order : {3, 5, 7}) {
        const double c = gaussian_power_integral(order + 1) / gaussian_power_integral(2);
        CHECK(hermite_moment_coefficient(order) == doctest::Approx(c).epsilon(1e-12));
    }
    CHECK(hermite_moment_coefficient(3) == 1.5);
    CHECK(hermite_moment_coefficient(5) == 3.75);
}

TEST_CASE("fixed point built on the Fourier side") {
    const auto f = fixed_point(grid);
    double err = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (k == grid.size() / 2) continue;
        const double w = grid.omega(k);
        err = std::max(err, std::abs(f.coeffs()[k] - cplx(0.0, w * std::exp(-w * w))));
    }
    CHECK(err <= 1e-15);
    CHECK(parity_defect(f) <= 1e-15);
}

TEST_CASE("bump dipole is not odd") {
    CHECK(parity_defect(profile(ProfileTag::bump_dipole)) > 0.1);
}

TEST_CASE("invalid profile parameters") {
    ProfileId id{ProfileTag::hermite_odd};
    id.order = 4;
    CHECK(kind_of([&] { make_profile(id, grid); }) == ErrorKind::invalid_argument);
    ProfileId w{ProfileTag::gaussian_phi};
    w.width = 0.0;
    CHECK(kind_of([&] { make_profile(w, grid); }) == ErrorKind::invalid_argument);
    ProfileId c{ProfileTag::custom_samples};
    c.samples = std::vector<double>(10, 0.0);
    CHECK(kind_of([&] { make_profile(c, grid); }) == ErrorKind::invalid_argument);
}

TEST_CASE("custom samples pass through") {
    ProfileId c{ProfileTag::custom_samples};
    const auto h = profile(ProfileTag::hermite_odd);
    c.samples.assign(h.samples().begin(), h.samples().end());
    CHECK(sup_diff(make_profile(c, grid), h) == 0.0);
}

TEST_CASE("decompose a multiple of the fixed point") {
    const auto d = decompose(3.0 * fixed_point(grid), params);
    CHECK(d.A == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(bq_norm_unchecked(d.g, 2.0) <= 1e-10);
}

TEST_CASE("decompose a zero-moment profile") {
    const auto h = profile(ProfileTag::hermite_odd);
    const auto d = decompose(h, params);
    CHECK(std::abs(d.A) <= 1e-12);
    CHECK(bq_norm_unchecked(d.g - h, 2.0) <= 1e-12 * bq_norm(h, params));
}

TEST_CASE("decompose a sum") {
    const auto h = profile(ProfileTag::hermite_odd);
    const auto d = decompose(fixed_point(grid) + h, params);
    CHECK(d.A == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bq_norm_unchecked(d.g - h, 2.0) <= 1e-12 * bq_norm(h, params));
}

TEST_CASE("decomposition properties on random zero-mass data") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        const auto r = random_field(grid, rng);
        // remove the mass with a Gaussian
        const auto f = r.combine(1.0, profile(ProfileTag::gaussian_phi), -moments(r).mass);
        const auto d = decompose(f, params);
        const auto rebuilt = fixed_point(grid).combine(d.A, d.g, 1.0);
        CHECK(bq_norm_unchecked(rebuilt - f, 2.0) <= 1e-12 * bq_norm(f, params));

        const auto m = moments(d.g);
        CHECK(std::abs(m.mass) <= 1e-12 * bq_norm(f, params));
        CHECK(std::abs(m.first_moment) <= 1e-12 * bq_norm(f, params));

        const auto again = decompose(rebuilt, params);
        CHECK(again.A == doctest::Approx(d.A).epsilon(1e-10));
    }
}

TEST_CASE("decompose rejects nonzero mass") {
    CHECK(kind_of([] { decompose(profile(ProfileTag::gaussian_phi), params); }) == ErrorKind::hypothesis);
}

TEST_CASE("odd extension") {
    const std::size_t c = grid.center();
    std::vector<double> half(grid.size() / 2);
    for (std::size_t i = 0; i < half.size(); ++i) {
        const double x = grid.x(c + i);
        half[i] = x * std::exp(-x * x);
    }
    const auto f = odd_extension(half, grid);
    CHECK(std::abs(moments(f).mass) <= 1e-15);
    double defect = 0.0;
    for (std::size_t j = 1; j < grid.size(); ++j)
        defect = std::max(defect, std::abs(f.samples()[j] + f.samples()[grid.mirror(j)]));
    CHECK(defect <= 1e-15);
    for (std::size_t i = 0; i < half.size(); ++i) CHECK(std::abs(f.samples()[c + i] - half[i]) <= 1e-14);

    const auto z = odd_extension(std::vector<double>(grid.size() / 2, 0.0), grid);
    CHECK(z.max_abs() == 0.0);

    // positive bump vanishing at the origin
    for (std::size_t i = 0; i < half.size(); ++i) {
        const double x = grid.x(c + i);
        half[i] = x * x * std::exp(-(x - 2.0) * (x - 2.0));
    }
    const auto b = odd_extension(half, grid);
    for (std::size_t i = 0; i < half.size(); ++i) CHECK(std::abs(b.samples()[c + i] - half[i]) <= 1e-14);
}

TEST_CASE("odd extension enforces the Dirichlet condition") {
    std::vector<double> half(grid.size() / 2);
    for (std::size_t i = 0; i < half.size(); ++i) half[i] = std::exp(-grid.x(grid.center() + i));
    CHECK(kind_of([&] { odd_extension(half, grid); }) == ErrorKind::hypothesis);
    CHECK(kind_of([&] { odd_extension(std::vector<double>(7, 0.0), grid); }) == ErrorKind::invalid_argument);
}

TEST_CASE("normalize_to_norm") {
    const auto f = normalize_to_norm(profile(ProfileTag::hermite_odd, 1.0, 1), 0.02, params);
    CHECK(bq_norm(f, params) == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(kind_of([] { normalize_to_norm(SpectralField::zero(grid), 1.0, params); }) == ErrorKind::invalid_argument);
}
