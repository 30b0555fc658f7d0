#include "burgers_rg/profiles.hpp"

#include <cmath>
#include <sstream>

#include "burgers_rg/errors.hpp"

namespace burgers_rg {

double hermite_moment_coefficient(int order) {
    if (order < 3) return 0.0;
    // \int s^{k+1} e^{-s^2} ds / \int s^2 e^{-s^2} ds = Gamma((k+2)/2) / Gamma(3/2)
    return std::tgamma(0.5 * (order + 2)) / std::tgamma(1.5);
}

namespace {

std::vector<double> sample(const GridSpec& grid, auto&& fn) {
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = fn(grid.x(j));
    return out;
}

SpectralField from_transform(const GridSpec& grid, auto&& fhat, Parity parity) {
    std::vector<cplx> c(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) c[k] = fhat(grid.omega(k));
    // The Nyquist entry must be real for a real field.
    c[grid.size() / 2] = c[grid.size() / 2].real();
    return SpectralField::from_coeffs(grid, std::move(c), 1.0, parity);
}

} // namespace

SpectralField make_profile(const ProfileId& id, const GridSpec& grid) {
    if (!std::isfinite(id.amplitude) || !std::isfinite(id.width) || !(id.width > 0.0))
        fail(ErrorKind::invalid_argument, "profile: amplitude must be finite and width positive");
    const double a = id.amplitude;
    const double w = id.width;
    switch (id.tag) {
    case ProfileTag::fixed_point_f1star:
        return from_transform(
            grid, [&](double om) { return a * cplx(0.0, om) * std::exp(-w * w * om * om); },
            Parity::odd);
    case ProfileTag::gaussian_phi:
        return from_transform(
            grid, [&](double om) { return cplx(a * std::exp(-w * w * om * om), 0.0); },
            Parity::even);
    case ProfileTag::hermite_odd: {
        if (id.order < 1 || id.order % 2 == 0)
            fail(ErrorKind::invalid_argument, "hermite_odd: order must be a positive odd integer");
        const double c = hermite_moment_coefficient(id.order);
        auto s = sample(grid, [&](double x) {
            const double u = x / w;
            const double poly = std::pow(u, id.order) - c * u;
            return a * poly * std::exp(-u * u);
        });
        return SpectralField::from_samples(grid, std::move(s), 1.0, Parity::odd);
    }
    case ProfileTag::bump_dipole: {
        if (!std::isfinite(id.shift))
            fail(ErrorKind::invalid_argument, "bump_dipole: shift must be finite");
        auto h = [&](double x) {
            const double u = x / w;
            return a * std::exp(-u * u) * (1.0 + 0.5 * u);
        };
        auto s = sample(grid, [&](double x) { return h(x - id.shift) - h(x + id.shift); });
        return SpectralField::from_samples(grid, std::move(s));
    }
    case ProfileTag::custom_samples:
        return SpectralField::from_samples(grid, id.samples);
    }
    fail(ErrorKind::invalid_argument, "unknown profile tag");
}

SpectralField fixed_point(const GridSpec& grid) {
    return make_profile(ProfileId{}, grid);
}

Decomposition decompose(const SpectralField& f, const BqParams& params) {
    const double norm = bq_norm(f, params);
    if (norm == 0.0) return {0.0, f};
    const auto m = moments(f);
    if (std::abs(m.mass) > zero_mass_tolerance * norm) {
        std::ostringstream msg;
        msg << (f.parity_hint() == Parity::odd ? "oddness hypothesis" : "zero-mass hypothesis")
            << " violated: mass " << m.mass << " exceeds " << zero_mass_tolerance
            << " * ||f||_q = " << zero_mass_tolerance * norm;
        fail(ErrorKind::hypothesis, msg.str());
    }
    const double A = -m.first_moment;
    auto g = f.combine(1.0, fixed_point(f.grid()), -A);
    return {A, g.with_parity(f.parity_hint())};
}

SpectralField odd_extension(std::span<const double> samples_half, const GridSpec& grid) {
    const std::size_t n = grid.size();
    if (samples_half.size() != n / 2)
        fail(ErrorKind::invalid_argument, "odd_extension: expected N/2 samples on x >= 0");
    double peak = 0.0;
    for (double v : samples_half) {
        if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "odd_extension: non-finite sample");
        peak = std::max(peak, std::abs(v));
    }
    if (std::abs(samples_half[0]) > 1e-12 * peak) {
        std::ostringstream msg;
        msg << "Dirichlet condition violated: f(0) = " << samples_half[0];
        fail(ErrorKind::hypothesis, msg.str());
    }
    std::vector<double> full(n, 0.0);
    const std::size_t c = grid.center();
    for (std::size_t i = 1; i < n / 2; ++i) {
        full[c + i] = samples_half[i];
        full[c - i] = -samples_half[i];
    }
    return SpectralField::from_samples(grid, std::move(full), 1.0, Parity::odd);
}

SpectralField normalize_to_norm(const SpectralField& f, double target, const BqParams& params) {
    const double norm = bq_norm(f, params);
    if (norm == 0.0) fail(ErrorKind::invalid_argument, "cannot normalize the zero field");
    return f.scaled(target / norm);
}

} // namespace burgers_rg
