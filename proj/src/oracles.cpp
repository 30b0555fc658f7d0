#include "burgers_rg/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "burgers_rg/errors.hpp"

namespace burgers_rg {

void OracleConfig::validate() const {
    if (kind == OracleKind::fd_brute && fine_factor < 4)
        fail(ErrorKind::invalid_argument, "fd_brute needs fine_factor >= 4");
    if (fine_factor < 1) fail(ErrorKind::invalid_argument, "fine_factor must be positive");
    if (!(fd_dt_safety > 0.0 && fd_dt_safety <= 1.0))
        fail(ErrorKind::invalid_argument, "fd_dt_safety must lie in (0, 1]");
}

namespace {

/// Samples of \int_0^x f, computed spectrally; the mean part contributes a linear ramp.
std::vector<double> antiderivative(const SpectralField& f) {
    const GridSpec& grid = f.grid();
    const std::size_t n = grid.size();
    const auto c = f.coeffs();
    std::vector<cplx> out(n);
    for (std::size_t k = 1; k < n; ++k) {
        if (k == n / 2) continue;
        out[k] = c[k] / cplx(0.0, grid.omega(k));
    }
    const SpectralField F = SpectralField::from_coeffs(grid, std::move(out));
    const double mean = c[0].real() / (2.0 * grid.half_width());
    std::vector<double> s(F.samples().begin(), F.samples().end());
    for (std::size_t j = 0; j < n; ++j) s[j] += mean * grid.x(j);
    const double origin = s[grid.center()];
    for (double& v : s) v -= origin;
    return s;
}

} // namespace

SpectralField cole_hopf_solve(const SpectralField& f, double lambda, double t) {
    if (lambda == 0.0) fail(ErrorKind::invalid_argument, "cole_hopf needs lambda != 0; use linear_heat_solve");
    if (!(t >= 1.0)) fail(ErrorKind::invalid_argument, "cole_hopf needs t >= 1");
    if (t == 1.0) return f.with_time(1.0);

    const GridSpec& grid = f.grid();
    const std::size_t n = grid.size();
    const double dx = grid.dx();
    const double tau = t - 1.0;
    if (std::sqrt(2.0 * tau) < 1.5 * dx)
        fail(ErrorKind::invalid_argument, "cole_hopf: heat kernel under-resolved for this time step");

    const auto F = antiderivative(f);
    const auto fs = f.samples();
    std::vector<double> phi(n), dphi(n);
    for (std::size_t j = 0; j < n; ++j) {
        phi[j] = std::exp(0.5 * lambda * F[j]);
        dphi[j] = 0.5 * lambda * fs[j] * phi[j];
    }

    // Phi = left + (right - left) S + psi with S a smoothed step evolved in closed form.
    const double left = phi.front();
    const double right = std::exp(0.5 * lambda * (F.back() + dx * fs.back()));
    const double sigma = 1.0;
    auto step = [&](double x, double s2) { return 0.5 * (1.0 + std::erf(x / std::sqrt(s2))); };
    std::vector<double> psi(n);
    for (std::size_t j = 0; j < n; ++j)
        psi[j] = phi[j] - left - (right - left) * step(grid.x(j), sigma * sigma);

    const double norm = dx / std::sqrt(4.0 * std::numbers::pi * tau);
    const double inv4t = 1.0 / (4.0 * tau);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        double p = 0.0, dp = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = x - grid.x(j);
            const double kern = std::exp(-d * d * inv4t);
            p += kern * psi[j];
            dp += kern * dphi[j];
        }
        const double value = left + (right - left) * step(x, sigma * sigma + 4.0 * tau) + norm * p;
        if (!(value > 0.0)) fail(ErrorKind::solver, "cole_hopf: potential lost positivity");
        u[i] = (2.0 / lambda) * norm * dp / value;
    }
    return SpectralField::from_samples(grid, std::move(u), t, f.parity_hint());
}

SpectralField linear_heat_solve(const SpectralField& f, double t) {
    if (!(t >= 1.0)) fail(ErrorKind::invalid_argument, "linear_heat needs t >= 1");
    return linear_propagate(f.with_time(1.0), 1.0, t);
}

namespace {

/// Refined samples of the band-limited interpolant of f.
std::vector<double> refine(const SpectralField& f, std::size_t factor) {
    const GridSpec& coarse = f.grid();
    const std::size_t n = coarse.size();
    const GridSpec fine(coarse.half_width(), n * factor);
    const std::size_t m = fine.size();
    const auto c = f.coeffs();
    std::vector<cplx> out(m);
    for (std::size_t k = 0; k < n; ++k) {
        const long w = coarse.wavenumber(k);
        if (k == n / 2) {
            out[n / 2] += 0.5 * c[k];
            out[m - n / 2] += 0.5 * c[k];
            continue;
        }
        out[w >= 0 ? static_cast<std::size_t>(w) : m - static_cast<std::size_t>(-w)] = c[k];
    }
    const SpectralField F = SpectralField::from_coeffs(fine, std::move(out));
    return {F.samples().begin(), F.samples().end()};
}

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

} // namespace

SpectralField fd_brute_solve(const SpectralField& f, const NonlinearitySpec& spec, double t,
                             const OracleConfig& cfg) {
    cfg.validate();
    spec.validate();
    if (!(t >= 1.0)) fail(ErrorKind::invalid_argument, "fd_brute needs t >= 1");

    const GridSpec& coarse = f.grid();
    const std::size_t factor = static_cast<std::size_t>(cfg.fine_factor);
    const std::size_t m = coarse.size() * factor;
    const double h = 2.0 * coarse.half_width() / static_cast<double>(m);

    // Node 0 sits at x = -X and the implied node m at x = +X; both are held at zero.
    std::vector<double> u = refine(f, factor);
    u[0] = 0.0;

    const double limit = 2.785 * h * h / 4.0;
    const double span = t - 1.0;
    const std::size_t steps = span > 0.0 ? static_cast<std::size_t>(std::ceil(span / (cfg.fd_dt_safety * limit))) : 0;
    const double dt = steps ? span / static_cast<double>(steps) : 0.0;

    const double lambda = spec.is_linear() ? 0.0 : spec.lambda;
    const double r_u = spec.r_u, r_v = spec.r_v;
    auto rhs = [&](const std::vector<double>& v, std::vector<double>& out) {
        out[0] = 0.0;
        const double inv_h2 = 1.0 / (h * h);
        const double inv_2h = 0.5 / h;
        for (std::size_t j = 1; j < m; ++j) {
            const double left = v[j - 1];
            const double right = j + 1 < m ? v[j + 1] : 0.0;
            const double uj = v[j];
            double val = (left - 2.0 * uj + right) * inv_h2;
            if (lambda != 0.0) {
                const double ux = (right - left) * inv_2h;
                if (std::abs(uj) >= 0.9 * r_u || std::abs(ux) >= 0.9 * r_v)
                    fail(ErrorKind::solver, "fd_brute: solution left the analyticity region");
                double F = 0.0;
                switch (spec.form) {
                case NonlinearForm::burgers: F = uj * ux; break;
                case NonlinearForm::h1_derivative:
                    for (const Term& tm : spec.terms) F += tm.c * ipow(uj, tm.m) * ux;
                    break;
                case NonlinearForm::h2_odd:
                    for (const Term& tm : spec.terms) F += tm.c * ipow(uj, 2 * tm.m + 1) * ipow(ux, tm.n);
                    break;
                }
                val += lambda * F;
            }
            out[j] = val;
        }
    };

    std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
    for (std::size_t s = 0; s < steps; ++s) {
        rhs(u, k1);
        for (std::size_t j = 0; j < m; ++j) tmp[j] = u[j] + 0.5 * dt * k1[j];
        rhs(tmp, k2);
        for (std::size_t j = 0; j < m; ++j) tmp[j] = u[j] + 0.5 * dt * k2[j];
        rhs(tmp, k3);
        for (std::size_t j = 0; j < m; ++j) tmp[j] = u[j] + dt * k3[j];
        rhs(tmp, k4);
        for (std::size_t j = 0; j < m; ++j)
            u[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        if (!std::isfinite(u[m / 2])) fail(ErrorKind::solver, "fd_brute: blow-up");
    }

    std::vector<double> out(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) out[i] = u[i * factor];
    return SpectralField::from_samples(coarse, std::move(out), t, f.parity_hint());
}

} // namespace burgers_rg
