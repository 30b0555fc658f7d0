#pragma once

#include "burgers_rg/dynamics.hpp"
#include "burgers_rg/spectral.hpp"

namespace burgers_rg {

enum class OracleKind { cole_hopf, linear_heat, fd_brute };

struct OracleConfig {
    OracleKind kind = OracleKind::fd_brute;
    /// Grid refinement multiplier relative to the spectral grid (>= 4 for fd_brute).
    int fine_factor = 4;
    /// Fraction of the explicit RK4 stability limit used for the time step.
    double fd_dt_safety = 0.9;

    void validate() const;
};

/// Exact solution at time t of u_t = u_xx + lambda u u_x with u(., 1) = f, via
/// u = (2/lambda) Phi_x / Phi and Phi(x, 1) = exp((lambda/2) \int_0^x f). The
/// form u_t + u u_x = u_xx is lambda = -1.
SpectralField cole_hopf_solve(const SpectralField& f, double lambda, double t);

/// Heat flow from time 1 to t: uhat(w, t) = exp(-w^2 (t - 1)) fhat(w).
SpectralField linear_heat_solve(const SpectralField& f, double t);

/// Explicit RK4 with second-order central differences on a refined grid, with
/// u = 0 imposed at x = +-X. The result is injected back onto the grid of f.
SpectralField fd_brute_solve(const SpectralField& f, const NonlinearitySpec& spec, double t,
                             const OracleConfig& cfg);

} // namespace burgers_rg
