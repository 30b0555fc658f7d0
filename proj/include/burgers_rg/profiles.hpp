#pragma once

#include <span>
#include <vector>

#include "burgers_rg/spectral.hpp"

namespace burgers_rg {

enum class ProfileTag {
    fixed_point_f1star,
    gaussian_phi,
    hermite_odd,
    bump_dipole,
    custom_samples,
};

/// Parameterized initial data.
///
/// - fixed_point_f1star: fhat(w) = amplitude * i w exp(-width^2 w^2); width 1 is
///   f1*(x) = -(x/2) exp(-x^2/4) / sqrt(4 pi).
/// - gaussian_phi: fhat(w) = amplitude * exp(-width^2 w^2), the unit-mass heat
///   kernel at time width^2.
/// - hermite_odd(order): amplitude * P(x/width) exp(-(x/width)^2) with P(s) = s
///   for order 1 and P(s) = s^order - c s otherwise, c chosen so that the first
///   moment vanishes.
/// - bump_dipole(shift): h(x - shift) - h(x + shift) with the asymmetric bump
///   h(x) = amplitude * exp(-(x/width)^2) (1 + x/(2 width)). Zero mass, not odd.
/// - custom_samples: the given grid samples.
struct ProfileId {
    ProfileTag tag = ProfileTag::fixed_point_f1star;
    double amplitude = 1.0;
    double width = 1.0;
    int order = 3;
    double shift = 1.5;
    std::vector<double> samples;
};

SpectralField make_profile(const ProfileId& id, const GridSpec& grid);

/// f1* with unit amplitude.
SpectralField fixed_point(const GridSpec& grid);

/// Linear coefficient c of the zero-first-moment odd polynomial s^k - c s.
double hermite_moment_coefficient(int order);

struct Decomposition {
    double A = 0.0;
    SpectralField g;
};

/// Mass tolerance relative to ||f||_q used by decompose.
inline constexpr double zero_mass_tolerance = 1e-8;

/// f = A f1* + g with A = -\int x f dx, so that ghat(0) = ghat'(0) = 0.
/// Rejects data whose mass is not zero to tolerance.
Decomposition decompose(const SpectralField& f, const BqParams& params);

/// Odd extension of samples given at the grid points x >= 0 (x_{N/2}, ..., x_{N-1}).
SpectralField odd_extension(std::span<const double> samples_half, const GridSpec& grid);

/// f scaled so that ||f||_q equals target.
SpectralField normalize_to_norm(const SpectralField& f, double target, const BqParams& params);

} // namespace burgers_rg
