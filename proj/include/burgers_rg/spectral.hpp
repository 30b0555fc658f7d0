#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace burgers_rg {

using cplx = std::complex<double>;

/// Uniform periodic grid on [-X, X) with N points (N a power of two, N >= 64).
///
/// Frequencies are stored in FFT order: index k < N/2 holds k*dw, index
/// k >= N/2 holds (k - N)*dw, so the Nyquist frequency -N/2*dw sits at N/2.
class GridSpec {
public:
    GridSpec(double half_width, std::size_t num_points);

    double half_width() const { return half_width_; }
    std::size_t size() const { return n_; }
    double dx() const { return 2.0 * half_width_ / static_cast<double>(n_); }
    double domega() const;
    double x(std::size_t j) const { return -half_width_ + static_cast<double>(j) * dx(); }
    double omega(std::size_t k) const;
    /// Signed wavenumber index in [-N/2, N/2).
    long wavenumber(std::size_t k) const;
    /// Index of the grid point at -x_j (x_0 = -X is its own mirror).
    std::size_t mirror(std::size_t j) const { return (n_ - j) % n_; }
    /// Index of x = 0.
    std::size_t center() const { return n_ / 2; }
    double max_omega() const;

    bool operator==(const GridSpec&) const = default;

private:
    double half_width_;
    std::size_t n_;
};

enum class Parity { none, odd, even };

/// A real function on the grid, carried both as samples and as transform
/// values fhat(w) = \int f(x) exp(-i w x) dx. Immutable.
class SpectralField {
public:
    static SpectralField from_samples(const GridSpec& grid, std::vector<double> samples,
                                      double time = 1.0, Parity parity = Parity::none);
    static SpectralField from_coeffs(const GridSpec& grid, std::vector<cplx> coeffs,
                                     double time = 1.0, Parity parity = Parity::none);
    static SpectralField zero(const GridSpec& grid, double time = 1.0);

    const GridSpec& grid() const { return grid_; }
    std::span<const cplx> coeffs() const { return coeffs_; }
    std::span<const double> samples() const { return samples_; }
    double time() const { return time_; }
    Parity parity_hint() const { return parity_; }

    SpectralField with_time(double t) const;
    SpectralField with_parity(Parity p) const;

    /// a*this + b*other; grids must match.
    SpectralField combine(double a, const SpectralField& other, double b) const;
    SpectralField scaled(double a) const;

    double max_abs() const;

private:
    SpectralField(GridSpec grid, std::vector<double> samples, std::vector<cplx> coeffs,
                  double time, Parity parity);

    GridSpec grid_;
    std::vector<double> samples_;
    std::vector<cplx> coeffs_;
    double time_;
    Parity parity_;
};

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& f);

/// Samples -> transform values, scaled by dx so they approximate the integral
/// transform. Rejects non-finite input.
SpectralField forward_transform(std::span<const double> samples, const GridSpec& grid,
                                double time = 1.0);
std::vector<double> inverse_transform(const SpectralField& f);

/// Transform of x^p f(x) times (-i)^p, i.e. the p-th frequency derivative of fhat.
std::vector<cplx> transform_derivative(const SpectralField& f, int order);

/// Samples of the spatial derivative, computed by i*w multiplication.
std::vector<double> spatial_derivative(const SpectralField& f);

struct BqParams {
    double q = 2.0;
    /// Largest allowed ratio between the summand at the Nyquist frequency and
    /// the interior maximum.
    double tail_tolerance = 1e-6;
    /// Absolute level below which a large tail ratio is treated as roundoff.
    double abs_floor = 0.0;
};

/// sup_w (1+|w|^q)(|fhat| + |fhat'| + |fhat''|) over the discrete frequencies.
double bq_norm(const SpectralField& f, const BqParams& params);

/// Same maximization with no truncation check; used for iterate differences
/// that legitimately sit at roundoff level.
double bq_norm_unchecked(const SpectralField& f, double q);

/// Per-frequency summands (1+|w|^q)(|fhat| + |fhat'| + |fhat''|), FFT order.
std::vector<double> bq_summands(const SpectralField& f, double q);

struct Moments {
    double mass = 0.0;
    double first_moment = 0.0;
};

Moments moments(const SpectralField& f);

/// g(x) = L^2 f(L x) by band-limited interpolation of f; points with |Lx| outside
/// [-X, X) read zero. Requires L >= 1 and f decayed near the domain edge.
SpectralField resample_rescale(const SpectralField& f, double scale,
                               double tail_tolerance = 1e-6);

/// Band-limited interpolant of f and its derivative at an arbitrary point.
double interpolate(const SpectralField& f, double x);
double interpolate_derivative(const SpectralField& f, double x);

/// max_j |f(x_j) + f(-x_j)| / max_j |f(x_j)|; zero for the zero field.
double parity_defect(const SpectralField& f);

/// Writes "x,f" and "omega,re_fhat,im_fhat" tables.
void write_field_csv(const SpectralField& f, const std::filesystem::path& samples_path,
                     const std::filesystem::path& spectrum_path);

} // namespace burgers_rg
