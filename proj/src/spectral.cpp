#include "burgers_rg/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "burgers_rg/csv.hpp"
#include "burgers_rg/errors.hpp"
#include "burgers_rg/fft.hpp"

namespace burgers_rg {

GridSpec::GridSpec(double half_width, std::size_t num_points)
    : half_width_(half_width), n_(num_points) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        fail(ErrorKind::invalid_argument, "grid: half width X must be positive and finite");
    if (num_points < 64 || !std::has_single_bit(num_points))
        fail(ErrorKind::invalid_argument, "grid: N must be a power of two >= 64");
}

double GridSpec::domega() const { return std::numbers::pi / half_width_; }

long GridSpec::wavenumber(std::size_t k) const {
    const auto n = static_cast<long>(n_);
    const auto kk = static_cast<long>(k);
    return kk < n / 2 ? kk : kk - n;
}

double GridSpec::omega(std::size_t k) const {
    return static_cast<double>(wavenumber(k)) * domega();
}

double GridSpec::max_omega() const { return static_cast<double>(n_ / 2) * domega(); }

namespace {

// (-1)^k for the FFT-order index k; N is even so k and k - N share parity.
double alternating(std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

std::vector<cplx> samples_to_coeffs(const GridSpec& grid, std::span<const cplx> values) {
    const std::size_t n = grid.size();
    std::vector<cplx> out(n);
    fft::forward(values, out);
    const double dx = grid.dx();
    for (std::size_t k = 0; k < n; ++k) out[k] *= dx * alternating(k);
    return out;
}

std::vector<double> coeffs_to_samples(const GridSpec& grid, std::span<const cplx> coeffs) {
    const std::size_t n = grid.size();
    std::vector<cplx> tmp(n);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = coeffs[k] * alternating(k);
    std::vector<cplx> out(n);
    fft::backward(tmp, out);
    const double scale = 1.0 / (static_cast<double>(n) * grid.dx());
    std::vector<double> re(n);
    for (std::size_t j = 0; j < n; ++j) re[j] = out[j].real() * scale;
    return re;
}

void check_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) fail(ErrorKind::invalid_argument, "non-finite sample value");
}

} // namespace

SpectralField::SpectralField(GridSpec grid, std::vector<double> samples, std::vector<cplx> coeffs,
                             double time, Parity parity)
    : grid_(grid), samples_(std::move(samples)), coeffs_(std::move(coeffs)), time_(time),
      parity_(parity) {}

SpectralField SpectralField::from_samples(const GridSpec& grid, std::vector<double> samples,
                                          double time, Parity parity) {
    if (samples.size() != grid.size())
        fail(ErrorKind::invalid_argument, "sample count does not match grid");
    check_finite(samples);
    std::vector<cplx> values(samples.begin(), samples.end());
    auto coeffs = samples_to_coeffs(grid, values);
    return SpectralField(grid, std::move(samples), std::move(coeffs), time, parity);
}

SpectralField SpectralField::from_coeffs(const GridSpec& grid, std::vector<cplx> coeffs,
                                         double time, Parity parity) {
    if (coeffs.size() != grid.size())
        fail(ErrorKind::invalid_argument, "coefficient count does not match grid");
    for (const auto& c : coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            fail(ErrorKind::invalid_argument, "non-finite transform value");
    auto samples = coeffs_to_samples(grid, coeffs);
    return SpectralField(grid, std::move(samples), std::move(coeffs), time, parity);
}

SpectralField SpectralField::zero(const GridSpec& grid, double time) {
    return SpectralField(grid, std::vector<double>(grid.size(), 0.0),
                         std::vector<cplx>(grid.size(), cplx{}), time, Parity::none);
}

SpectralField SpectralField::with_time(double t) const {
    SpectralField f = *this;
    f.time_ = t;
    return f;
}

SpectralField SpectralField::with_parity(Parity p) const {
    SpectralField f = *this;
    f.parity_ = p;
    return f;
}

SpectralField SpectralField::combine(double a, const SpectralField& other, double b) const {
    if (!(grid_ == other.grid_)) fail(ErrorKind::invalid_argument, "combine: grid mismatch");
    SpectralField f = *this;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        f.samples_[i] = a * samples_[i] + b * other.samples_[i];
        f.coeffs_[i] = a * coeffs_[i] + b * other.coeffs_[i];
    }
    f.parity_ = (parity_ == other.parity_) ? parity_ : Parity::none;
    return f;
}

SpectralField SpectralField::scaled(double a) const { return combine(a, *this, 0.0); }

double SpectralField::max_abs() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    return a.combine(1.0, b, 1.0);
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    return a.combine(1.0, b, -1.0);
}

SpectralField operator*(double s, const SpectralField& f) { return f.scaled(s); }

SpectralField forward_transform(std::span<const double> samples, const GridSpec& grid,
                                double time) {
    return SpectralField::from_samples(grid, std::vector<double>(samples.begin(), samples.end()),
                                       time);
}

std::vector<double> inverse_transform(const SpectralField& f) {
    return coeffs_to_samples(f.grid(), f.coeffs());
}

std::vector<cplx> transform_derivative(const SpectralField& f, int order) {
    if (order == 0) return {f.coeffs().begin(), f.coeffs().end()};
    const auto& g = f.grid();
    const auto s = f.samples();
    std::vector<cplx> weighted(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        switch (order) {
        case 1: weighted[j] = cplx(0.0, -x * s[j]); break;
        case 2: weighted[j] = cplx(-x * x * s[j], 0.0); break;
        default: fail(ErrorKind::invalid_argument, "transform_derivative: order must be 0, 1 or 2");
        }
    }
    return samples_to_coeffs(g, weighted);
}

std::vector<double> spatial_derivative(const SpectralField& f) {
    const auto& g = f.grid();
    std::vector<cplx> d(g.size());
    const auto c = f.coeffs();
    for (std::size_t k = 0; k < g.size(); ++k)
        d[k] = (k == g.size() / 2) ? cplx{} : cplx(0.0, g.omega(k)) * c[k];
    return coeffs_to_samples(g, d);
}

std::vector<double> bq_summands(const SpectralField& f, double q) {
    if (!(q > 1.0)) fail(ErrorKind::invalid_argument, "B_q norm requires q > 1");
    const auto& g = f.grid();
    const auto d0 = f.coeffs();
    const auto d1 = transform_derivative(f, 1);
    const auto d2 = transform_derivative(f, 2);
    std::vector<double> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double w = std::abs(g.omega(k));
        out[k] = (1.0 + std::pow(w, q)) * (std::abs(d0[k]) + std::abs(d1[k]) + std::abs(d2[k]));
    }
    return out;
}

double bq_norm_unchecked(const SpectralField& f, double q) {
    const auto s = bq_summands(f, q);
    return *std::max_element(s.begin(), s.end());
}

double bq_norm(const SpectralField& f, const BqParams& params) {
    const auto s = bq_summands(f, params.q);
    const std::size_t nyquist = f.grid().size() / 2;
    double interior = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        if (k != nyquist) interior = std::max(interior, s[k]);
    const double tail = s[nyquist];
    if (tail > params.tail_tolerance * interior && tail > params.abs_floor) {
        std::ostringstream msg;
        msg << "B_q norm: summand at |w| = " << f.grid().max_omega() << " is " << tail
            << " against interior maximum " << interior
            << "; the frequency window does not resolve this field";
        fail(ErrorKind::truncation, msg.str());
    }
    return std::max(interior, tail);
}

Moments moments(const SpectralField& f) {
    const auto& g = f.grid();
    const auto s = f.samples();
    double m1 = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) m1 += g.x(j) * s[j];
    return {f.coeffs()[0].real(), m1 * g.dx()};
}

namespace {

// Evaluates the trigonometric interpolant (and optionally its derivative) at y.
// The Nyquist mode is split symmetrically, i.e. treated as a cosine.
double eval_series(const SpectralField& f, double y, bool derivative) {
    const auto& g = f.grid();
    const auto c = f.coeffs();
    const std::size_t n = g.size();
    const long half = static_cast<long>(n / 2);
    const double dw = g.domega();
    const double norm = 1.0 / (static_cast<double>(n) * g.dx());

    const cplx step = std::polar(1.0, dw * y);
    cplx acc{};
    cplx phase{};
    constexpr long refresh = 32;
    for (long m = -half + 1; m < half; ++m) {
        if ((m + half - 1) % refresh == 0)
            phase = std::polar(1.0, static_cast<double>(m) * dw * y);
        const std::size_t k = static_cast<std::size_t>(m < 0 ? m + static_cast<long>(n) : m);
        cplx term = c[k] * phase;
        if (derivative) term *= cplx(0.0, static_cast<double>(m) * dw);
        acc += term;
        phase *= step;
    }
    const double wn = static_cast<double>(half) * dw;
    const cplx cn = c[n / 2];
    const double nyq = derivative ? -(cn.real() * wn * std::sin(wn * y))
                                  : cn.real() * std::cos(wn * y);
    return (acc.real() + nyq) * norm;
}

void check_edge_decay(const SpectralField& f, double tail_tolerance, const char* what) {
    const auto& g = f.grid();
    const auto s = f.samples();
    const double peak = f.max_abs();
    if (peak == 0.0) return;
    double edge = 0.0;
    const double band = 0.95 * g.half_width();
    for (std::size_t j = 0; j < g.size(); ++j)
        if (std::abs(g.x(j)) >= band) edge = std::max(edge, std::abs(s[j]));
    if (edge > tail_tolerance * peak) {
        std::ostringstream msg;
        msg << what << ": field has not decayed at the domain edge (|f| = " << edge
            << " against peak " << peak << ")";
        fail(ErrorKind::truncation, msg.str());
    }
}

} // namespace

double interpolate(const SpectralField& f, double x) { return eval_series(f, x, false); }

double interpolate_derivative(const SpectralField& f, double x) {
    return eval_series(f, x, true);
}

SpectralField resample_rescale(const SpectralField& f, double scale, double tail_tolerance) {
    if (!(scale >= 1.0) || !std::isfinite(scale))
        fail(ErrorKind::invalid_argument, "rescale factor must be at least 1");
    check_edge_decay(f, tail_tolerance, "resample_rescale");
    const auto& g = f.grid();
    const double X = g.half_width();
    std::vector<double> out(g.size(), 0.0);
    const double amp = scale * scale;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double y = scale * g.x(j);
        if (y < -X || y >= X) continue;
        out[j] = amp * eval_series(f, y, false);
    }
    return SpectralField::from_samples(g, std::move(out), f.time(), f.parity_hint());
}

double parity_defect(const SpectralField& f) {
    const auto& g = f.grid();
    const auto s = f.samples();
    const double peak = f.max_abs();
    if (peak == 0.0) return 0.0;
    double d = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) d = std::max(d, std::abs(s[j] + s[g.mirror(j)]));
    return d / peak;
}

void write_field_csv(const SpectralField& f, const std::filesystem::path& samples_path,
                     const std::filesystem::path& spectrum_path) {
    const auto& g = f.grid();
    {
        CsvWriter w(samples_path, {"x", "f"});
        for (std::size_t j = 0; j < g.size(); ++j) w.row({g.x(j), f.samples()[j]});
    }
    CsvWriter w(spectrum_path, {"omega", "re_fhat", "im_fhat"});
    // Ascending frequency order for downstream plotting.
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = (i + n / 2) % n;
        w.row({g.omega(k), f.coeffs()[k].real(), f.coeffs()[k].imag()});
    }
}

} // namespace burgers_rg
