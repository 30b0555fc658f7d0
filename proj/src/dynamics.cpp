#include "burgers_rg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "burgers_rg/constants.hpp"
#include "burgers_rg/errors.hpp"
#include "burgers_rg/fft.hpp"

namespace burgers_rg {

NonlinearitySpec NonlinearitySpec::burgers(double lambda) {
    NonlinearitySpec s;
    s.lambda = lambda;
    return s;
}

NonlinearitySpec NonlinearitySpec::h2_odd(std::vector<Term> terms, int a, int b, double lambda,
                                          double r_u, double r_v) {
    NonlinearitySpec s;
    s.form = NonlinearForm::h2_odd;
    s.terms = std::move(terms);
    s.a = a;
    s.b = b;
    s.lambda = lambda;
    s.r_u = r_u;
    s.r_v = r_v;
    return s;
}

void NonlinearitySpec::validate() const {
    auto bad = [](const std::string& m) { fail(ErrorKind::invalid_argument, "nonlinearity: " + m); };
    if (!std::isfinite(lambda) || std::abs(lambda) > 1.0) bad("|lambda| must be <= 1");
    if (!(r_u > 0.0) || !(r_v > 0.0)) bad("convergence radii must be positive");
    for (const auto& t : terms)
        if (!std::isfinite(t.c)) bad("non-finite coefficient");
    switch (form) {
    case NonlinearForm::burgers:
        if (terms.size() != 1 || !(terms[0] == Term{0, 1, 1.0}))
            bad("burgers form is exactly the single term u u_x");
        break;
    case NonlinearForm::h1_derivative:
        for (const auto& t : terms)
            if (t.n != 1 || t.m < 2) bad("h1_derivative terms are c u^m u_x with m >= 2");
        break;
    case NonlinearForm::h2_odd:
        if (a < 0 || b < 0 || 4 * a + 3 * b - 2 <= 0) bad("h2_odd requires a, b >= 0 and 4a + 3b - 2 > 0");
        for (const auto& t : terms)
            if (t.m < a || t.n < b) bad("h2_odd term below the exponent floor (a, b)");
        break;
    }
}

bool NonlinearitySpec::is_linear() const {
    if (lambda == 0.0) return true;
    return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.c == 0.0; });
}

int term_decay_exponent(NonlinearForm form, const Term& t) {
    if (form == NonlinearForm::h1_derivative) return 2 * t.m - 1;
    return 4 * t.m + 3 * t.n - 2;
}

int NonlinearitySpec::irrelevance_exponent() const {
    if (form == NonlinearForm::h1_derivative) {
        int e = std::numeric_limits<int>::max();
        for (const auto& t : terms) e = std::min(e, term_decay_exponent(form, t));
        return e;
    }
    return 4 * a + 3 * b - 2;
}

int SolveConfig::resolved_steps() const {
    if (num_steps > 0) return num_steps;
    return 64 * static_cast<int>(std::ceil(L * L - 1.0 - 1e-12));
}

namespace {

// Pseudo-spectral evaluation of F on coefficient vectors. Coefficients follow
// the SpectralField convention; `amp` below converts them to plain Fourier
// series amplitudes u(x) = sum_k amp_k exp(i w_k (x + X)).
class Evaluator {
public:
    Evaluator(const GridSpec& grid, const NonlinearitySpec& spec, Dealias dealias)
        : grid_(grid), spec_(spec), n_(grid.size()),
          m_(dealias == Dealias::zero_pad_2x ? 2 * grid.size() : grid.size()) {
        kmax_ = dealias == Dealias::two_thirds ? static_cast<long>(n_ / 3) : static_cast<long>(n_ / 2) - 1;
        linear_ = spec.is_linear();
    }

    struct Probe {
        double max_u = 0.0;
        double max_ux = 0.0;
        double moment_rate = 0.0;
    };

    // out = F-hat(u-hat); probe receives sup norms of the input and \int x F dx.
    void operator()(std::span<const cplx> uhat, std::span<cplx> out, Probe* probe) {
        std::fill(out.begin(), out.end(), cplx{});
        if (linear_ && !probe) return;

        const double to_amp = 1.0 / (static_cast<double>(n_) * grid_.dx());
        std::vector<cplx> a(m_, cplx{}), ax(m_, cplx{});
        for (std::size_t k = 0; k < n_; ++k) {
            const long w = grid_.wavenumber(k);
            if (std::abs(w) > kmax_) continue;
            const std::size_t dst = w >= 0 ? static_cast<std::size_t>(w)
                                           : static_cast<std::size_t>(static_cast<long>(m_) + w);
            const cplx amp = uhat[k] * ((k % 2 == 0) ? to_amp : -to_amp);
            a[dst] = amp;
            ax[dst] = cplx(0.0, grid_.omega(k)) * amp;
        }
        std::vector<cplx> u(m_), ux(m_);
        fft::backward(a, u);
        fft::backward(ax, ux);

        double mu = 0.0, mux = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            mu = std::max(mu, std::abs(u[i].real()));
            mux = std::max(mux, std::abs(ux[i].real()));
        }
        check_guard(mu, mux);
        if (probe) {
            probe->max_u = mu;
            probe->max_ux = mux;
        }
        if (linear_) return;

        const bool conservative = spec_.form != NonlinearForm::h2_odd;
        std::vector<cplx> prod(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const double uu = u[i].real();
            const double vv = ux[i].real();
            double acc = 0.0;
            for (const auto& t : spec_.terms) {
                switch (spec_.form) {
                case NonlinearForm::burgers: acc += t.c * 0.5 * uu * uu; break;
                case NonlinearForm::h1_derivative:
                    acc += t.c * std::pow(uu, t.m + 1) / (t.m + 1);
                    break;
                case NonlinearForm::h2_odd:
                    acc += t.c * std::pow(uu, 2 * t.m + 1) * std::pow(vv, t.n);
                    break;
                }
            }
            prod[i] = spec_.lambda * acc;
        }
        std::vector<cplx> p(m_);
        fft::forward(prod, p);

        const double from_amp = static_cast<double>(n_) * grid_.dx() / static_cast<double>(m_);
        for (std::size_t k = 0; k < n_; ++k) {
            const long w = grid_.wavenumber(k);
            if (std::abs(w) > kmax_) continue;
            const std::size_t src = w >= 0 ? static_cast<std::size_t>(w)
                                           : static_cast<std::size_t>(static_cast<long>(m_) + w);
            cplx c = p[src] * ((k % 2 == 0) ? from_amp : -from_amp);
            if (conservative) c *= cplx(0.0, grid_.omega(k));
            out[k] = c;
        }
        if (conservative) out[0] = cplx{};

        if (probe) probe->moment_rate = first_moment_of(out);
    }

private:
    void check_guard(double mu, double mux) const {
        if (mu >= 0.9 * spec_.r_u || mux >= 0.9 * spec_.r_v) {
            std::ostringstream msg;
            msg << "analyticity guard: max|u| = " << mu << ", max|u_x| = " << mux
                << " against 0.9 * (r_u, r_v) = (" << 0.9 * spec_.r_u << ", " << 0.9 * spec_.r_v
                << "); data too large for convergence radius r = " << spec_.radius();
            fail(ErrorKind::solver, msg.str());
        }
    }

    double first_moment_of(std::span<const cplx> coeffs) const {
        std::vector<cplx> tmp(coeffs.begin(), coeffs.end());
        const auto field = SpectralField::from_coeffs(grid_, std::move(tmp));
        const auto samples = field.samples();
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += grid_.x(j) * samples[j];
        return s * grid_.dx();
    }

    GridSpec grid_;
    const NonlinearitySpec& spec_;
    std::size_t n_;
    std::size_t m_;
    long kmax_ = 0;
    bool linear_ = false;
};

struct EtdCoefficients {
    std::vector<double> E, E2, Q, f1, f2, f3;
};

// Cox-Matthews ETDRK4 weights for the diagonal operator -w^2, with the phi
// functions evaluated by contour averaging (Kassam-Trefethen).
EtdCoefficients etd_coefficients(const GridSpec& grid, double h) {
    constexpr int contour = 32;
    const std::size_t n = grid.size();
    EtdCoefficients c;
    c.E.resize(n); c.E2.resize(n); c.Q.resize(n);
    c.f1.resize(n); c.f2.resize(n); c.f3.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = grid.omega(k);
        const double hl = -h * w * w;
        c.E[k] = std::exp(hl);
        c.E2[k] = std::exp(0.5 * hl);
        cplx q{}, a{}, b{}, d{};
        for (int j = 1; j <= contour; ++j) {
            const cplx r = hl + std::polar(1.0, std::numbers::pi * (j - 0.5) / contour);
            const cplx er = std::exp(r);
            const cplx r3 = r * r * r;
            q += (std::exp(0.5 * r) - 1.0) / r;
            a += (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3;
            b += (2.0 + r + er * (r - 2.0)) / r3;
            d += (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3;
        }
        c.Q[k] = h * q.real() / contour;
        c.f1[k] = h * a.real() / contour;
        c.f2[k] = h * b.real() / contour;
        c.f3[k] = h * d.real() / contour;
    }
    return c;
}

double abs_integral(const SpectralField& f) {
    double s = 0.0;
    for (double v : f.samples()) s += std::abs(v);
    return s * f.grid().dx();
}

// Composite Simpson on uniform nodes; falls back to the trapezoid rule for an
// odd number of intervals.
double integrate_uniform(const std::vector<double>& y, double h) {
    const std::size_t intervals = y.size() - 1;
    if (intervals == 0) return 0.0;
    if (intervals % 2 == 0) {
        double s = y.front() + y.back();
        for (std::size_t i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
        return s * h / 3.0;
    }
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i < intervals; ++i) s += y[i];
    return s * h;
}

void finish_diagnostics(BlockSolution& sol, const SpectralField& f, double q) {
    auto& d = sol.diagnostics;
    const double mass0 = moments(f).mass;
    const double scale = abs_integral(f);
    d.mass_drift = 0.0;
    d.parity_drift = 0.0;
    d.block_norm = 0.0;
    for (const auto& s : sol.snapshots) {
        if (scale > 0.0) d.mass_drift = std::max(d.mass_drift, std::abs(moments(s).mass - mass0) / scale);
        d.parity_drift = std::max(d.parity_drift, parity_defect(s));
        d.block_norm = std::max(d.block_norm, bq_norm_unchecked(s, q));
    }
}

std::vector<double> heat_factors(const GridSpec& grid, double dt) {
    std::vector<double> e(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = grid.omega(k);
        e[k] = std::exp(-w * w * dt);
    }
    return e;
}

BlockSolution solve_linear(const SpectralField& f, const SolveConfig& cfg, int steps,
                           int stride) {
    BlockSolution sol;
    const double T = cfg.L * cfg.L;
    const double h = (T - 1.0) / steps;
    for (int i = 0; i <= steps; ++i) {
        const double t = (i == steps) ? T : 1.0 + i * h;
        const auto u = linear_propagate(f, 1.0, t);
        sol.diagnostics.max_u = std::max(sol.diagnostics.max_u, u.max_abs());
        const auto ux = spatial_derivative(u);
        for (double v : ux) sol.diagnostics.max_ux = std::max(sol.diagnostics.max_ux, std::abs(v));
        if (i % stride == 0 || i == steps) sol.snapshots.push_back(u.with_parity(f.parity_hint()));
    }
    return sol;
}

BlockSolution solve_etd(const SpectralField& f, const NonlinearitySpec& spec,
                        const SolveConfig& cfg, int steps, int stride) {
    const auto& grid = f.grid();
    const std::size_t n = grid.size();
    const double T = cfg.L * cfg.L;
    const double h = (T - 1.0) / steps;
    const auto co = etd_coefficients(grid, h);
    Evaluator F(grid, spec, cfg.dealias);

    BlockSolution sol;
    sol.snapshots.push_back(f.with_time(1.0));
    std::vector<cplx> v(f.coeffs().begin(), f.coeffs().end());
    std::vector<cplx> Nv(n), Na(n), Nb(n), Nc(n), a(n), b(n), c(n);
    std::vector<double> rate;
    rate.reserve(steps + 1);
    auto& d = sol.diagnostics;

    for (int step = 0; step < steps; ++step) {
        Evaluator::Probe probe;
        F(v, Nv, &probe);
        d.max_u = std::max(d.max_u, probe.max_u);
        d.max_ux = std::max(d.max_ux, probe.max_ux);
        rate.push_back(probe.moment_rate);

        for (std::size_t k = 0; k < n; ++k) a[k] = co.E2[k] * v[k] + co.Q[k] * Nv[k];
        F(a, Na, nullptr);
        for (std::size_t k = 0; k < n; ++k) b[k] = co.E2[k] * v[k] + co.Q[k] * Na[k];
        F(b, Nb, nullptr);
        for (std::size_t k = 0; k < n; ++k) c[k] = co.E2[k] * a[k] + co.Q[k] * (2.0 * Nb[k] - Nv[k]);
        F(c, Nc, nullptr);
        for (std::size_t k = 0; k < n; ++k)
            v[k] = co.E[k] * v[k] + Nv[k] * co.f1[k] + 2.0 * (Na[k] + Nb[k]) * co.f2[k] + Nc[k] * co.f3[k];

        const int i = step + 1;
        if (i % stride == 0 || i == steps) {
            const double t = (i == steps) ? T : 1.0 + i * h;
            sol.snapshots.push_back(SpectralField::from_coeffs(grid, v, t, f.parity_hint()));
        }
    }
    Evaluator::Probe probe;
    F(v, Nv, &probe);
    d.max_u = std::max(d.max_u, probe.max_u);
    d.max_ux = std::max(d.max_ux, probe.max_ux);
    rate.push_back(probe.moment_rate);
    d.moment_change = integrate_uniform(rate, h);
    return sol;
}

BlockSolution solve_picard(const SpectralField& f, const NonlinearitySpec& spec,
                           const SolveConfig& cfg, int steps, int stride) {
    const auto& grid = f.grid();
    const std::size_t n = grid.size();
    const double T = cfg.L * cfg.L;
    const double h = (T - 1.0) / steps;
    const auto E = heat_factors(grid, h);
    Evaluator F(grid, spec, cfg.dealias);

    // u_f at every node.
    std::vector<std::vector<cplx>> uf(steps + 1, std::vector<cplx>(n));
    uf[0].assign(f.coeffs().begin(), f.coeffs().end());
    for (int i = 1; i <= steps; ++i)
        for (std::size_t k = 0; k < n; ++k) uf[i][k] = E[k] * uf[i - 1][k];

    auto u = uf;
    std::vector<std::vector<cplx>> Fu(steps + 1, std::vector<cplx>(n));
    std::vector<double> rate(steps + 1);
    BlockSolution sol;
    auto& d = sol.diagnostics;
    const double fnorm = bq_norm_unchecked(f, cfg.q);

    bool converged = false;
    for (int iter = 1; iter <= cfg.picard_max_iters; ++iter) {
        d.max_u = d.max_ux = 0.0;
        for (int i = 0; i <= steps; ++i) {
            Evaluator::Probe probe;
            F(u[i], Fu[i], &probe);
            d.max_u = std::max(d.max_u, probe.max_u);
            d.max_ux = std::max(d.max_ux, probe.max_ux);
            rate[i] = probe.moment_rate;
        }
        // Composite trapezoid for \int_0^{t-1} e^{-w^2 s} F(t - s) ds, advanced
        // node by node; the kernel at s = 0 is 1 on the Fourier side.
        std::vector<cplx> duhamel(n, cplx{});
        double diff = 0.0;
        double ball = 0.0;
        for (int i = 0; i <= steps; ++i) {
            if (i > 0)
                for (std::size_t k = 0; k < n; ++k)
                    duhamel[k] = E[k] * duhamel[k] + 0.5 * h * (E[k] * Fu[i - 1][k] + Fu[i][k]);
            std::vector<cplx> next(n), delta(n);
            for (std::size_t k = 0; k < n; ++k) {
                next[k] = uf[i][k] + duhamel[k];
                delta[k] = next[k] - u[i][k];
            }
            diff = std::max(diff, bq_norm_unchecked(SpectralField::from_coeffs(grid, delta), cfg.q));
            ball = std::max(ball, bq_norm_unchecked(SpectralField::from_coeffs(grid, duhamel), cfg.q));
            u[i] = std::move(next);
        }
        d.picard_iterations = iter;
        d.picard_ball_ratio = fnorm > 0.0 ? ball / fnorm : 0.0;
        if (diff < cfg.picard_tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "Picard iteration did not contract within " << cfg.picard_max_iters
            << " iterations; initial data too large for the local existence ball";
        fail(ErrorKind::solver, msg.str());
    }
    for (int i = 0; i <= steps; ++i) {
        Evaluator::Probe probe;
        F(u[i], Fu[i], &probe);
        rate[i] = probe.moment_rate;
    }
    d.moment_change = integrate_uniform(rate, h);
    for (int i = 0; i <= steps; ++i) {
        if (i % stride == 0 || i == steps) {
            const double t = (i == steps) ? T : 1.0 + i * h;
            sol.snapshots.push_back(SpectralField::from_coeffs(grid, u[i], t, f.parity_hint()));
        }
    }
    return sol;
}

} // namespace

SpectralField eval_nonlinearity(const SpectralField& u, const NonlinearitySpec& spec,
                                Dealias dealias) {
    spec.validate();
    Evaluator F(u.grid(), spec, dealias);
    std::vector<cplx> out(u.grid().size());
    Evaluator::Probe probe;
    F(u.coeffs(), out, &probe);
    // Odd u: u^{2m+1} u_x^n and u u_x are odd, u^m u_x has the parity of u^m.
    Parity p = Parity::none;
    if (u.parity_hint() == Parity::odd) {
        p = Parity::odd;
        if (spec.form == NonlinearForm::h1_derivative)
            for (const auto& t : spec.terms)
                if (t.m % 2 == 0) p = Parity::none;
    }
    return SpectralField::from_coeffs(u.grid(), std::move(out), u.time(), p);
}

SpectralField linear_propagate(const SpectralField& f, double t0, double t1) {
    if (!(t1 >= t0)) fail(ErrorKind::invalid_argument, "linear_propagate: t1 < t0");
    const auto& g = f.grid();
    std::vector<cplx> c(f.coeffs().begin(), f.coeffs().end());
    const double dt = t1 - t0;
    if (dt > 0.0)
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double w = g.omega(k);
            c[k] *= std::exp(-w * w * dt);
        }
    return SpectralField::from_coeffs(g, std::move(c), t1, f.parity_hint());
}

BlockSolution solve_block(const SpectralField& f, const NonlinearitySpec& spec,
                          const SolveConfig& cfg) {
    spec.validate();
    if (!(cfg.L > 1.0)) fail(ErrorKind::invalid_argument, "solve_block: L must exceed 1");
    const int steps = cfg.resolved_steps();
    if (steps < 16) fail(ErrorKind::invalid_argument, "solve_block: num_steps must be >= 16");
    const int stride = cfg.snapshot_stride > 0 ? cfg.snapshot_stride : std::max(1, steps / 16);

    BlockSolution sol;
    if (spec.is_linear()) {
        sol = solve_linear(f, cfg, steps, stride);
    } else if (cfg.mode == SolveMode::etd_march) {
        sol = solve_etd(f, spec, cfg, steps, stride);
    } else {
        sol = solve_picard(f, spec, cfg, steps, stride);
    }
    finish_diagnostics(sol, f, cfg.q);
    return sol;
}

SupBounds sup_bounds(const BlockSolution& u, double q) {
    SupBounds b;
    b.max_u = u.diagnostics.max_u;
    b.max_ux = u.diagnostics.max_ux;
    if (u.diagnostics.block_norm == 0.0) return b;
    const double K = sup_constant_K(q);
    b.K_bound = K * u.diagnostics.block_norm;
    b.holds = b.max_u <= b.K_bound && b.max_ux <= b.K_bound;
    return b;
}

} // namespace burgers_rg
