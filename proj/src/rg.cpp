#include "burgers_rg/rg.hpp"

#include <algorithm>
#include <cmath>

#include "burgers_rg/csv.hpp"
#include "burgers_rg/errors.hpp"
#include "burgers_rg/profiles.hpp"

namespace burgers_rg {

namespace {

/// Roundoff-level residuals trip the tail check, so g is measured with an
/// absolute floor tied to the size of f.
constexpr double residual_floor = 1e-8;

double residual_norm(const SpectralField& g, double f_norm, const BqParams& bq) {
    BqParams p = bq;
    p.abs_floor = std::max(p.abs_floor, residual_floor * f_norm);
    return bq_norm(g, p);
}

bool is_odd_form(const NonlinearitySpec& spec) { return spec.form == NonlinearForm::h2_odd; }

void check_hypothesis(const SpectralField& f, const NonlinearitySpec& spec) {
    if (!is_odd_form(spec)) return;
    const double defect = parity_defect(f);
    if (defect > 1e-10)
        fail(ErrorKind::hypothesis,
             "oddness hypothesis violated: parity defect " + format_number(defect) + " exceeds 1e-10");
}

RunRecord make_record(const RGState& s, double L) {
    RunRecord r;
    r.n = s.n;
    r.t = std::pow(L, 2.0 * s.n);
    r.A = s.A;
    r.g_norm = s.g_norm;
    r.f_norm = s.f_norm;
    r.lambda = s.lambda;
    r.mass = moments(s.f).mass;
    r.parity_defect = parity_defect(s.f);
    return r;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) fail(ErrorKind::invalid_argument, "slope fit needs two distinct abscissae");
    return (n * sxy - sx * sy) / den;
}

} // namespace

void RGConfig::validate() const {
    if (!(L > 1.0) || !std::isfinite(L)) fail(ErrorKind::invalid_argument, "rg: L must exceed 1");
    if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::invalid_argument, "rg: delta must lie in (0, 1)");
    if (!(bq.q > 1.0)) fail(ErrorKind::invalid_argument, "rg: q must exceed 1");
    if (max_iters < 0) fail(ErrorKind::invalid_argument, "rg: max_iters must be nonnegative");
    if (!(stop_g_tol >= 0.0)) fail(ErrorKind::invalid_argument, "rg: stop_g_tol must be nonnegative");
    if (!(working_threshold > 0.0)) fail(ErrorKind::invalid_argument, "rg: working threshold must be positive");
    if (solver.L != L) fail(ErrorKind::invalid_argument, "rg: solver L must equal the RG scale L");
    nonlinearity.validate();
}

RGState initial_state(const SpectralField& f0, const RGConfig& cfg) {
    cfg.validate();
    check_hypothesis(f0, cfg.nonlinearity);
    RGState s{.f = f0.with_time(1.0), .g = f0};
    if (is_odd_form(cfg.nonlinearity)) s.f = s.f.with_parity(Parity::odd);
    s.lambda = cfg.nonlinearity.lambda;
    s.term_scales.assign(cfg.nonlinearity.terms.size(), 1.0);
    s.f_norm = bq_norm(s.f, cfg.bq);
    auto dec = decompose(s.f, cfg.bq);
    s.A = dec.A;
    s.g = std::move(dec.g);
    s.g_norm = residual_norm(s.g, s.f_norm, cfg.bq);
    s.history.push_back(make_record(s, cfg.L));
    return s;
}

NonlinearitySpec effective_nonlinearity(const RGState& state, const RGConfig& cfg) {
    NonlinearitySpec spec = cfg.nonlinearity;
    spec.lambda = state.lambda;
    if (spec.form != NonlinearForm::burgers)
        for (std::size_t i = 0; i < spec.terms.size(); ++i) spec.terms[i].c *= state.term_scales[i];
    return spec;
}

RGState rg_step(const RGState& state, const RGConfig& cfg) {
    const NonlinearitySpec spec = effective_nonlinearity(state, cfg);
    const bool nonlinear = !spec.is_linear();
    if (nonlinear && state.f_norm > cfg.working_threshold)
        fail(ErrorKind::hypothesis, "rg: ||f_n||_q = " + format_number(state.f_norm) +
                                        " exceeds the working threshold " +
                                        format_number(cfg.working_threshold));
    check_hypothesis(state.f, cfg.nonlinearity);

    SolveConfig scfg = cfg.solver;
    scfg.L = cfg.L;
    scfg.q = cfg.bq.q;
    const BlockSolution block = solve_block(state.f, spec, scfg);

    RGState next{.n = state.n + 1,
                 .f = resample_rescale(block.final(), cfg.L, cfg.bq.tail_tolerance)
                          .with_time(1.0)
                          .with_parity(state.f.parity_hint()),
                 .g = state.g};
    next.f_norm = bq_norm(next.f, cfg.bq);
    if (nonlinear && next.f_norm > cfg.working_threshold)
        fail(ErrorKind::hypothesis, "rg: ||f_{n+1}||_q = " + format_number(next.f_norm) +
                                        " exceeds the working threshold; smallness not met");

    auto dec = decompose(next.f, cfg.bq);
    next.A = dec.A;
    next.g = std::move(dec.g);
    next.g_norm = residual_norm(next.g, next.f_norm, cfg.bq);

    const int e = cfg.nonlinearity.irrelevance_exponent();
    next.lambda = state.lambda * std::pow(cfg.L, -static_cast<double>(e));
    next.term_scales = state.term_scales;
    if (cfg.nonlinearity.form != NonlinearForm::burgers)
        for (std::size_t i = 0; i < next.term_scales.size(); ++i) {
            const int ei = term_decay_exponent(cfg.nonlinearity.form, cfg.nonlinearity.terms[i]);
            next.term_scales[i] *= std::pow(cfg.L, -static_cast<double>(ei - e));
        }

    next.history = state.history;
    RunRecord rec = make_record(next, cfg.L);
    const auto& d = block.diagnostics;
    rec.dA_duhamel = -d.moment_change;
    rec.block_mass_drift = d.mass_drift;
    rec.block_parity_drift = d.parity_drift;
    rec.max_u = d.max_u;
    rec.max_ux = d.max_ux;
    next.history.push_back(rec);
    return next;
}

RunResult run_rg(const SpectralField& f0, const RGConfig& cfg) {
    RGState s = initial_state(f0, cfg);
    const double f0_norm = s.f_norm;
    const double stop = cfg.stop_g_tol > 0.0 ? cfg.stop_g_tol : 1e-10 * f0_norm;

    RunResult out;
    out.profiles.push_back(s.f);
    for (int i = 0; i < cfg.max_iters; ++i) {
        s = rg_step(s, cfg);
        out.profiles.push_back(s.f);
        if (s.g_norm < stop) break;
    }
    out.history = std::move(s.history);
    out.A_limit = s.A;
    out.final_residual = s.g_norm;

    const SpectralField star = fixed_point(s.f.grid());
    for (std::size_t k = 0; k < out.history.size(); ++k) {
        const SpectralField diff = out.profiles[k].combine(1.0, star, -out.A_limit);
        out.history[k].e_n = residual_norm(diff, out.history[k].f_norm, cfg.bq);
    }
    for (std::size_t k = 0; k + 1 < out.history.size(); ++k) {
        // Residuals already below the stopping tolerance are roundoff.
        if (out.history[k].g_norm < stop) break;
        const double r = out.history[k + 1].g_norm / out.history[k].g_norm;
        out.g_ratios.push_back(r);
        if (r >= 1.0) out.contracting = false;
    }
    for (std::size_t k = 1; k + 1 < out.history.size(); ++k) {
        const double a = std::abs(out.history[k].dA_duhamel);
        if (a > 0.0) out.dA_ratios.push_back(std::abs(out.history[k + 1].dA_duhamel) / a);
    }
    return out;
}

ExponentFit fit_exponents(std::span<const double> times, std::span<const double> amplitudes,
                          std::span<const double> peak_positions) {
    if (times.size() < 2 || amplitudes.size() != times.size() || peak_positions.size() != times.size())
        fail(ErrorKind::invalid_argument, "exponent fit needs matching samples at two or more times");
    ExponentFit fit;
    fit.times.assign(times.begin(), times.end());
    fit.amplitudes.assign(amplitudes.begin(), amplitudes.end());
    fit.peak_positions.assign(peak_positions.begin(), peak_positions.end());
    std::vector<double> lt, la, lx;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(amplitudes[i] > 0.0) || !(peak_positions[i] > 0.0) || !(times[i] > 0.0))
            fail(ErrorKind::invalid_argument, "exponent fit: degenerate snapshot");
        lt.push_back(std::log(times[i]));
        la.push_back(std::log(amplitudes[i]));
        lx.push_back(std::log(peak_positions[i]));
    }
    fit.alpha = -least_squares_slope(lt, la);
    fit.beta = least_squares_slope(lt, lx);
    return fit;
}

std::pair<double, double> refined_peak(const SpectralField& f) {
    const auto s = f.samples();
    const GridSpec& grid = f.grid();
    std::size_t j = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (std::abs(s[i]) > std::abs(s[j])) j = i;
    if (s[j] == 0.0) fail(ErrorKind::invalid_argument, "peak of a zero field");

    // Quadratic through the three nearest samples, then Newton on f' = 0.
    double x = grid.x(j);
    if (j > 0 && j + 1 < s.size()) {
        const double a = s[j - 1], b = s[j], c = s[j + 1];
        const double den = a - 2.0 * b + c;
        if (den != 0.0) x += 0.5 * grid.dx() * (a - c) / den;
    }
    const SpectralField df = SpectralField::from_samples(grid, spatial_derivative(f));
    for (int it = 0; it < 20; ++it) {
        const double d1 = interpolate(df, x);
        const double d2 = interpolate_derivative(df, x);
        if (d2 == 0.0) break;
        const double step = d1 / d2;
        x -= step;
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(x))) break;
    }
    return {x, std::abs(interpolate(f, x))};
}

ExponentFit estimate_exponents(std::span<const SpectralField> snapshots) {
    if (snapshots.size() < 4) fail(ErrorKind::invalid_argument, "exponent fit needs four snapshots");
    std::vector<double> t, a, x;
    for (const auto& u : snapshots) {
        const auto [pos, amp] = refined_peak(u);
        t.push_back(u.time());
        a.push_back(amp);
        x.push_back(std::abs(pos));
    }
    return fit_exponents(t, a, x);
}

ExponentFit estimate_exponents(std::span<const SpectralField> profiles, double L, std::size_t first,
                               std::size_t last) {
    if (last >= profiles.size() || first > last || last - first + 1 < 4)
        fail(ErrorKind::invalid_argument, "exponent fit needs four profiles in range");
    std::vector<double> t, a, x;
    for (std::size_t k = first; k <= last; ++k) {
        const auto [pos, amp] = refined_peak(profiles[k]);
        const double scale = std::pow(L, static_cast<double>(k));
        t.push_back(scale * scale);
        a.push_back(amp / (scale * scale));
        x.push_back(std::abs(pos) * scale);
    }
    return fit_exponents(t, a, x);
}

RateReport verify_rate_bound(std::span<const RunRecord> history, const RGConfig& cfg,
                             const ConstantsReport& constants, double noise_floor) {
    if (history.empty()) fail(ErrorKind::invalid_argument, "rate check needs a run history");
    RateReport rep;
    rep.constant = cfg.nonlinearity.form == NonlinearForm::burgers ? constants.C_Lqdelta
                                                                   : constants.Cbar_rate;
    rep.slope_bound = -(1.0 - cfg.delta) * std::log(cfg.L);
    const double f0 = history.front().f_norm;
    std::vector<double> n, le;
    for (const auto& r : history) {
        const double bound = rep.constant * std::pow(cfg.L, -r.n * (1.0 - cfg.delta)) * f0;
        ++rep.checked;
        if (r.e_n > bound) ++rep.violations;
        if (r.e_n > noise_floor * f0) {
            n.push_back(r.n);
            le.push_back(std::log(r.e_n));
        }
    }
    rep.fitted_points = n.size();
    rep.slope = n.size() >= 2 ? least_squares_slope(n, le) : 0.0;
    return rep;
}

StepBoundReport check_step_bounds(std::span<const RunRecord> history, const ConstantsReport& constants) {
    if (!std::isfinite(constants.C_emp))
        fail(ErrorKind::invalid_argument, "step bounds need the empirical contraction constant");
    const double G = constants.prefactor_bound_coefficient();
    const double E = constants.residual_bound_coefficient();
    StepBoundReport rep;
    for (std::size_t k = 0; k + 1 < history.size(); ++k) {
        const RunRecord& cur = history[k];
        const RunRecord& nxt = history[k + 1];
        const double f2 = cur.f_norm * cur.f_norm;
        const double dA = std::max(std::abs(nxt.A - cur.A), std::abs(nxt.dA_duhamel));
        const double a_bound = std::abs(cur.lambda) * G * f2;
        const double g_bound = constants.C_emp / constants.L * cur.g_norm + std::abs(cur.lambda) * E * f2;
        ++rep.checked;
        if (dA > a_bound) ++rep.prefactor_violations;
        if (nxt.g_norm > g_bound) ++rep.residual_violations;
        if (a_bound > 0.0) rep.max_prefactor_ratio = std::max(rep.max_prefactor_ratio, dA / a_bound);
        if (g_bound > 0.0) rep.max_residual_ratio = std::max(rep.max_residual_ratio, nxt.g_norm / g_bound);
    }
    return rep;
}

void write_run_records(std::span<const RunRecord> history, const std::filesystem::path& path) {
    CsvWriter csv(path, {"n", "t", "A_n", "g_norm", "f_norm", "lambda_n", "mass", "parity_defect", "e_n",
                         "dA_duhamel", "block_mass_drift", "block_parity_drift", "max_u", "max_ux"});
    for (const auto& r : history)
        csv.row({static_cast<double>(r.n), r.t, r.A, r.g_norm, r.f_norm, r.lambda, r.mass,
                 r.parity_defect, r.e_n, r.dA_duhamel, r.block_mass_drift, r.block_parity_drift,
                 r.max_u, r.max_ux});
}

void write_profile_final(const SpectralField& f, double A_limit, const std::filesystem::path& path) {
    const SpectralField star = fixed_point(f.grid());
    const auto s = f.samples();
    const auto p = star.samples();
    CsvWriter csv(path, {"x", "scaled_u", "A_limit_times_f1star", "residual"});
    for (std::size_t j = 0; j < s.size(); ++j)
        csv.row({f.grid().x(j), s[j], A_limit * p[j], s[j] - A_limit * p[j]});
}

} // namespace burgers_rg
