// Desk-scale acceptance run. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "burgers_rg/constants.hpp"
#include "burgers_rg/errors.hpp"
#include "burgers_rg/oracles.hpp"
#include "burgers_rg/profiles.hpp"
#include "burgers_rg/rg.hpp"

using namespace burgers_rg;

namespace {

const GridSpec run_grid(40.0, 2048);
const GridSpec probe_grid(128.0, 4096);
const GridSpec oracle_grid(30.0, 1024);
const std::vector<double> L_values{2.0, 4.0, 8.0};
constexpr double inf = std::numeric_limits<double>::infinity();

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    /// Records a named check; failed checks are listed first in the detail.
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double secs) {
    std::printf("%s %d %s: %s(%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

/// Runs one criterion, turning an escaped exception into a failure.
void criterion(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    report(id, name, o, seconds_since(start));
}

double sup_diff_of(const SpectralField& a, const SpectralField& b) {
    return (a - b).max_abs();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

SpectralField make(ProfileTag tag, const GridSpec& grid, double width = 1.0, int order = 1) {
    ProfileId id;
    id.tag = tag;
    id.width = width;
    id.order = order;
    return make_profile(id, grid);
}

RGConfig burgers_config(double lambda) {
    RGConfig cfg;
    cfg.L = 2.0;
    cfg.delta = 0.5;
    cfg.max_iters = 12;
    cfg.nonlinearity = NonlinearitySpec::burgers(lambda);
    return cfg;
}

RGConfig h2_config(double lambda) {
    RGConfig cfg = burgers_config(0.0);
    cfg.bq.q = 2.5;
    cfg.solver.q = 2.5;
    cfg.nonlinearity = NonlinearitySpec::h2_odd({Term{1, 1, 1.0}}, 1, 1, lambda);
    return cfg;
}

struct DeskRun {
    std::string label;
    RGConfig cfg;
    SpectralField f0;
    RunResult result;
};

DeskRun desk_run(const std::string& label, const RGConfig& cfg) {
    DeskRun r{label, cfg, normalize_to_norm(make(ProfileTag::hermite_odd, run_grid), 0.02, cfg.bq), {}};
    r.result = run_rg(r.f0, cfg);
    return r;
}

/// Shared checks (a)-(c) on the residual decay, the prefactor increments and the final distance.
void check_rates(Outcome& o, const DeskRun& run) {
    const auto& res = run.result;
    const double L = run.cfg.L;
    const double f0_norm = res.history.front().f_norm;
    const int steps = res.history.back().n;
    o.require(steps >= 8, run.label + " reaches 8 iterations");

    double worst_g = 0.0;
    for (double r : res.g_ratios) worst_g = std::max(worst_g, r);
    o.require(!res.g_ratios.empty() && worst_g <= std::pow(L, -0.5), run.label + " residual ratio");

    // dA_ratios[i] compares the increment into f_{i+2} with the one into f_{i+1}.
    double worst_dA = 0.0;
    for (std::size_t i = 1; i < res.dA_ratios.size(); ++i) worst_dA = std::max(worst_dA, res.dA_ratios[i]);
    o.require(res.dA_ratios.size() >= 2 && worst_dA <= 1.0 / L, run.label + " prefactor increment ratio");

    o.require(res.final_residual <= 1e-4 * f0_norm, run.label + " final distance");
    o.detail << run.label << ": n=" << steps << " max g ratio " << fmt(worst_g) << ", max dA ratio "
             << fmt(worst_dA) << ", e_final/|f0| " << fmt(res.final_residual / f0_norm) << "; ";
}

ContractionEstimate contraction_at(double q) {
    return estimate_contraction_constant(L_values, q, default_probe_family(probe_grid, q));
}

} // namespace

int main() {
    std::vector<DeskRun> burgers_runs, h2_runs;
    std::optional<ContractionEstimate> contraction_q2;

    criterion(1, "fixed point of the linear step", [&](Outcome& o) {
        const auto start = Clock::now();
        RGConfig cfg = burgers_config(0.0);
        cfg.max_iters = 1;
        const auto star = fixed_point(run_grid);
        const auto next = rg_step(initial_state(star, cfg), cfg);
        const double diff = bq_norm_unchecked(next.f - star, 2.0);
        const double secs = seconds_since(start);
        o.require(diff <= 1e-6, "distance");
        o.require(secs < 5.0, "runtime");
        o.detail << "||R f - f||_q " << fmt(diff) << " ";
    });

    criterion(2, "linear contraction of zero-moment data", [&](Outcome& o) {
        const auto start = Clock::now();
        const auto est = contraction_at(2.0);
        contraction_q2 = est;
        const std::size_t probes = est.ratios.size();
        o.require(probes >= 3, "at least three probes");

        std::size_t above_bound = 0, increasing = 0;
        for (const auto& row : est.ratios)
            for (std::size_t i = 0; i < row.size(); ++i) {
                // row[i] is L times the measured ratio
                if (row[i] / L_values[i] > est.C_emp / L_values[i] * (1.0 + 1e-12)) ++above_bound;
                if (i + 1 < row.size() && row[i + 1] > row[i] * (1.0 + 1e-12)) ++increasing;
            }
        o.require(above_bound == 0, "ratio within C_emp/L");
        o.require(increasing == 0, "L-scaled ratio nonincreasing in L");

        const auto held = estimate_contraction_constant(L_values, 2.0, random_probe_family(probe_grid, 2.0, 8, 1));
        double held_worst = 0.0;
        for (const auto& row : held.ratios)
            for (double r : row) held_worst = std::max(held_worst, r);
        o.require(held_worst <= 1.1 * est.C_emp, "held-out probes within 10%");
        const double secs = seconds_since(start);
        o.require(secs < 30.0, "runtime");

        o.detail << probes << " probes, C_emp " << fmt(est.C_emp) << ", L*ratio rows:";
        for (const auto& row : est.ratios) {
            o.detail << " (";
            for (std::size_t i = 0; i < row.size(); ++i) o.detail << (i ? " " : "") << fmt(row[i]);
            o.detail << ")";
        }
        o.detail << ", " << increasing << " increasing steps, held-out max " << fmt(held_worst) << " ";
    });

    criterion(3, "Burgers residual, prefactor and final distance", [&](Outcome& o) {
        const auto start = Clock::now();
        for (double lambda : {0.5, -0.5}) {
            burgers_runs.push_back(desk_run(lambda > 0 ? "lambda=+0.5" : "lambda=-0.5", burgers_config(lambda)));
            check_rates(o, burgers_runs.back());
        }
        o.require(seconds_since(start) < 120.0, "runtime");
    });

    criterion(4, "decay and spreading exponents", [&](Outcome& o) {
        o.require(!burgers_runs.empty(), "runs from criterion 3");
        for (const auto& run : burgers_runs) {
            const auto& p = run.result.profiles;
            o.require(p.size() > 8, run.label + " has 8 iterations");
            if (p.size() <= 8) continue;
            const auto fit = estimate_exponents(p, run.cfg.L, 5, 8);
            o.require(fit.alpha >= 0.95 && fit.alpha <= 1.05, run.label + " alpha");
            o.require(fit.beta >= 0.45 && fit.beta <= 0.55, run.label + " beta");
            o.detail << run.label << ": alpha " << fit.alpha << ", beta " << fit.beta << "; ";
        }
    });

    criterion(5, "odd series nonlinearity u^3 u_x", [&](Outcome& o) {
        for (double lambda : {1.0, -1.0}) {
            h2_runs.push_back(desk_run(lambda > 0 ? "lambda=+1" : "lambda=-1", h2_config(lambda)));
            const auto& run = h2_runs.back();
            check_rates(o, run);
            const int e = run.cfg.nonlinearity.irrelevance_exponent();
            o.require(e == 5, "irrelevance exponent 5");
            double worst = 0.0;
            for (const auto& r : run.result.history) {
                const double expected = lambda * std::pow(run.cfg.L, -e * r.n);
                worst = std::max(worst, std::abs(r.lambda - expected) / std::abs(expected));
            }
            o.require(worst <= 1e-15, run.label + " coupling decay");
            o.detail << run.label << " coupling rel. error " << fmt(worst) << "; ";
        }
    });

    criterion(6, "oracle agreement", [&](Outcome& o) {
        const auto start = Clock::now();
        const auto dipole = normalize_to_norm(make(ProfileTag::bump_dipole, oracle_grid, 1.0, 3), 2.0, {2.0});
        SolveConfig etd;
        double ch_worst = 0.0, pic_worst = 0.0;
        for (double lambda : {0.5, -0.5}) {
            const auto spec = NonlinearitySpec::burgers(lambda);
            const auto sb = solve_block(dipole, spec, etd).final();
            ch_worst = std::max(ch_worst, sup_diff_of(cole_hopf_solve(dipole, lambda, 4.0), sb));
            SolveConfig pic = etd;
            pic.mode = SolveMode::picard_duhamel;
            pic_worst = std::max(pic_worst, sup_diff_of(solve_block(dipole, spec, pic).final(), sb));
        }

        const auto odd = normalize_to_norm(make(ProfileTag::hermite_odd, oracle_grid), 20.0, {2.5});
        const auto h2 = NonlinearitySpec::h2_odd({Term{1, 1, 1.0}}, 1, 1, 1.0, inf, inf);
        SolveConfig c25;
        c25.q = 2.5;
        OracleConfig fd;
        fd.fine_factor = 4;
        const double fd_diff = sup_diff_of(fd_brute_solve(odd, h2, 4.0, fd), solve_block(odd, h2, c25).final());

        const double secs = seconds_since(start);
        o.require(ch_worst <= 1e-5, "Cole-Hopf");
        o.require(fd_diff <= 1e-4, "finite differences");
        o.require(pic_worst <= 1e-8, "Picard against ETD");
        o.require(secs < 60.0, "runtime");
        o.detail << "Cole-Hopf " << fmt(ch_worst) << ", finite differences " << fmt(fd_diff) << ", Picard "
                 << fmt(pic_worst) << " ";
    });

    criterion(7, "inequality suites", [&](Outcome& o) {
        std::vector<double> ts, ws;
        for (int i = 0; i <= 252; ++i) ts.push_back(1.0 + 0.25 * i);
        for (int i = 0; i <= 400; ++i) ws.push_back(-20.0 + 0.1 * i);
        std::size_t checked = 0, violations = 0;
        for (double q : {2.0, 2.5, 3.0})
            for (const auto& r : check_heat_moment_bounds(q, ts, ws)) {
                checked += r.checked;
                violations += r.violations;
            }
        o.require(violations == 0, "heat moment bounds");
        o.detail << "heat moments " << violations << "/" << checked << "; ";

        std::size_t decay_checked = 0, decay_viol = 0, sup_checked = 0, sup_viol = 0;
        std::size_t step_checked = 0, step_viol = 0;
        std::optional<ContractionEstimate> contraction_q25;
        auto check_run = [&](const DeskRun& run) {
            const double q = run.cfg.bq.q;
            auto state = initial_state(run.f0, run.cfg);
            for (std::size_t n = 0; n + 1 < run.result.history.size(); ++n) {
                const auto block = solve_block(state.f, effective_nonlinearity(state, run.cfg), run.cfg.solver);
                const auto d = check_frequency_decay_bound(block, q);
                decay_checked += d.checked;
                decay_viol += d.violations;
                const auto s = sup_bounds(block, 2.5);
                ++sup_checked;
                if (!s.holds) ++sup_viol;
                state = rg_step(state, run.cfg);
            }
            if (q != 2.0 && !contraction_q25) contraction_q25 = contraction_at(q);
            const auto& est = q == 2.0 ? contraction_q2 : contraction_q25;
            if (!est) {
                o.require(false, "contraction estimate at q=" + fmt(q));
                return;
            }
            const auto constants =
                eval_constants(run.cfg.L, q, run.cfg.delta, run.cfg.nonlinearity, run.result.history.front().f_norm, est);
            const auto steps = check_step_bounds(run.result.history, constants);
            step_checked += steps.checked;
            step_viol += steps.prefactor_violations + steps.residual_violations;
        };
        for (const auto& run : burgers_runs) check_run(run);
        for (const auto& run : h2_runs) check_run(run);
        o.require(!burgers_runs.empty() && !h2_runs.empty(), "runs from criteria 3 and 5");
        o.require(decay_viol == 0, "frequency decay bound");
        o.require(sup_viol == 0, "sup bounds");
        o.require(step_checked > 0 && step_viol == 0, "per-step bounds");
        o.detail << "frequency decay " << decay_viol << "/" << decay_checked << ", sup bounds " << sup_viol << "/"
                 << sup_checked << ", step bounds " << step_viol << "/" << step_checked << " violations ";
    });

    criterion(8, "conservation and symmetry", [&](Outcome& o) {
        double mass = 0.0, parity = 0.0;
        for (const auto& run : burgers_runs)
            for (const auto& r : run.result.history) mass = std::max({mass, std::abs(r.mass), r.block_mass_drift});
        for (const auto& run : h2_runs)
            for (const auto& r : run.result.history)
                parity = std::max({parity, r.parity_defect, r.block_parity_drift});
        o.require(!burgers_runs.empty() && !h2_runs.empty(), "runs from criteria 3 and 5");
        o.require(mass <= 1e-10, "mass drift");
        o.require(parity <= 1e-10, "oddness defect");

        double moment = 0.0;
        for (const auto& f : {fixed_point(run_grid), make(ProfileTag::hermite_odd, run_grid, 1.5),
                              make(ProfileTag::bump_dipole, run_grid, 1.0, 3)})
            for (double L : L_values) {
                const double before = moments(f).first_moment;
                const double after = moments(resample_rescale(f, L)).first_moment;
                moment = std::max(moment, std::abs(after - before) / std::abs(before));
            }
        o.require(moment <= 1e-12, "first moment under rescaling");
        o.detail << "mass " << fmt(mass) << ", oddness " << fmt(parity) << ", first moment rel. " << fmt(moment)
                 << " ";
    });

    criterion(9, "nonzero-mass control", [&](Outcome& o) {
        const double L = 2.0;
        auto f = make(ProfileTag::gaussian_phi, run_grid);
        double prev = bq_norm(f, {2.0});
        double worst = inf;
        for (int n = 0; n < 4; ++n) {
            // the linear step before the zero-mass projection: L^2 e^{(L^2-1) d_xx} f (L x)
            f = resample_rescale(linear_propagate(f, 1.0, L * L), L).with_time(1.0);
            const double norm = bq_norm(f, {2.0});
            worst = std::min(worst, norm / prev);
            prev = norm;
        }
        o.require(worst >= L / 2.0, "growth per step");
        bool rejected = false;
        try {
            decompose(make(ProfileTag::gaussian_phi, run_grid), {2.0});
        } catch (const Error& e) {
            rejected = e.kind() == ErrorKind::hypothesis;
        }
        o.require(rejected, "decompose rejects the data");
        o.detail << "smallest growth factor " << fmt(worst) << ", decompose "
                 << (rejected ? "rejects" : "accepts") << " ";
    });

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
