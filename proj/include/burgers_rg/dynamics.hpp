#pragma once

#include <limits>
#include <vector>

#include "burgers_rg/spectral.hpp"

namespace burgers_rg {

enum class NonlinearForm {
    burgers,        // lambda u u_x, evaluated as lambda (u^2/2)_x
    h1_derivative,  // lambda sum c u^m u_x, evaluated as lambda (sum c u^{m+1}/(m+1))_x
    h2_odd,         // lambda sum c u^{2m+1} u_x^n
};

/// One monomial of the nonlinearity. For h2_odd it stands for c u^{2m+1} u_x^n;
/// for h1_derivative for c u^m u_x (n must be 1); burgers is the single term
/// (0, 1, 1), i.e. u u_x.
struct Term {
    int m = 0;
    int n = 1;
    double c = 1.0;

    bool operator==(const Term&) const = default;
};

struct NonlinearitySpec {
    NonlinearForm form = NonlinearForm::burgers;
    std::vector<Term> terms{Term{}};
    /// Exponent floor for h2_odd: every term has m >= a, n >= b, 4a + 3b - 2 > 0.
    int a = 0;
    int b = 1;
    double lambda = 0.0;
    /// Convergence radii of the power series in u and u_x.
    double r_u = std::numeric_limits<double>::infinity();
    double r_v = std::numeric_limits<double>::infinity();

    static NonlinearitySpec burgers(double lambda);
    static NonlinearitySpec h2_odd(std::vector<Term> terms, int a, int b, double lambda,
                                   double r_u = 1.0, double r_v = 1.0);

    /// Throws invalid_argument on a broken spec.
    void validate() const;
    double radius() const { return r_u < r_v ? r_u : r_v; }
    bool is_linear() const;
    /// 4a + 3b - 2 for h2_odd and burgers, the smallest 2m - 1 for h1_derivative.
    int irrelevance_exponent() const;
};

/// Exponent e with c_{m,n} -> c_{m,n} L^{-e} under one step of the L^2 u(L x, L^2 t)
/// rescaling: 4m + 3n - 2 for h2_odd/burgers, 2m - 1 for h1_derivative.
int term_decay_exponent(NonlinearForm form, const Term& term);

enum class Dealias { two_thirds, zero_pad_2x };
enum class SolveMode { etd_march, picard_duhamel };

struct SolveConfig {
    double L = 2.0;
    /// Fixed steps over [1, L^2]; 0 selects 64 * ceil(L^2 - 1).
    int num_steps = 0;
    Dealias dealias = Dealias::two_thirds;
    SolveMode mode = SolveMode::etd_march;
    int picard_max_iters = 100;
    double picard_tol = 1e-13;
    /// q of the block norm used by the Picard stopping rule and diagnostics.
    double q = 2.0;
    /// Store a snapshot every this many steps (0 selects about 16 per block).
    int snapshot_stride = 0;

    int resolved_steps() const;
};

struct BlockDiagnostics {
    double max_u = 0.0;
    double max_ux = 0.0;
    /// max over snapshots of |mass(u) - mass(f)| / \int |f|.
    double mass_drift = 0.0;
    /// max over snapshots of the parity defect (only meaningful for odd data).
    double parity_drift = 0.0;
    /// sup over the block of ||u(., t)||_q.
    double block_norm = 0.0;
    int picard_iterations = 0;
    /// sup_t ||u - u_f||_q / ||f||_q (Picard mode only).
    double picard_ball_ratio = 0.0;
    /// \int_1^{L^2} \int x F(u, u_x) dx dt, the nonlinear change of the first moment.
    double moment_change = 0.0;
};

struct BlockSolution {
    /// Snapshots in increasing time; the first is t = 1, the last t = L^2.
    std::vector<SpectralField> snapshots;
    BlockDiagnostics diagnostics;

    const SpectralField& final() const { return snapshots.back(); }
};

/// F(u, u_x) evaluated pseudo-spectrally. Fails if max|u| >= 0.9 r_u or
/// max|u_x| >= 0.9 r_v.
SpectralField eval_nonlinearity(const SpectralField& u, const NonlinearitySpec& spec,
                                Dealias dealias = Dealias::two_thirds);

/// Solves u_t = u_xx + F(u, u_x) on t in [1, L^2].
BlockSolution solve_block(const SpectralField& f, const NonlinearitySpec& spec,
                          const SolveConfig& cfg);

/// Exact heat flow from t0 to t1: fhat *= exp(-w^2 (t1 - t0)).
SpectralField linear_propagate(const SpectralField& f, double t0, double t1);

struct SupBounds {
    double max_u = 0.0;
    double max_ux = 0.0;
    /// K * ||u|| with K the frequency-integral constant; +inf when q <= 2.
    double K_bound = 0.0;
    bool holds = true;
};

/// Observed sup |u|, sup |u_x| over the block against K ||u||.
SupBounds sup_bounds(const BlockSolution& u, double q);

} // namespace burgers_rg
