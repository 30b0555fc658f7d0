#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "burgers_rg/constants.hpp"
#include "burgers_rg/dynamics.hpp"
#include "burgers_rg/spectral.hpp"

namespace burgers_rg {

struct RGConfig {
    double L = 2.0;
    BqParams bq{};
    /// Slack in the reported rate L^{-n(1 - delta)}.
    double delta = 0.5;
    int max_iters = 12;
    NonlinearitySpec nonlinearity{};
    SolveConfig solver{};
    /// Stop once ||g_n||_q falls below this; 0 selects 1e-10 ||f_0||_q.
    double stop_g_tol = 0.0;
    /// Largest ||f_n||_q accepted by a nonlinear step.
    double working_threshold = 0.05;

    void validate() const;
};

/// One row of the iteration history; row n describes f_n and, for n >= 1, the
/// block that produced it from f_{n-1}.
struct RunRecord {
    int n = 0;
    double t = 1.0;           // L^{2n}
    double A = 0.0;
    double g_norm = 0.0;
    double f_norm = 0.0;
    double lambda = 0.0;      // coupling of the block started from f_n
    double mass = 0.0;
    double parity_defect = 0.0;
    double e_n = 0.0;         // ||f_n - A_limit f1*||_q, filled by run_rg
    double dA_duhamel = 0.0;  // -\int\int x F over the block that produced f_n
    double block_mass_drift = 0.0;
    double block_parity_drift = 0.0;
    double max_u = 0.0;
    double max_ux = 0.0;
};

struct RGState {
    int n = 0;
    SpectralField f;
    /// lambda_n: lambda L^{-n e} with e the irrelevance exponent.
    double lambda = 0.0;
    /// Per-term multipliers L^{-n (e_term - e)} on top of lambda_n.
    std::vector<double> term_scales;
    double A = 0.0;
    SpectralField g;
    double g_norm = 0.0;
    double f_norm = 0.0;
    std::vector<RunRecord> history;
};

/// Decomposes f_0 and records row 0.
RGState initial_state(const SpectralField& f0, const RGConfig& cfg);

/// The nonlinearity of the block started at iteration n (couplings folded into
/// lambda and the term coefficients).
NonlinearitySpec effective_nonlinearity(const RGState& state, const RGConfig& cfg);

/// Solve on [1, L^2], rescale by L, decompose, update the couplings.
RGState rg_step(const RGState& state, const RGConfig& cfg);

struct RunResult {
    std::vector<RunRecord> history;
    /// f_0, f_1, ..., the rescaled data at each iteration.
    std::vector<SpectralField> profiles;
    double A_limit = 0.0;
    double final_residual = 0.0;
    /// ||g_{n+1}|| / ||g_n|| for consecutive rows while ||g_n|| is above the stopping tolerance.
    std::vector<double> g_ratios;
    /// |dA_{n+1}| / |dA_n| from the Duhamel increments, for n >= 1.
    std::vector<double> dA_ratios;
    bool contracting = true;  // every g ratio below 1
};

RunResult run_rg(const SpectralField& f0, const RGConfig& cfg);

struct ExponentFit {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> times;
    std::vector<double> amplitudes;
    std::vector<double> peak_positions;
};

/// Fits max|u(., t)| ~ t^{-alpha} and argmax |u(., t)| ~ t^{beta} by least squares in log-log.
ExponentFit fit_exponents(std::span<const double> times, std::span<const double> amplitudes,
                          std::span<const double> peak_positions);

/// Exponents from raw snapshots u(., t_k).
ExponentFit estimate_exponents(std::span<const SpectralField> snapshots);

/// Exponents from the rescaled data f_k = L^{2k} u(L^k ., L^{2k}) over first <= k <= last.
ExponentFit estimate_exponents(std::span<const SpectralField> profiles, double L, std::size_t first,
                               std::size_t last);

/// Location and value of the largest |f|, refined on the band-limited interpolant.
std::pair<double, double> refined_peak(const SpectralField& f);

struct RateReport {
    double constant = 0.0;     // C_{L,q,delta} (or its irrelevance-exponent variant)
    std::size_t checked = 0;
    std::size_t violations = 0;
    double slope = 0.0;        // least-squares slope of log e_n against n
    double slope_bound = 0.0;  // -(1 - delta) log L
    std::size_t fitted_points = 0;
};

/// e_n against C L^{-n(1-delta)} ||f_0||_q, plus the fitted decay slope over
/// rows with e_n above noise_floor * ||f_0||_q.
RateReport verify_rate_bound(std::span<const RunRecord> history, const RGConfig& cfg,
                             const ConstantsReport& constants, double noise_floor = 1e-9);

struct StepBoundReport {
    std::size_t checked = 0;
    std::size_t prefactor_violations = 0;
    std::size_t residual_violations = 0;
    double max_prefactor_ratio = 0.0;  // |dA| / (|lambda_n| G ||f_n||^2)
    double max_residual_ratio = 0.0;   // ||g_{n+1}|| / ((C/L)||g_n|| + |lambda_n| E ||f_n||^2)
};

/// The per-step increment bounds on A and g with constants from eval_constants.
StepBoundReport check_step_bounds(std::span<const RunRecord> history, const ConstantsReport& constants);

void write_run_records(std::span<const RunRecord> history, const std::filesystem::path& path);

/// Columns x, scaled_u, A_limit_times_f1star, residual.
void write_profile_final(const SpectralField& f, double A_limit, const std::filesystem::path& path);

} // namespace burgers_rg
