#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "burgers_rg/dynamics.hpp"
#include "burgers_rg/spectral.hpp"

namespace burgers_rg {

/// \int_R dw / (1 + |w|^p) by adaptive quadrature; +inf for p <= 1.
double integral_inverse_power(double p);

/// sup_w (1 + |w|^q)(1 + 7|w| + 2w^2 + 4|w|^3) exp(-w^2), an upper bound for ||f1*||_q.
double fixed_point_bound_kq(double q);

/// (2^{q+1} + 3) \int_R dx / (1 + |x|^q).
double convolution_constant_Gq(double q);

/// max{ (1/2pi) \int dw/(1+|w|^q), (1/pi) \int dw/(1+|w|^{q-1}) }; +inf for q <= 2.
double sup_constant_K(double q);

/// 6L^2 + 4 sqrt(L^2 - 1) - 4, the growth of ||u|| over one block.
double block_growth_Cbar(double L);

/// 16L^6 - 8L^4 - 10L^2 + 182.
double duhamel_constant_CL(double L);

/// Burgers-case Duhamel bound G_{L,q}.
double burgers_duhamel_GLq(double L, double q);

/// Empirical stand-in for the unspecified contraction constants C(q) and L_0.
struct ContractionEstimate {
    double C_emp = 0.0;
    double L0_emp = 0.0;  // +inf if no tested L contracts every probe
    std::vector<double> L_values;
    /// ratios[p][i] = ||R_L g_p||_q * L / ||g_p||_q for L = L_values[i].
    std::vector<std::vector<double>> ratios;
};

/// Every explicit constant for one (L, q, delta, nonlinearity, ||f_0||_q).
/// Infinite entries mean the formula does not apply (e.g. K for q <= 2).
struct ConstantsReport {
    double L = 0.0, q = 0.0, delta = 0.0, f0_norm = 0.0;
    NonlinearForm form = NonlinearForm::burgers;
    int irrelevance_exponent = 1;

    double k_q = 0.0;
    double G_q = 0.0;
    double K = 0.0;
    double Cbar_L = 0.0;
    double G_Lq = 0.0;
    double E_Lq = 0.0;
    double C_L = 0.0;
    double r = 0.0;
    double r_0 = 0.0;
    double K_Lq = 0.0;
    double Kbar_Lq = 0.0;
    double Ebar_Lq = 0.0;
    double eps_1 = 0.0, eps_2 = 0.0, eps = 0.0;
    double D = 0.0;
    std::vector<double> D_k;
    bool D_premise = false;      // ||f_0|| < (2 L^{1-delta} E D^2)^{-1}
    bool D_k_below_D = false;
    double eps_bar = 0.0;
    double C_emp = 0.0;          // NaN until a contraction estimate is supplied
    double L0_emp = 0.0;
    double L_delta = 0.0;
    double C_Lqdelta = 0.0;      // rate constant, Burgers normalization
    double Cbar_rate = 0.0;      // rate constant with the irrelevance exponent

    /// Quadratic coefficient of the |A_{n+1} - A_n| bound for this form.
    double prefactor_bound_coefficient() const;
    /// Quadratic coefficient of the ||g_{n+1}|| bound for this form.
    double residual_bound_coefficient() const;
};

/// Throws invalid_argument for out-of-range parameters, for a finite convergence
/// radius with q <= 2, and when the series radius r_0 does not stay below r.
ConstantsReport eval_constants(double L, double q, double delta, const NonlinearitySpec& spec,
                               double f0_norm,
                               const std::optional<ContractionEstimate>& contraction = std::nullopt);

/// Probe family with ghat(0) = ghat'(0) = 0 used to estimate C_emp.
std::vector<SpectralField> default_probe_family(const GridSpec& grid, double q);
/// Seeded random members of the same family, used as held-out probes.
std::vector<SpectralField> random_probe_family(const GridSpec& grid, double q, std::size_t count,
                                               std::uint64_t seed);

/// Linear RG ratio ||R_L g||_q * L / ||g||_q over probes and L values.
ContractionEstimate estimate_contraction_constant(std::span<const double> L_values, double q,
                                                  std::span<const SpectralField> probes);

/// Linear RG map g -> L^2 (e^{(L^2-1) d_xx} g)(L x).
SpectralField linear_rg_map(const SpectralField& g, double L);

struct InequalityReport {
    std::string name;
    std::size_t checked = 0;
    std::size_t violations = 0;
    double max_ratio = 0.0;  // max LHS / RHS
};

/// Heat-kernel time integrals against their bounds: the plain integral, the
/// first-moment integrals for i = 0, 1 and the second-moment integral,
/// evaluated with closed-form left sides on the given grids.
std::vector<InequalityReport> check_heat_moment_bounds(double q, std::span<const double> t_grid,
                                                       std::span<const double> omega_grid);

/// |d^i uhat/dw^i| (i = 0,1,2) and |w uhat| against 2||u|| / (1 + |w|^{q-1}).
InequalityReport check_frequency_decay_bound(const BlockSolution& u, double q);

void write_constants_table(const ConstantsReport& r, const std::filesystem::path& path);
void write_constants_csv(const ConstantsReport& r, const std::filesystem::path& path);
/// (key, value, note) rows shared by the table and CSV writers.
std::vector<std::tuple<std::string, double, std::string>> constants_rows(const ConstantsReport& r);

} // namespace burgers_rg
