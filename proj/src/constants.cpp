#include "burgers_rg/constants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include "burgers_rg/csv.hpp"
#include "burgers_rg/dynamics.hpp"
#include "burgers_rg/errors.hpp"
#include "burgers_rg/profiles.hpp"

namespace burgers_rg {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = std::numbers::pi;

double kq_integrand(double w, double q) {
    w = std::abs(w);
    return (1.0 + std::pow(w, q)) * (1.0 + 7.0 * w + 2.0 * w * w + 4.0 * w * w * w) *
           std::exp(-w * w);
}

void require_q(double q) {
    if (!(q > 1.0) || !std::isfinite(q)) fail(ErrorKind::invalid_argument, "q must exceed 1");
}

void require_L(double L) {
    if (!(L > 1.0) || !std::isfinite(L)) fail(ErrorKind::invalid_argument, "L must exceed 1");
}

/// Total degree of a monomial: u^{2m+1} u_x^n, u^m u_x, or u u_x.
int term_degree(NonlinearForm form, const Term& t) {
    switch (form) {
    case NonlinearForm::burgers: return 2;
    case NonlinearForm::h1_derivative: return t.m + 1;
    case NonlinearForm::h2_odd: return 2 * t.m + 1 + t.n;
    }
    return 2;
}

} // namespace

double integral_inverse_power(double p) {
    if (!(p > 1.0)) return inf;
    // \int_1^inf dx/(1+x^p) becomes \int_0^1 dz/(1+z^s)/(p-1) with z = x^{1-p}, s = p/(p-1).
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double tol = 1e-13;
    const double head = integrator.integrate([p](double x) { return 1.0 / (1.0 + std::pow(x, p)); },
                                             0.0, 1.0, tol);
    const double s = p / (p - 1.0);
    const double tail =
        integrator.integrate([s](double z) { return 1.0 / (1.0 + std::pow(z, s)); }, 0.0, 1.0, tol) /
        (p - 1.0);
    return 2.0 * (head + tail);
}

double fixed_point_bound_kq(double q) {
    require_q(q);
    const double step = 1e-3;
    const int n = 50000;
    double best_w = 0.0;
    double best = kq_integrand(0.0, q);
    for (int i = 1; i <= n; ++i) {
        const double w = step * i;
        const double v = kq_integrand(w, q);
        if (v > best) {
            best = v;
            best_w = w;
        }
    }
    const double lo = std::max(0.0, best_w - step);
    const double hi = best_w + step;
    auto neg = [q](double w) { return -kq_integrand(w, q); };
    const auto [w, v] = boost::math::tools::brent_find_minima(neg, lo, hi, 52);
    (void)w;
    return std::max(best, -v);
}

double convolution_constant_Gq(double q) {
    require_q(q);
    return (std::pow(2.0, q + 1.0) + 3.0) * integral_inverse_power(q);
}

double sup_constant_K(double q) {
    require_q(q);
    const double a = integral_inverse_power(q) / (2.0 * pi);
    const double b = integral_inverse_power(q - 1.0) / pi;
    return std::max(a, b);
}

double block_growth_Cbar(double L) {
    require_L(L);
    return 6.0 * L * L + 4.0 * std::sqrt(L * L - 1.0) - 4.0;
}

double duhamel_constant_CL(double L) {
    require_L(L);
    const double L2 = L * L;
    return 16.0 * L2 * L2 * L2 - 8.0 * L2 * L2 - 10.0 * L2 + 182.0;
}

double burgers_duhamel_GLq(double L, double q) {
    const double cbar = block_growth_Cbar(L);
    const double L2 = L * L;
    return cbar * cbar * (std::pow(2.0, q + 1.0) + 3.0) / (12.0 * pi) *
           (4.0 * L2 * L2 * L2 + 6.0 * L2 * L2 - 6.0 * L2 + 137.0) * integral_inverse_power(q);
}

double ConstantsReport::prefactor_bound_coefficient() const {
    return form == NonlinearForm::burgers ? G_Lq : K_Lq * Cbar_L * Cbar_L;
}

double ConstantsReport::residual_bound_coefficient() const {
    return form == NonlinearForm::burgers ? E_Lq : Ebar_Lq;
}

ConstantsReport eval_constants(double L, double q, double delta, const NonlinearitySpec& spec,
                               double f0_norm, const std::optional<ContractionEstimate>& contraction) {
    require_L(L);
    require_q(q);
    if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::invalid_argument, "delta must lie in (0, 1)");
    if (!(f0_norm >= 0.0) || !std::isfinite(f0_norm))
        fail(ErrorKind::invalid_argument, "initial norm must be finite and nonnegative");
    spec.validate();
    if (!(spec.r_u > 0.0 && spec.r_v > 0.0))
        fail(ErrorKind::invalid_argument, "convergence radii must be positive");

    ConstantsReport r;
    r.L = L;
    r.q = q;
    r.delta = delta;
    r.f0_norm = f0_norm;
    r.form = spec.form;
    r.irrelevance_exponent = spec.irrelevance_exponent();

    r.k_q = fixed_point_bound_kq(q);
    r.G_q = convolution_constant_Gq(q);
    r.K = sup_constant_K(q);
    r.Cbar_L = block_growth_Cbar(L);
    r.G_Lq = burgers_duhamel_GLq(L, q);
    r.E_Lq = r.G_Lq * (std::pow(L, q + 1.0) + r.k_q);
    r.C_L = duhamel_constant_CL(L);

    r.r = spec.radius();
    if (std::isinf(r.r)) {
        r.r_0 = inf;
    } else {
        if (!std::isfinite(r.K))
            fail(ErrorKind::invalid_argument, "a finite convergence radius needs q > 2");
        r.r_0 = std::min(r.r / r.K, pi * r.r / r.G_q);
        if (!(r.r_0 < r.r)) fail(ErrorKind::invalid_argument, "series radius r_0 must stay below r");
    }

    const std::vector<Term> terms =
        spec.form == NonlinearForm::burgers ? std::vector<Term>{Term{}} : spec.terms;
    double sum_k = 0.0;
    double sum_kbar = 0.0;
    for (const Term& t : terms) {
        const int d = term_degree(spec.form, t);
        const double w = std::abs(t.c) * std::pow(r.G_q / pi, d - 1) * std::pow(r.r_0, d - 2);
        sum_k += w;
        sum_kbar += d * w;
    }
    r.K_Lq = r.C_L * sum_k;
    r.Kbar_Lq = r.C_L * r.Cbar_L * sum_kbar;
    r.Ebar_Lq = (r.k_q + std::pow(L, q + 1.0)) * r.K_Lq * r.Cbar_L * r.Cbar_L;

    r.eps_1 = std::min(1.0 / (r.K_Lq * r.Cbar_L * r.Cbar_L), r.r_0 / r.Cbar_L);
    r.eps_2 = std::min(1.0 / (2.0 * r.Kbar_Lq), r.r_0 / r.Cbar_L);
    r.eps = std::min(r.eps_1, r.eps_2);

    const double shrink = std::pow(L, -(1.0 - delta));
    r.D = 1.0 + r.k_q / (1.0 - shrink);

    const double G = r.prefactor_bound_coefficient();
    const double E = r.residual_bound_coefficient();
    const int e = spec.form == NonlinearForm::burgers ? 1 : r.irrelevance_exponent;
    const int num_D = 16;
    double acc = 0.0;
    r.D_k.reserve(num_D);
    for (int k = 1; k <= num_D; ++k) {
        const double Dk = std::pow(L, -k * (1.0 - delta)) +
                          r.k_q * (1.0 + G * f0_norm + G * f0_norm * acc);
        r.D_k.push_back(Dk);
        acc += Dk * Dk * std::pow(L, -static_cast<double>(k * e));
    }
    const double premise_bound = 1.0 / (2.0 * std::pow(L, 1.0 - delta) * E * r.D * r.D);
    r.D_premise = f0_norm < premise_bound;
    r.D_k_below_D = std::all_of(r.D_k.begin(), r.D_k.end(), [&](double v) { return v < r.D; });
    r.eps_bar = std::min(premise_bound, r.eps / r.D);

    if (contraction) {
        r.C_emp = contraction->C_emp;
        r.L0_emp = contraction->L0_emp;
        r.L_delta = std::max(r.L0_emp, std::pow(2.0 * r.C_emp * (1.0 + r.k_q), 1.0 / delta));
    } else {
        r.C_emp = std::numeric_limits<double>::quiet_NaN();
        r.L0_emp = std::numeric_limits<double>::quiet_NaN();
        r.L_delta = std::numeric_limits<double>::quiet_NaN();
    }
    r.C_Lqdelta = 1.0 + r.k_q / (2.0 * std::pow(L, 1.0 - delta) * (1.0 - 1.0 / L));
    r.Cbar_rate =
        1.0 + r.k_q / (2.0 * std::pow(L, 1.0 - delta) * (1.0 - std::pow(L, -static_cast<double>(e))));
    return r;
}

std::vector<SpectralField> default_probe_family(const GridSpec& grid, double q) {
    const BqParams params{q};
    std::vector<SpectralField> out;

    ProfileId h3{ProfileTag::hermite_odd};
    h3.order = 3;
    out.push_back(make_profile(h3, grid));

    ProfileId h5{ProfileTag::hermite_odd};
    h5.order = 5;
    out.push_back(make_profile(h5, grid));

    ProfileId narrow{ProfileTag::gaussian_phi};
    narrow.width = 0.8;
    ProfileId wide{ProfileTag::gaussian_phi};
    wide.width = 1.2;
    out.push_back(make_profile(narrow, grid) - make_profile(wide, grid));

    /// Close widths approximate the width derivative, the slowest probe seen.
    ProfileId w0{ProfileTag::gaussian_phi};
    w0.width = 1.35;
    ProfileId w1{ProfileTag::gaussian_phi};
    w1.width = 1.4;
    out.push_back(make_profile(w0, grid) - make_profile(w1, grid));

    ProfileId dipole{ProfileTag::bump_dipole};
    out.push_back(decompose(make_profile(dipole, grid), params).g);

    ProfileId h1{ProfileTag::hermite_odd};
    h1.order = 1;
    h1.width = 0.7;
    out.push_back(decompose(make_profile(h1, grid), params).g);
    return out;
}

std::vector<SpectralField> random_probe_family(const GridSpec& grid, double q, std::size_t count,
                                               std::uint64_t seed) {
    const BqParams params{q};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> width(0.6, 1.4);
    std::uniform_real_distribution<double> shift(0.5, 2.5);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> order(1, 3);

    std::vector<SpectralField> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        switch (kind(rng)) {
        case 0: {
            ProfileId id{ProfileTag::hermite_odd};
            id.order = 2 * order(rng) + 1;
            id.width = width(rng);
            out.push_back(make_profile(id, grid));
            break;
        }
        case 1: {
            ProfileId a{ProfileTag::gaussian_phi};
            ProfileId b{ProfileTag::gaussian_phi};
            a.width = width(rng);
            b.width = width(rng);
            out.push_back(make_profile(a, grid) - make_profile(b, grid));
            break;
        }
        default: {
            ProfileId id{ProfileTag::bump_dipole};
            id.width = width(rng);
            id.shift = shift(rng);
            out.push_back(decompose(make_profile(id, grid), params).g);
            break;
        }
        }
    }
    return out;
}

SpectralField linear_rg_map(const SpectralField& g, double L) {
    require_L(L);
    return resample_rescale(linear_propagate(g, 1.0, L * L), L).with_time(1.0);
}

ContractionEstimate estimate_contraction_constant(std::span<const double> L_values, double q,
                                                  std::span<const SpectralField> probes) {
    if (L_values.empty() || probes.empty())
        fail(ErrorKind::invalid_argument, "contraction estimate needs L values and probes");
    const BqParams params{q};

    ContractionEstimate est;
    est.L_values.assign(L_values.begin(), L_values.end());
    std::sort(est.L_values.begin(), est.L_values.end());

    for (const SpectralField& g : probes) {
        const double norm = bq_norm(g, params);
        if (!(norm > 0.0)) fail(ErrorKind::invalid_argument, "probe has zero norm");
        const Moments mom = moments(g);
        if (std::abs(mom.mass) > zero_mass_tolerance * norm ||
            std::abs(mom.first_moment) > zero_mass_tolerance * norm)
            fail(ErrorKind::hypothesis, "probe must have zero mass and zero first moment");
        std::vector<double> row;
        for (double L : est.L_values) row.push_back(bq_norm(linear_rg_map(g, L), params) * L / norm);
        est.ratios.push_back(std::move(row));
    }

    est.C_emp = 0.0;
    est.L0_emp = inf;
    for (std::size_t i = 0; i < est.L_values.size(); ++i) {
        double worst = 0.0;
        for (const auto& row : est.ratios) worst = std::max(worst, row[i]);
        est.C_emp = std::max(est.C_emp, worst);
        if (std::isinf(est.L0_emp) && worst / est.L_values[i] < 1.0) est.L0_emp = est.L_values[i];
    }
    return est;
}

namespace {

/// \int_0^T s^k exp(-a s) ds for a >= 0.
double moment_integral(int k, double a, double T) {
    if (T <= 0.0) return 0.0;
    const double x = a * T;
    const double kp1 = k + 1.0;
    if (x < 1e-6) {
        // Two-term series of the lower incomplete gamma function.
        return std::pow(T, kp1) / kp1 * (1.0 - kp1 / (kp1 + 1.0) * x);
    }
    return boost::math::gamma_p(kp1, x) * std::tgamma(kp1) / std::pow(a, kp1);
}

} // namespace

std::vector<InequalityReport> check_heat_moment_bounds(double q, std::span<const double> t_grid,
                                                       std::span<const double> omega_grid) {
    require_q(q);
    std::vector<InequalityReport> reports(4);
    reports[0].name = "heat_integral";
    reports[1].name = "first_moment_i0";
    reports[2].name = "first_moment_i1";
    reports[3].name = "second_moment";

    for (double t : t_grid) {
        if (!(t >= 1.0)) fail(ErrorKind::invalid_argument, "times must be at least 1");
        const double T = t - 1.0;
        for (double w : omega_grid) {
            const double aw = std::abs(w);
            const double a = w * w;
            const double pre = 1.0 / (1.0 + std::pow(aw, q - 1.0));
            const double den = 1.0 + std::pow(aw, q);
            const double I1 = moment_integral(1, a, T);
            const double lhs[4] = {
                pre * moment_integral(0, a, T),
                pre * I1,
                pre * aw * I1,
                pre * a * moment_integral(2, a, T),
            };
            const double rhs[4] = {
                (2.0 * t - 1.0) / den,
                (t * t - 2.0 * t + 4.0) / den,
                (t * t - 2.0 * t + 4.0) / den,
                (2.0 * T * T * T / 3.0 + 2.0) / den,
            };
            for (int i = 0; i < 4; ++i) {
                InequalityReport& rep = reports[i];
                ++rep.checked;
                if (!(lhs[i] < rhs[i])) ++rep.violations;
                rep.max_ratio = std::max(rep.max_ratio, lhs[i] / rhs[i]);
            }
        }
    }
    return reports;
}

InequalityReport check_frequency_decay_bound(const BlockSolution& u, double q) {
    require_q(q);
    InequalityReport rep;
    rep.name = "transform_pointwise";
    double norm = 0.0;
    for (const SpectralField& s : u.snapshots) norm = std::max(norm, bq_norm_unchecked(s, q));

    for (const SpectralField& s : u.snapshots) {
        const GridSpec& grid = s.grid();
        const auto d0 = s.coeffs();
        const auto d1 = transform_derivative(s, 1);
        const auto d2 = transform_derivative(s, 2);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double w = std::abs(grid.omega(k));
            const double rhs = 2.0 * norm / (1.0 + std::pow(w, q - 1.0));
            const double lhs = std::max({std::abs(d0[k]), std::abs(d1[k]), std::abs(d2[k]),
                                         w * std::abs(d0[k])});
            ++rep.checked;
            if (lhs > rhs) ++rep.violations;
            if (rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
        }
    }
    return rep;
}

std::vector<std::tuple<std::string, double, std::string>> constants_rows(const ConstantsReport& r) {
    std::vector<std::tuple<std::string, double, std::string>> rows = {
        {"L", r.L, "block scale"},
        {"q", r.q, "norm exponent"},
        {"delta", r.delta, "rate slack"},
        {"f0_norm", r.f0_norm, "initial data norm"},
        {"irrelevance_exponent", static_cast<double>(r.irrelevance_exponent), "coupling decay per step"},
        {"k_q", r.k_q, "bound on the fixed point norm"},
        {"G_q", r.G_q, "convolution constant"},
        {"K", r.K, "sup bound constant; inf for q <= 2"},
        {"Cbar_L", r.Cbar_L, "block growth"},
        {"G_Lq", r.G_Lq, "Burgers Duhamel bound"},
        {"E_Lq", r.E_Lq, "Burgers residual bound"},
        {"C_L", r.C_L, "time polynomial bound"},
        {"r", r.r, "analyticity radius"},
        {"r_0", r.r_0, "series radius"},
        {"K_Lq", r.K_Lq, "series Duhamel bound"},
        {"Kbar_Lq", r.Kbar_Lq, "series Lipschitz bound"},
        {"Ebar_Lq", r.Ebar_Lq, "series residual bound"},
        {"eps_1", r.eps_1, "ball invariance threshold"},
        {"eps_2", r.eps_2, "contraction threshold"},
        {"eps", r.eps, "local existence threshold"},
        {"D", r.D, "closed form 1 + k_q/(1 - L^-(1-delta))"},
    };
    for (std::size_t k = 0; k < r.D_k.size(); ++k)
        rows.emplace_back("D_" + std::to_string(k + 1), r.D_k[k], "growth recursion");
    rows.emplace_back("D_premise", r.D_premise ? 1.0 : 0.0, "f0_norm below the D_k < D threshold");
    rows.emplace_back("D_k_below_D", r.D_k_below_D ? 1.0 : 0.0, "every D_k below D");
    rows.emplace_back("eps_bar", r.eps_bar, "iteration threshold");
    rows.emplace_back("C_emp", r.C_emp,
                      "empirical estimate from probes; the contraction constant has no closed form");
    rows.emplace_back("L0_emp", r.L0_emp, "empirical smallest contracting L among tested values");
    rows.emplace_back("L_delta", r.L_delta, "max{L0, [2 C (1 + k_q)]^(1/delta)} with C = C_emp");
    rows.emplace_back("C_Lqdelta", r.C_Lqdelta, "rate constant");
    rows.emplace_back("Cbar_rate", r.Cbar_rate, "rate constant with the irrelevance exponent");
    return rows;
}

void write_constants_table(const ConstantsReport& r, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::invalid_argument, "cannot open " + path.string());
    for (const auto& [key, value, note] : constants_rows(r)) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-22s %-26s # ", key.c_str(), format_number(value).c_str());
        out << buf << note << '\n';
    }
}

void write_constants_csv(const ConstantsReport& r, const std::filesystem::path& path) {
    CsvWriter csv(path, {"key", "value", "note"});
    for (const auto& [key, value, note] : constants_rows(r))
        csv.row(std::vector<std::string>{key, format_number(value), note});
}

} // namespace burgers_rg
