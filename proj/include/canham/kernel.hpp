#pragma once

#include <complex>
#include <string>
#include <vector>

namespace canham {

using Complex = std::complex<double>;

enum class KernelFamily { Exponential, Bump, SampledTable };

// An admissible kernel K: real-valued, continuous, vanishing on (-inf, 0),
// |K(x)| <= C exp(c x), with K' allowed to jump only on the finite set Λ.
//
//   Exponential:  K(x) = alpha * exp(-beta x)           for x >= 0
//   Bump:         K(x) = alpha * exp(4 - w^2/(x(w-x)))  for 0 < x < w
//   SampledTable: piecewise-polynomial interpolant of (x_i, K_i)
struct KernelSpec {
    KernelFamily family = KernelFamily::Exponential;
    double alpha = 1.0;
    double beta = 1.0;  // Exponential decay rate
    double width = 1.0; // Bump support is [0, width]
    std::vector<double> table_x, table_k;
    int interp_order = 3;
    double growth_c = 0.0;       // the constant c in the growth bound
    std::vector<double> kinks;   // Λ
    int smoothness_class = 0;    // largest j with K^(j)(0+) = 0
};

KernelSpec make_exponential(double alpha, double beta);
KernelSpec make_bump(double alpha, double width);
KernelSpec make_table(std::vector<double> x, std::vector<double> k, int interp_order = 3);

// ∫K for the unit-amplitude bump of the given width.
double bump_unit_mass(double width);
// Bump scaled so that ∫K equals the requested mass.
KernelSpec make_bump_with_mass(double mass, double width);

KernelSpec kernel_spec_from_json(const std::string& text);
KernelSpec load_kernel_spec(const std::string& path);
std::string kernel_spec_to_json(const KernelSpec& spec);

double kernel_eval(const KernelSpec& spec, double x);
// Throws KinkPoint when x lies in Λ.
double kernel_deriv(const KernelSpec& spec, double x);

// sup of supp K (width for Bump, last abscissa for tables, +inf otherwise).
double kernel_support_end(const KernelSpec& spec);
// rate r such that |K(x)| <= C exp(-r x) eventually; +inf for compact support.
double kernel_decay_rate(const KernelSpec& spec);
// ∫_0^s K(u) du  (0 for s <= 0).
double kernel_cumulative(const KernelSpec& spec, double s);
// ∫_0^inf K(u) du
double kernel_mass(const KernelSpec& spec);

// Θ(z) = ∫_0^inf K(x) e^{izx} dx for Im z > c, by truncated panel quadrature;
// the truncation point comes from the exponential tail bound.
Complex kernel_fourier(const KernelSpec& spec, Complex z, double tol = 1e-12);

struct KernelValidationReport {
    bool support_ok = true;
    double continuity_probe_max_jump = 0.0;
    double estimated_growth_c = 0.0;
    double fourier_sup_bound = 0.0; // sup over sampled u of |FK(u + i(c+eps))|
    bool k5_small_symbol = false;   // fourier_sup_bound < 1
};

KernelValidationReport kernel_validate(const KernelSpec& spec, int probe_density = 800);

} // namespace canham
