#pragma once

#include "canham/fields.hpp"

namespace canham {

// a(t,z) = A(t,z)/E(z) and b(t,z) = B(t,z)/E(z). E itself is never needed:
// both defining formulas are homogeneous in E, so the ratios close in terms
// of the kernel alone. Two independent routes:
//   PsiPhiTail:        a = -(iz/2) ∫_t^inf Psi(t,x) e^{izx} dx,
//                      b =    (z/2) ∫_t^inf Phi(t,x) e^{izx} dx
//   PhiPlusMinusTail:  a_frak = (e^{izt} + ∫_t^inf phi+ e^{izx} dx)/2,
//                      b_frak = i(e^{izt} - ∫_t^inf phi- e^{izx} dx)/2,
//                      a = m a_frak, b = b_frak/m
enum class AbRoute { PsiPhiTail, PhiPlusMinusTail };

struct RatioPoint {
    double t = 0.0;
    Complex z;
    Complex a, b;
    Complex a_frak, b_frak; // a/m and m*b
    double m = 1.0;
    AbRoute route = AbRoute::PsiPhiTail;
};

// Default safety margin above the growth constant: evaluations require
// Im z >= c + margin.
inline constexpr double kImagMargin = 0.1;

// ∫_t^inf f(x) e^{izx} dx for a field solution f, by panel quadrature up to
// a cutoff X plus the analytic tail f_inf * i e^{izX} / z of the constant
// part (f_inf = 1 -/+ ∫K for Phi/Psi, 0 for phi±).
Complex tail_transform(const FieldSolution& sol, Complex z, double tol = 1e-12);

RatioPoint ab_ratio(const KernelSpec& spec, double t, Complex z, AbRoute route = AbRoute::PsiPhiTail,
                    Resolution res = {});

// Residuals of the first-order system d/dt a = z gamma b, d/dt b = -z a/gamma
// by central differences in t, normalized by |a| + |b|, with gamma from the
// determinant route. observed_order compares steps h and h/2.
struct OdeResidual {
    double res_a = 0.0;
    double res_b = 0.0;
    double observed_order = 0.0;
};

OdeResidual ode_residual(const KernelSpec& spec, double t, Complex z, double h, Resolution res = {});

// Residuals of the PDE characterizations at fixed t (max over interior
// probes; Schrodinger entries normalized by |a|+|b| at the given z):
//   system_phi     ∂tPhi + gamma^{-1} ∂xPsi
//   system_psi     ∂tPsi + gamma ∂xPhi
//   wave_phi       ∂ttPhi - ∂xxPhi + 2 mu ∂tPhi
//   wave_psi       ∂ttPsi - ∂xxPsi - 2 mu ∂tPsi
//   schrodinger_a  ∂tt a + z^2 a - 2 mu ∂t a
//   schrodinger_b  ∂tt b + z^2 b + 2 mu ∂t b
//   damping_consistency  |gamma'/gamma - 2 mu|
// For t < 0 the closed forms are differentiated analytically, so the
// residuals measure only the quadrature floor.
std::map<std::string, double> pde_residual(const KernelSpec& spec, double t, double h,
                                           Resolution res = {}, Complex z = Complex(0.0, 2.0));

// |a(0,z) - (1+Θ)/2| + |b(0,z) - i(1-Θ)/2|, plus the exact-unit identity
// |a(0,z) - i b(0,z) - 1| (the ratio form of E = A - iB).
struct ThetaConsistency {
    double residual = 0.0;
    double unit_identity = 0.0;
};

ThetaConsistency theta_consistency(const KernelSpec& spec, Complex z, Resolution res = {});

} // namespace canham
