#pragma once

#include <map>
#include <string>

#include "canham/fredholm.hpp"

namespace canham {

// The four integral equations on (-inf, t], collocated on [-t, t]:
//   Phi:      u(x) + ∫ K(x+y) u(y) dy = 1
//   Psi:      u(x) - ∫ K(x+y) u(y) dy = 1
//   PhiPlus:  u(x) + ∫ K(x+y) u(y) dy = K(x+t)
//   PhiMinus: u(x) - ∫ K(x+y) u(y) dy = K(x+t)
enum class FieldKind { Phi, Psi, PhiPlus, PhiMinus };

int field_sign(FieldKind kind); // +1 for Phi/PhiPlus, -1 for Psi/PhiMinus

// Solution of one field equation at fixed t. eval(x) is the natural Nystrom
// interpolant, which doubles as the extension formula for x > t:
//   Phi(t,x) = 1 - ∫_0^{x-t} K - ∫_{-t}^{t} K(x+y) Phi(t,y) dy
// and sign/rhs mirrored for the other three. For t <= 0 the closed forms
// Phi = 1 - ∫_0^{x+t} K, Psi = 1 + ∫_0^{x+t} K, phi± = K(x+t) are used and
// no matrix is assembled.
struct FieldSolution {
    FieldKind kind = FieldKind::Phi;
    double t = 0.0;
    bool closed_form = false;
    KernelSpec spec;
    QuadratureGrid grid;          // empty when closed_form
    Eigen::VectorXd node_values;  // at grid nodes
    double boundary_value = 1.0;  // value at x = t
    double condition = 1.0;       // condition estimate of (I ± M)

    double eval(double x) const;
};

FieldSolution solve_field(const KernelSpec& spec, double t, FieldKind kind, Resolution res = {});

// eval restricted to x > t (DomainError otherwise).
double field_extend(const FieldSolution& sol, double x);

// Like eval, but re-quadratures the operator integral with sub-panels split
// at the jump images y = λ - x, interpolating the solution inside its own
// panels. The plain node-sum interpolant is discontinuous in t for kernels
// with a value jump (a scaled grid node crossing y = -x flips one term), so
// the finite-difference residual machinery uses this evaluator instead.
double field_eval_refined(const FieldSolution& sol, double x);

// (1/Phi(t,t), Psi(t,t)) from two independent solves; both equal m(t).
std::pair<double, double> boundary_m(const KernelSpec& spec, double t, Resolution res = {});

// mu(t) = phi+(t,t) + phi-(t,t)
double mu_at(const KernelSpec& spec, double t, Resolution res = {});

// exp(∫_0^t mu(s) ds) by Gauss quadrature in s; the mu-route value of m(t).
double m_from_mu(const KernelSpec& spec, double t, int s_nodes = 192, Resolution res = {},
                 Exec mode = Exec::Parallel);

// Residuals of the derivative relations, the quadrature identities and the
// first-order field PDEs, all by central differences of step h on re-solved
// fields (max over an interior probe grid):
//   r1_phiplus_dtPhi   phi+ + ∂tPhi/Phi(t,t)
//   r2_phiminus_dxPhi  phi- + ∂xPhi/Phi(t,t)
//   r3_phiplus_dxPsi   phi+ - ∂xPsi/Psi(t,t)
//   r4_phiminus_dtPsi  phi- - ∂tPsi/Psi(t,t)
//   r5_recip_m         1/m - (1 - ∫ phi+)
//   r6_m               m - (1 + ∫ phi-)
//   r7_pde_plus        ∂t phi+ - ∂x phi- + mu phi+
//   r8_pde_minus       ∂t phi- - ∂x phi+ - mu phi-
//   r9_psi_from_phi    Psi - (1 - Phi(t,t)^{-2} ∫_{-t}^{x} ∂tPhi)
//   r10_phi_from_psi   Phi - (1 - Psi(t,t)^{-2} ∫_{-t}^{x} ∂tPsi)
std::map<std::string, double> relation_residuals(const KernelSpec& spec, double t, double h,
                                                 Resolution res = {});

} // namespace canham
