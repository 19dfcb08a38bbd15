#pragma once

#include "canham/canonical.hpp"

namespace canham {

// Solutions of the projection integral equations on [-t, t]:
//   a_z(x) + ∫ K(x+y) a_z(y) dy = e^{izx} + Θ(z) e^{-izx}
//   b_z(x) - ∫ K(x+y) b_z(y) dy = e^{izx} - Θ(z) e^{-izx}
// using (K e_z)(x) = Θ(z) e^{-izx}, valid for Im z > c. The boundary values
// at x = t tie into the canonical ratios:
//   a_z(t) = 2 a(t,z)/m(t),   b_z(t) = -2i m(t) b(t,z).
struct ProjectionSolution {
    double t = 0.0;
    Complex z;
    Complex theta;
    bool closed_form = false; // t <= 0: operator term vanishes on x <= t
    QuadratureGrid grid;
    Eigen::VectorXcd a_nodes, b_nodes;
    Complex a_at_t, b_at_t;

    // natural Nystrom interpolant (x <= t)
    Complex eval_a(const KernelSpec& spec, double x) const;
    Complex eval_b(const KernelSpec& spec, double x) const;
};

ProjectionSolution solve_projection_eqs(const KernelSpec& spec, double t, Complex z, Resolution res = {});

// |a_z(t) - 2 a(t,z)/m| + |b_z(t) + 2i m b(t,z)|
double boundary_identity(const KernelSpec& spec, double t, Complex z, Resolution res = {});

// Reproducing kernel in E-ratio form:
//   j(t;z,w) = (conj(a(t,z)) b(t,w) - a(t,w) conj(b(t,z))) / (pi (w - conj z))
// At t = 0 this reduces to (1 - conj(Θ(z)) Θ(w)) / (2 pi i (conj z - w)).
struct KernelValue {
    double t = 0.0;
    Complex z, w;
    Complex j_hat;
};

KernelValue j_kernel(const KernelSpec& spec, double t, Complex z, Complex w, Resolution res = {});

// Closed trigonometric form of j(t;z,w) for t <= 0 (Paley-Wiener increment).
Complex j_kernel_closed_nonpos_t(const KernelSpec& spec, double t, Complex z, Complex w, Resolution res = {});

// Residual of the energy identity
//   j(t) - j(s) = (1/pi) ∫_t^s [conj(a(r,z)) a(r,w)/gamma(r)
//                               + conj(b(r,z)) b(r,w) gamma(r)] dr,  t < s,
// with the r-integral on an r_nodes-point Gauss rule.
double energy_identity(const KernelSpec& spec, double t, double s, Complex z, Complex w, int r_nodes = 64,
                       Resolution res = {}, Exec mode = Exec::Parallel);

// Diagnostic scan of the diagonal j(t;z,z); records non-monotone increases
// but asserts nothing about the t -> inf limit.
struct DecayScan {
    std::vector<double> ts;
    std::vector<double> j_diag;
    double max_increase = 0.0; // largest j(t_{k+1}) - j(t_k)
};

DecayScan decay_scan(const KernelSpec& spec, Complex z, const std::vector<double>& ts, Resolution res = {},
                     Exec mode = Exec::Parallel);

} // namespace canham
