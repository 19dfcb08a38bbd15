#include "canham/modelspace.hpp"

#include <cmath>
#include <numbers>

#include "canham/errors.hpp"
#include "canham/linalg.hpp"

namespace canham {

namespace {

const Complex kI(0.0, 1.0);

void require_halfplane(const KernelSpec& spec, Complex z) {
    if (!(z.imag() >= spec.growth_c + kImagMargin - 1e-12))
        throw DomainError("evaluation requires Im z >= c + margin");
}

Complex projection_rhs(Complex theta, Complex z, double x, int sign) {
    Complex e_plus = std::exp(kI * z * x);
    Complex e_minus = std::exp(-kI * z * x);
    return e_plus + static_cast<double>(sign) * theta * e_minus;
}

} // namespace

namespace {

Complex projection_interp(const ProjectionSolution& sol, const KernelSpec& spec, double x,
                          const Eigen::VectorXcd& nodes, int sign) {
    Complex rhs = projection_rhs(sol.theta, sol.z, x, sign);
    if (sol.closed_form) return rhs;
    Complex op(0.0, 0.0);
    for (Eigen::Index j = 0; j < nodes.size(); ++j)
        op += sol.grid.weights[static_cast<size_t>(j)] *
              kernel_eval(spec, x + sol.grid.nodes[static_cast<size_t>(j)]) * nodes[j];
    return rhs - static_cast<double>(sign) * op;
}

} // namespace

Complex ProjectionSolution::eval_a(const KernelSpec& spec, double x) const {
    return projection_interp(*this, spec, x, a_nodes, +1);
}

Complex ProjectionSolution::eval_b(const KernelSpec& spec, double x) const {
    return projection_interp(*this, spec, x, b_nodes, -1);
}

ProjectionSolution solve_projection_eqs(const KernelSpec& spec, double t, Complex z, Resolution res) {
    require_halfplane(spec, z);
    ProjectionSolution sol;
    sol.t = t;
    sol.z = z;
    sol.theta = kernel_fourier(spec, z);

    if (t <= 0.0) {
        // K[t] = 0: the solutions coincide with the right-hand sides on x <= t
        sol.closed_form = true;
        sol.a_at_t = projection_rhs(sol.theta, z, t, +1);
        sol.b_at_t = projection_rhs(sol.theta, z, t, -1);
        return sol;
    }

    sol.grid = build_grid(spec, t, res.nodes_per_panel, res.min_panels);
    NystromMatrix nm = assemble_nystrom(spec, sol.grid);
    int n = static_cast<int>(sol.grid.nodes.size());

    // real matrix, complex rhs: two real solves per factorization
    auto solve_complex = [&](int sign) {
        ShiftedLu lu(nm.m, sign);
        if (sign < 0 && std::abs(lu.determinant()) < 1e-13)
            throw K5Violation(t, "near-singular projection system");
        Eigen::VectorXd rhs_re(n), rhs_im(n);
        for (int i = 0; i < n; ++i) {
            double sw = std::sqrt(sol.grid.weights[static_cast<size_t>(i)]);
            Complex rhs = projection_rhs(sol.theta, z, sol.grid.nodes[static_cast<size_t>(i)], sign);
            rhs_re[i] = sw * rhs.real();
            rhs_im[i] = sw * rhs.imag();
        }
        Eigen::VectorXd re = lu.solve(rhs_re), im = lu.solve(rhs_im);
        Eigen::VectorXcd out(n);
        for (int i = 0; i < n; ++i) {
            double sw = std::sqrt(sol.grid.weights[static_cast<size_t>(i)]);
            out[i] = Complex(re[i], im[i]) / sw;
        }
        return out;
    };
    sol.a_nodes = solve_complex(+1);
    sol.b_nodes = solve_complex(-1);
    sol.a_at_t = sol.eval_a(spec, t);
    sol.b_at_t = sol.eval_b(spec, t);
    return sol;
}

double boundary_identity(const KernelSpec& spec, double t, Complex z, Resolution res) {
    ProjectionSolution proj = solve_projection_eqs(spec, t, z, res);
    // a_z(t) = 2 a_frak, b_z(t) = -2i b_frak
    RatioPoint p = ab_ratio(spec, t, z, AbRoute::PhiPlusMinusTail, res);
    return std::abs(proj.a_at_t - 2.0 * p.a_frak) + std::abs(proj.b_at_t + 2.0 * kI * p.b_frak);
}

KernelValue j_kernel(const KernelSpec& spec, double t, Complex z, Complex w, Resolution res) {
    require_halfplane(spec, z);
    require_halfplane(spec, w);
    RatioPoint pz = ab_ratio(spec, t, z, AbRoute::PsiPhiTail, res);
    RatioPoint pw = (z == w) ? pz : ab_ratio(spec, t, w, AbRoute::PsiPhiTail, res);
    KernelValue out;
    out.t = t;
    out.z = z;
    out.w = w;
    out.j_hat = (std::conj(pz.a) * pw.b - pw.a * std::conj(pz.b)) /
                (std::numbers::pi * (w - std::conj(z)));
    return out;
}

Complex j_kernel_closed_nonpos_t(const KernelSpec& spec, double t, Complex z, Complex w, Resolution res) {
    Complex theta_z = kernel_fourier(spec, z);
    Complex theta_w = kernel_fourier(spec, w);
    Complex a0z = (1.0 + theta_z) / 2.0, b0z = kI * (1.0 - theta_z) / 2.0;
    Complex a0w = (1.0 + theta_w) / 2.0, b0w = kI * (1.0 - theta_w) / 2.0;
    Complex d = w - std::conj(z);
    Complex first = std::conj(a0z) * b0w - a0w * std::conj(b0z);
    Complex second = std::conj(a0z) * a0w + std::conj(b0z) * b0w;
    (void)res;
    return (first * std::cos(t * d) - second * std::sin(t * d)) / (std::numbers::pi * d);
}

double energy_identity(const KernelSpec& spec, double t, double s, Complex z, Complex w, int r_nodes,
                       Resolution res, Exec mode) {
    if (!(t <= s)) throw InvalidInterval("energy_identity requires t <= s");
    require_halfplane(spec, z);
    require_halfplane(spec, w);
    if (t == s) return 0.0;

    Complex lhs = j_kernel(spec, t, z, w, res).j_hat - j_kernel(spec, s, z, w, res).j_hat;

    std::vector<double> rx, rw;
    gauss_nodes(r_nodes, t, s, rx, rw);
    std::vector<Complex> integrand(rx.size());
    for_each_index(static_cast<int>(rx.size()), mode, [&](int i) {
        size_t k = static_cast<size_t>(i);
        double gamma = hamiltonian_at(spec, rx[k], res).gamma;
        RatioPoint pz = ab_ratio(spec, rx[k], z, AbRoute::PsiPhiTail, res);
        RatioPoint pw = ab_ratio(spec, rx[k], w, AbRoute::PsiPhiTail, res);
        integrand[k] = std::conj(pz.a) * pw.a / gamma + std::conj(pz.b) * pw.b * gamma;
    });
    Complex rhs(0.0, 0.0);
    for (size_t k = 0; k < rx.size(); ++k) rhs += rw[k] * integrand[k];
    rhs /= std::numbers::pi;
    return std::abs(lhs - rhs);
}

DecayScan decay_scan(const KernelSpec& spec, Complex z, const std::vector<double>& ts, Resolution res,
                     Exec mode) {
    DecayScan scan;
    scan.ts = ts;
    scan.j_diag.assign(ts.size(), 0.0);
    for_each_index(static_cast<int>(ts.size()), mode, [&](int i) {
        size_t k = static_cast<size_t>(i);
        scan.j_diag[k] = j_kernel(spec, ts[k], z, z, res).j_hat.real();
    });
    for (size_t k = 1; k < ts.size(); ++k)
        scan.max_increase = std::max(scan.max_increase, scan.j_diag[k] - scan.j_diag[k - 1]);
    return scan;
}

} // namespace canham
