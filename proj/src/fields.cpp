#include "canham/fields.hpp"

#include <cmath>

#include "canham/errors.hpp"
#include "canham/linalg.hpp"

namespace canham {

int field_sign(FieldKind kind) {
    return (kind == FieldKind::Phi || kind == FieldKind::PhiPlus) ? +1 : -1;
}

namespace {

bool has_unit_rhs(FieldKind kind) { return kind == FieldKind::Phi || kind == FieldKind::Psi; }

double closed_form_value(const KernelSpec& spec, FieldKind kind, double t, double x) {
    switch (kind) {
        case FieldKind::Phi: return 1.0 - kernel_cumulative(spec, x + t);
        case FieldKind::Psi: return 1.0 + kernel_cumulative(spec, x + t);
        default: return kernel_eval(spec, x + t);
    }
}

// Gauss points for the probe integrals in r9/r10.
void partial_integral_rule(double a, double b, std::vector<double>& xs, std::vector<double>& ws) {
    xs.clear();
    ws.clear();
    if (b <= a) return;
    int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 0.25)));
    std::vector<double> px, pw;
    for (int q = 0; q < pieces; ++q) {
        gauss_nodes(32, a + (b - a) * q / pieces, a + (b - a) * (q + 1) / pieces, px, pw);
        xs.insert(xs.end(), px.begin(), px.end());
        ws.insert(ws.end(), pw.begin(), pw.end());
    }
}

} // namespace

double FieldSolution::eval(double x) const {
    if (closed_form) return closed_form_value(spec, kind, t, x);

    // u(x) = rhs(x) - sign * [ ∫_0^{x-t} K  (unit-rhs fields only)
    //                          + Σ_j w_j K(x + x_j) u_j ]
    double base = has_unit_rhs(kind) ? 1.0 : kernel_eval(spec, x + t);
    double op = has_unit_rhs(kind) ? kernel_cumulative(spec, x - t) : 0.0;
    for (size_t j = 0; j < grid.nodes.size(); ++j)
        op += grid.weights[j] * kernel_eval(spec, x + grid.nodes[j]) * node_values[static_cast<Eigen::Index>(j)];
    return base - field_sign(kind) * op;
}

FieldSolution solve_field(const KernelSpec& spec, double t, FieldKind kind, Resolution res) {
    FieldSolution sol;
    sol.kind = kind;
    sol.t = t;
    sol.spec = spec;
    if (t <= 0.0) {
        sol.closed_form = true;
        sol.boundary_value = closed_form_value(spec, kind, t, t);
        return sol;
    }

    sol.grid = build_grid(spec, t, res.nodes_per_panel, res.min_panels);
    NystromMatrix nm = assemble_nystrom(spec, sol.grid);
    int n = static_cast<int>(sol.grid.nodes.size());

    // symmetrized system: (I ± M) v = sqrt(w) rhs, u = v / sqrt(w)
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        double r = has_unit_rhs(kind) ? 1.0 : kernel_eval(spec, sol.grid.nodes[static_cast<size_t>(i)] + t);
        rhs[i] = std::sqrt(sol.grid.weights[static_cast<size_t>(i)]) * r;
    }
    ShiftedLu lu(nm.m, field_sign(kind));
    if (field_sign(kind) < 0 && std::abs(lu.determinant()) < 1e-13)
        throw K5Violation(t, "near-singular collocation system");
    sol.condition = lu.condition();
    Eigen::VectorXd v = lu.solve(rhs);
    sol.node_values.resize(n);
    for (int i = 0; i < n; ++i) sol.node_values[i] = v[i] / std::sqrt(sol.grid.weights[static_cast<size_t>(i)]);
    sol.boundary_value = sol.eval(t);
    return sol;
}

double field_extend(const FieldSolution& sol, double x) {
    if (!(x > sol.t)) throw DomainError("field_extend requires x > t");
    return sol.eval(x);
}

namespace {

// reference Gauss nodes on [-1, 1] with normalized barycentric weights
struct BaryRule {
    std::vector<double> nodes, weights;
};

const BaryRule& bary_rule(int n) {
    static std::map<int, BaryRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    BaryRule rule;
    std::vector<double> wi;
    gauss_nodes(n, -1.0, 1.0, rule.nodes, wi);
    rule.weights.assign(static_cast<size_t>(n), 1.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (k != i) rule.weights[static_cast<size_t>(i)] /= rule.nodes[static_cast<size_t>(i)] - rule.nodes[static_cast<size_t>(k)];
    double scale = 0.0;
    for (double b : rule.weights) scale = std::max(scale, std::abs(b));
    for (double& b : rule.weights) b /= scale;
    return cache.emplace(n, std::move(rule)).first->second;
}

// barycentric interpolation of the solution inside panel p
double panel_interp(const FieldSolution& sol, size_t p, double y) {
    int n = sol.grid.order_per_panel;
    double a = sol.grid.panel_edges[p], b = sol.grid.panel_edges[p + 1];
    double xi = (2.0 * y - a - b) / (b - a);
    const BaryRule& rule = bary_rule(n);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < n; ++k) {
        double d = xi - rule.nodes[static_cast<size_t>(k)];
        double v = sol.node_values[static_cast<Eigen::Index>(p) * n + k];
        if (std::abs(d) < 1e-15) return v;
        num += rule.weights[static_cast<size_t>(k)] / d * v;
        den += rule.weights[static_cast<size_t>(k)] / d;
    }
    return num / den;
}

} // namespace

double field_eval_refined(const FieldSolution& sol, double x) {
    if (sol.closed_form) return sol.eval(x);
    const KernelSpec& spec = sol.spec;
    double base = has_unit_rhs(sol.kind) ? 1.0 : kernel_eval(spec, x + sol.t);
    double op = has_unit_rhs(sol.kind) ? kernel_cumulative(spec, x - sol.t) : 0.0;
    std::vector<double> qx, qw;
    for (size_t p = 0; p + 1 < sol.grid.panel_edges.size(); ++p) {
        double a = sol.grid.panel_edges[p], b = sol.grid.panel_edges[p + 1];
        std::vector<double> edges = {a, b};
        for (double lam : spec.kinks) {
            double y = lam - x;
            if (y > a + 1e-14 && y < b - 1e-14) edges.push_back(y);
        }
        std::sort(edges.begin(), edges.end());
        for (size_t e = 0; e + 1 < edges.size(); ++e) {
            gauss_nodes(24, edges[e], edges[e + 1], qx, qw);
            for (size_t i = 0; i < qx.size(); ++i)
                op += qw[i] * kernel_eval(spec, x + qx[i]) * panel_interp(sol, p, qx[i]);
        }
    }
    return base - field_sign(sol.kind) * op;
}

std::pair<double, double> boundary_m(const KernelSpec& spec, double t, Resolution res) {
    FieldSolution phi = solve_field(spec, t, FieldKind::Phi, res);
    FieldSolution psi = solve_field(spec, t, FieldKind::Psi, res);
    return {1.0 / phi.boundary_value, psi.boundary_value};
}

double mu_at(const KernelSpec& spec, double t, Resolution res) {
    FieldSolution plus = solve_field(spec, t, FieldKind::PhiPlus, res);
    FieldSolution minus = solve_field(spec, t, FieldKind::PhiMinus, res);
    return plus.boundary_value + minus.boundary_value;
}

double m_from_mu(const KernelSpec& spec, double t, int s_nodes, Resolution res, Exec mode) {
    if (t <= 0.0) return 1.0;
    std::vector<double> xs, ws;
    gauss_nodes(s_nodes, 0.0, t, xs, ws);
    std::vector<double> mu(xs.size());
    for_each_index(static_cast<int>(xs.size()), mode,
                   [&](int i) { mu[static_cast<size_t>(i)] = mu_at(spec, xs[static_cast<size_t>(i)], res); });
    double integral = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) integral += ws[i] * mu[i];
    return std::exp(integral);
}

namespace {

std::vector<double> probe_points(const KernelSpec& spec, double t, double h, int count) {
    double lo, hi;
    if (t > 0.0) {
        double pad = std::max(0.05, 2.0 * h + 1e-3);
        lo = -t + pad;
        hi = t - pad;
    } else {
        // only x >= -t sees the kernel when t <= 0
        double extent = std::min(kernel_support_end(spec), 3.0);
        lo = -t + 0.01;
        hi = -t + extent - 0.01;
    }
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) {
        double x = lo + (hi - lo) * i / (count - 1);
        // keep clear of the kink images of phi± at x = λ - t
        for (double lam : spec.kinks)
            if (std::abs(x - (lam - t)) < 2.0 * h + 1e-3) x += 2.0 * h + 2e-3;
        if (x < hi + 1e-12) xs.push_back(x);
    }
    return xs;
}

} // namespace

std::map<std::string, double> relation_residuals(const KernelSpec& spec, double t, double h, Resolution res) {
    std::map<std::string, double> r;
    std::vector<double> xs = probe_points(spec, t, h, 33);

    FieldSolution phi = solve_field(spec, t, FieldKind::Phi, res);
    FieldSolution psi = solve_field(spec, t, FieldKind::Psi, res);
    FieldSolution fp = solve_field(spec, t, FieldKind::PhiPlus, res);
    FieldSolution fm = solve_field(spec, t, FieldKind::PhiMinus, res);
    double phi_tt = phi.boundary_value;
    double psi_tt = psi.boundary_value;
    double mu = fp.boundary_value + fm.boundary_value;
    double m_det = hamiltonian_at(spec, t, res).m;

    // For t < 0 every derivative is available in closed form; the residuals
    // then measure the identities at the quadrature floor only.
    bool analytic = t < 0.0;
    FieldSolution phi_p, phi_m, psi_p, psi_m, fp_p, fp_m, fm_p, fm_m;
    if (!analytic) {
        phi_p = solve_field(spec, t + h, FieldKind::Phi, res);
        phi_m = solve_field(spec, t - h, FieldKind::Phi, res);
        psi_p = solve_field(spec, t + h, FieldKind::Psi, res);
        psi_m = solve_field(spec, t - h, FieldKind::Psi, res);
        fp_p = solve_field(spec, t + h, FieldKind::PhiPlus, res);
        fp_m = solve_field(spec, t - h, FieldKind::PhiPlus, res);
        fm_p = solve_field(spec, t + h, FieldKind::PhiMinus, res);
        fm_m = solve_field(spec, t - h, FieldKind::PhiMinus, res);
    }

    // all pointwise values go through the jump-aware evaluator so that the
    // central differences in t see a smooth function of t
    auto F = [](const FieldSolution& s, double x) { return field_eval_refined(s, x); };
    auto dt_phi = [&](double x) {
        return analytic ? -kernel_eval(spec, x + t) : (F(phi_p, x) - F(phi_m, x)) / (2.0 * h);
    };
    auto dt_psi = [&](double x) {
        return analytic ? kernel_eval(spec, x + t) : (F(psi_p, x) - F(psi_m, x)) / (2.0 * h);
    };
    auto dx_phi = [&](double x) {
        return analytic ? -kernel_eval(spec, x + t) : (F(phi, x + h) - F(phi, x - h)) / (2.0 * h);
    };
    auto dx_psi = [&](double x) {
        return analytic ? kernel_eval(spec, x + t) : (F(psi, x + h) - F(psi, x - h)) / (2.0 * h);
    };
    auto dt_fp = [&](double x) {
        return analytic ? kernel_deriv(spec, x + t) : (F(fp_p, x) - F(fp_m, x)) / (2.0 * h);
    };
    auto dt_fm = [&](double x) {
        return analytic ? kernel_deriv(spec, x + t) : (F(fm_p, x) - F(fm_m, x)) / (2.0 * h);
    };
    auto dx_fp = [&](double x) {
        return analytic ? kernel_deriv(spec, x + t) : (F(fp, x + h) - F(fp, x - h)) / (2.0 * h);
    };
    auto dx_fm = [&](double x) {
        return analytic ? kernel_deriv(spec, x + t) : (F(fm, x + h) - F(fm, x - h)) / (2.0 * h);
    };

    double r1 = 0, r2 = 0, r3 = 0, r4 = 0, r7 = 0, r8 = 0, r9 = 0, r10 = 0;
    std::vector<double> qx, qw;
    for (double x : xs) {
        r1 = std::max(r1, std::abs(F(fp, x) + dt_phi(x) / phi_tt));
        r2 = std::max(r2, std::abs(F(fm, x) + dx_phi(x) / phi_tt));
        r3 = std::max(r3, std::abs(F(fp, x) - dx_psi(x) / psi_tt));
        r4 = std::max(r4, std::abs(F(fm, x) - dt_psi(x) / psi_tt));
        r7 = std::max(r7, std::abs(dt_fp(x) - dx_fm(x) + mu * F(fp, x)));
        r8 = std::max(r8, std::abs(dt_fm(x) - dx_fp(x) - mu * F(fm, x)));

        partial_integral_rule(-t, x, qx, qw);
        double int_dt_phi = 0.0, int_dt_psi = 0.0;
        for (size_t q = 0; q < qx.size(); ++q) {
            int_dt_phi += qw[q] * dt_phi(qx[q]);
            int_dt_psi += qw[q] * dt_psi(qx[q]);
        }
        r9 = std::max(r9, std::abs(F(psi, x) - (1.0 - int_dt_phi / (phi_tt * phi_tt))));
        r10 = std::max(r10, std::abs(F(phi, x) - (1.0 - int_dt_psi / (psi_tt * psi_tt))));
    }

    double int_fp = 0.0, int_fm = 0.0;
    if (t > 0.0) {
        for (size_t j = 0; j < fp.grid.nodes.size(); ++j) {
            int_fp += fp.grid.weights[j] * fp.node_values[static_cast<Eigen::Index>(j)];
            int_fm += fm.grid.weights[j] * fm.node_values[static_cast<Eigen::Index>(j)];
        }
    }
    r["r1_phiplus_dtPhi"] = r1;
    r["r2_phiminus_dxPhi"] = r2;
    r["r3_phiplus_dxPsi"] = r3;
    r["r4_phiminus_dtPsi"] = r4;
    r["r5_recip_m"] = std::abs(1.0 / m_det - (1.0 - int_fp));
    r["r6_m"] = std::abs(m_det - (1.0 + int_fm));
    r["r7_pde_plus"] = r7;
    r["r8_pde_minus"] = r8;
    r["r9_psi_from_phi"] = r9;
    r["r10_phi_from_psi"] = r10;
    return r;
}

} // namespace canham
