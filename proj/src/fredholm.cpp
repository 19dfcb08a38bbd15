#include "canham/fredholm.hpp"

#include <cmath>
#include <limits>

#include "canham/errors.hpp"
#include "canham/linalg.hpp"

namespace canham {

double fredholm_det(const NystromMatrix& m, int sign) {
    double det = det_shifted(m.m, sign);
    if (sign < 0 && std::abs(det) < 1e-13) throw NearSingular(det);
    return det;
}

HamiltonianSample hamiltonian_at(const KernelSpec& spec, double t, Resolution res, bool certify) {
    HamiltonianSample s;
    s.t = t;
    s.res = res;
    if (t <= 0.0) return s; // K[t] = 0

    QuadratureGrid grid = build_grid(spec, t, res.nodes_per_panel, res.min_panels);
    NystromMatrix nm = assemble_nystrom(spec, grid);
    s.num_nodes = static_cast<int>(grid.nodes.size());

    try {
        s.det_plus = fredholm_det(nm, +1);
        s.det_minus = fredholm_det(nm, -1);
    } catch (const NearSingular& e) {
        throw K5Violation(t, e.what());
    }
    if (s.det_minus < 0.0 || s.det_plus <= 0.0)
        throw K5Violation(t, "determinant sign shows an eigenvalue beyond +-1");

    s.m = s.det_plus / s.det_minus;
    s.gamma = s.m * s.m;
    s.h11 = 1.0 / s.gamma;
    s.h22 = s.gamma;

    if (certify) {
        std::vector<double> ev = sym_eigenvalues(nm.m);
        double op = 0.0;
        for (double l : ev) op = std::max(op, std::abs(l));
        s.gap_to_one = 1.0 - op;
        if (s.gap_to_one <= 0.0) throw K5Violation(t, "operator norm reached 1");
    } else {
        s.gap_to_one = std::numeric_limits<double>::quiet_NaN();
    }
    return s;
}

std::vector<HamiltonianSample> hamiltonian_curve(const KernelSpec& spec, const std::vector<double>& ts,
                                                 Resolution res, bool certify, Exec mode) {
    std::vector<HamiltonianSample> out(ts.size());
    for_each_index(static_cast<int>(ts.size()), mode,
                   [&](int i) { out[static_cast<size_t>(i)] = hamiltonian_at(spec, ts[static_cast<size_t>(i)], res, certify); });
    return out;
}

double curve_continuity_gap(const std::vector<HamiltonianSample>& curve) {
    double gap = 0.0;
    for (size_t i = 1; i < curve.size(); ++i) gap = std::max(gap, std::abs(curve[i].m - curve[i - 1].m));
    return gap;
}

SpectrumReport spectrum_at(const KernelSpec& spec, double t, Resolution res) {
    if (!(t > 0.0)) throw InvalidInterval("spectrum_at requires t > 0");
    QuadratureGrid grid = build_grid(spec, t, res.nodes_per_panel, res.min_panels);
    NystromMatrix nm = assemble_nystrom(spec, grid);

    SpectrumReport rep;
    rep.t = t;
    rep.eigenvalues = sym_eigenvalues(nm.m);
    for (auto it = rep.eigenvalues.rbegin(); it != rep.eigenvalues.rend(); ++it)
        if (*it > 0.0) rep.lambda_plus.push_back(*it);
    for (double l : rep.eigenvalues)
        if (l < 0.0) rep.lambda_minus.push_back(l);
    for (double l : rep.eigenvalues) rep.op_norm = std::max(rep.op_norm, std::abs(l));
    rep.gap_to_one = 1.0 - rep.op_norm;
    rep.frobenius_sq = nm.m.squaredNorm();
    return rep;
}

K5Certificate k5_certificate(const KernelSpec& spec, const std::vector<double>& ts, Resolution res, Exec mode) {
    K5Certificate cert;
    cert.ts = ts;
    cert.gaps.assign(ts.size(), 1.0);
    for_each_index(static_cast<int>(ts.size()), mode, [&](int i) {
        size_t k = static_cast<size_t>(i);
        cert.gaps[k] = ts[k] > 0.0 ? spectrum_at(spec, ts[k], res).gap_to_one : 1.0;
    });
    for (double g : cert.gaps) cert.min_gap = std::min(cert.min_gap, g);
    return cert;
}

} // namespace canham
