#pragma once

#include <vector>

#include "canham/parallel.hpp"
#include "canham/quadrature.hpp"

namespace canham {

struct Resolution {
    int nodes_per_panel = 64;
    int min_panels = 2;
};

// One point of the Hamiltonian curve:
//   m(t) = det(1 + K[t]) / det(1 - K[t]),  gamma = m^2,  H = diag(1/gamma, gamma).
struct HamiltonianSample {
    double t = 0.0;
    double det_plus = 1.0;
    double det_minus = 1.0;
    double m = 1.0;
    double gamma = 1.0;
    double h11 = 1.0;
    double h22 = 1.0;
    double gap_to_one = 1.0; // 1 - ||K[t]||, eigensolver route; NaN when not certified
    int num_nodes = 0;
    Resolution res;
};

// det(I + sign*M). Throws NearSingular when sign = -1 and |det| < 1e-13.
double fredholm_det(const NystromMatrix& m, int sign);

// t <= 0 short-circuits to the exact sample (K[t] = 0). With certify, the
// spectrum is computed and gap_to_one <= 0 raises K5Violation.
HamiltonianSample hamiltonian_at(const KernelSpec& spec, double t, Resolution res = {}, bool certify = false);

std::vector<HamiltonianSample> hamiltonian_curve(const KernelSpec& spec, const std::vector<double>& ts,
                                                 Resolution res = {}, bool certify = true,
                                                 Exec mode = Exec::Parallel);

// Continuity diagnostic: max |m(t_{k+1}) - m(t_k)| along a curve.
double curve_continuity_gap(const std::vector<HamiltonianSample>& curve);

struct SpectrumReport {
    double t = 0.0;
    std::vector<double> eigenvalues;  // ascending
    std::vector<double> lambda_plus;  // positive eigenvalues, descending
    std::vector<double> lambda_minus; // negative eigenvalues, ascending (most negative first)
    double op_norm = 0.0;
    double gap_to_one = 1.0;
    double frobenius_sq = 0.0;
};

SpectrumReport spectrum_at(const KernelSpec& spec, double t, Resolution res = {});

struct K5Certificate {
    double min_gap = 1.0; // vacuous pass on an empty grid
    std::vector<double> ts;
    std::vector<double> gaps;
};

K5Certificate k5_certificate(const KernelSpec& spec, const std::vector<double>& ts, Resolution res = {},
                             Exec mode = Exec::Parallel);

} // namespace canham
