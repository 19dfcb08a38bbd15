#pragma once

#include <Eigen/Dense>

#include "canham/kernel.hpp"

namespace canham {

// Gauss-Legendre nodes and weights on [a, b], exact through degree 2n-1.
void gauss_nodes(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

// Panel decomposition of [-t, t] with Gauss nodes per panel. Panel edges
// include the kink images {λ - t, λ/2, t - λ} that fall inside the interval,
// so no panel straddles a line where K(x+y) loses smoothness avoidably.
struct QuadratureGrid {
    double t = 0.0;
    std::vector<double> panel_edges; // size P+1, first = -t, last = t
    std::vector<double> nodes;       // strictly increasing, size P*n
    std::vector<double> weights;     // positive, sums to 2t
    int order_per_panel = 0;
};

QuadratureGrid build_grid(const KernelSpec& spec, double t, int nodes_per_panel, int min_panels);

// Symmetrized discretization M_ij = sqrt(w_i) K(x_i + x_j) sqrt(w_j) of the
// truncated operator K[t]. Similar to the plain Nystrom matrix K(x_i+x_j) w_j,
// so it has the same spectrum and determinant, but is exactly symmetric.
struct NystromMatrix {
    double t = 0.0;
    QuadratureGrid grid;
    Eigen::MatrixXd m;
};

NystromMatrix assemble_nystrom(const KernelSpec& spec, const QuadratureGrid& grid);

} // namespace canham
