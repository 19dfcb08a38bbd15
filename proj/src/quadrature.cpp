#include "canham/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "canham/errors.hpp"

namespace canham {

namespace {

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n, cached per n.
struct ReferenceRule {
    std::vector<double> x, w;
};

const ReferenceRule& reference_rule(int n) {
    static std::map<int, ReferenceRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    ReferenceRule rule;
    rule.x.assign(n, 0.0);
    rule.w.assign(n, 0.0);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.x[n / 2] = 0.0;
    return cache.emplace(n, std::move(rule)).first->second;
}

} // namespace

void gauss_nodes(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw InvalidInterval("gauss_nodes requires n >= 1");
    if (!(a < b)) throw InvalidInterval("gauss_nodes requires a < b");
    const ReferenceRule& rule = reference_rule(n);
    nodes.resize(n);
    weights.resize(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        nodes[i] = mid + half * rule.x[i];
        weights[i] = half * rule.w[i];
    }
}

QuadratureGrid build_grid(const KernelSpec& spec, double t, int nodes_per_panel, int min_panels) {
    if (!(t > 0.0)) throw InvalidInterval("build_grid requires t > 0");
    if (nodes_per_panel < 1) throw InvalidInterval("build_grid requires nodes_per_panel >= 1");

    std::vector<double> edges = {-t, t};
    // Images of the kink lines x + y = λ: entry point λ - t, diagonal
    // crossing λ/2, and the reflected exit point t - λ.
    for (double lam : spec.kinks)
        for (double p : {lam - t, lam / 2.0, t - lam})
            if (p > -t && p < t) edges.push_back(p);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                edges.end());

    // Halve the longest panel (ties to the left) until min_panels is reached.
    while (static_cast<int>(edges.size()) - 1 < min_panels) {
        size_t widest = 0;
        for (size_t i = 1; i + 1 < edges.size(); ++i)
            if (edges[i + 1] - edges[i] > edges[widest + 1] - edges[widest] + 1e-15) widest = i;
        edges.insert(edges.begin() + widest + 1, 0.5 * (edges[widest] + edges[widest + 1]));
    }

    QuadratureGrid grid;
    grid.t = t;
    grid.panel_edges = edges;
    grid.order_per_panel = nodes_per_panel;
    std::vector<double> xs, ws;
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        gauss_nodes(nodes_per_panel, edges[p], edges[p + 1], xs, ws);
        grid.nodes.insert(grid.nodes.end(), xs.begin(), xs.end());
        grid.weights.insert(grid.weights.end(), ws.begin(), ws.end());
    }
    return grid;
}

namespace {

// Mirror-symmetric grids produce node pairs with x_i + x_j exactly on a kink.
// Kernels with a value jump there (the Exponential family at 0) keep second
// order convergence only if the entry takes the two-sided mean.
double entry_kernel(const KernelSpec& spec, double s) {
    for (double lam : spec.kinks)
        if (std::abs(s - lam) < 1e-13)
            return 0.5 * (kernel_eval(spec, lam - 1e-9) + kernel_eval(spec, lam + 1e-9));
    return kernel_eval(spec, s);
}

} // namespace

NystromMatrix assemble_nystrom(const KernelSpec& spec, const QuadratureGrid& grid) {
    int n = static_cast<int>(grid.nodes.size());
    NystromMatrix out;
    out.t = grid.t;
    out.grid = grid;
    out.m.resize(n, n);
    std::vector<double> sqw(n);
    for (int i = 0; i < n; ++i) sqw[i] = std::sqrt(grid.weights[i]);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = sqw[i] * entry_kernel(spec, grid.nodes[i] + grid.nodes[j]) * sqw[j];
            out.m(i, j) = v;
            out.m(j, i) = v;
        }
    return out;
}

} // namespace canham
