#include "canham/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "canham/errors.hpp"
#include "canham/quadrature.hpp"

namespace canham {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bump_raw(double alpha, double width, double x) {
    if (x <= 0.0 || x >= width) return 0.0;
    double q = x * (width - x);
    return alpha * std::exp(4.0 - width * width / q);
}

// Lagrange interpolation on the interp_order+1 samples nearest x.
struct TableWindow {
    int start = 0;
    int count = 0;
};

TableWindow table_window(const KernelSpec& spec, double x) {
    int n = static_cast<int>(spec.table_x.size());
    int count = std::min(n, spec.interp_order + 1);
    auto it = std::lower_bound(spec.table_x.begin(), spec.table_x.end(), x);
    int i = static_cast<int>(it - spec.table_x.begin());
    int start = std::clamp(i - count / 2, 0, n - count);
    return {start, count};
}

double table_eval(const KernelSpec& spec, double x) {
    if (spec.table_x.empty() || x < spec.table_x.front() || x > spec.table_x.back()) return 0.0;
    auto [start, count] = table_window(spec, x);
    double sum = 0.0;
    for (int j = 0; j < count; ++j) {
        double lj = 1.0;
        for (int k = 0; k < count; ++k) {
            if (k == j) continue;
            lj *= (x - spec.table_x[start + k]) / (spec.table_x[start + j] - spec.table_x[start + k]);
        }
        sum += lj * spec.table_k[start + j];
    }
    return sum;
}

double table_deriv(const KernelSpec& spec, double x) {
    if (spec.table_x.empty() || x < spec.table_x.front() || x > spec.table_x.back()) return 0.0;
    auto [start, count] = table_window(spec, x);
    double sum = 0.0;
    for (int j = 0; j < count; ++j) {
        double denom = 1.0;
        for (int k = 0; k < count; ++k)
            if (k != j) denom *= spec.table_x[start + j] - spec.table_x[start + k];
        // derivative of the j-th Lagrange basis
        double dl = 0.0;
        for (int m = 0; m < count; ++m) {
            if (m == j) continue;
            double prod = 1.0;
            for (int k = 0; k < count; ++k) {
                if (k == j || k == m) continue;
                prod *= x - spec.table_x[start + k];
            }
            dl += prod;
        }
        sum += dl / denom * spec.table_k[start + j];
    }
    return sum;
}

// ∫_a^b K(x) g(x) dx by Gauss panels split at the kink set, panel length
// capped by max_len.
template <typename G>
double panel_integral(const KernelSpec& spec, double a, double b, double max_len, int n, G&& g) {
    if (b <= a) return 0.0;
    std::vector<double> edges = {a, b};
    for (double lam : spec.kinks)
        if (lam > a && lam < b) edges.push_back(lam);
    std::sort(edges.begin(), edges.end());
    double total = 0.0;
    std::vector<double> xs, ws;
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        double lo = edges[p], hi = edges[p + 1];
        int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_len)));
        for (int q = 0; q < pieces; ++q) {
            double pa = lo + (hi - lo) * q / pieces;
            double pb = lo + (hi - lo) * (q + 1) / pieces;
            gauss_nodes(n, pa, pb, xs, ws);
            for (size_t i = 0; i < xs.size(); ++i) total += ws[i] * kernel_eval(spec, xs[i]) * g(xs[i]);
        }
    }
    return total;
}

} // namespace

KernelSpec make_exponential(double alpha, double beta) {
    KernelSpec s;
    s.family = KernelFamily::Exponential;
    s.alpha = alpha;
    s.beta = beta;
    s.growth_c = 0.0;
    s.kinks = {0.0};
    s.smoothness_class = 0;
    return s;
}

KernelSpec make_bump(double alpha, double width) {
    KernelSpec s;
    s.family = KernelFamily::Bump;
    s.alpha = alpha;
    s.width = width;
    s.growth_c = 0.0;
    s.kinks = {};
    s.smoothness_class = 6;
    return s;
}

KernelSpec make_table(std::vector<double> x, std::vector<double> k, int interp_order) {
    KernelSpec s;
    s.family = KernelFamily::SampledTable;
    s.table_x = std::move(x);
    s.table_k = std::move(k);
    s.interp_order = interp_order;
    s.growth_c = 0.0;
    if (!s.table_x.empty()) s.kinks = {s.table_x.front(), s.table_x.back()};
    return s;
}

double bump_unit_mass(double width) {
    KernelSpec unit = make_bump(1.0, width);
    return panel_integral(unit, 0.0, width, width / 8.0, 40, [](double) { return 1.0; });
}

KernelSpec make_bump_with_mass(double mass, double width) {
    return make_bump(mass / bump_unit_mass(width), width);
}

double kernel_eval(const KernelSpec& spec, double x) {
    if (x < 0.0) return 0.0;
    switch (spec.family) {
        case KernelFamily::Exponential: return spec.alpha * std::exp(-spec.beta * x);
        case KernelFamily::Bump: return bump_raw(spec.alpha, spec.width, x);
        case KernelFamily::SampledTable: return table_eval(spec, x);
    }
    return 0.0;
}

double kernel_deriv(const KernelSpec& spec, double x) {
    for (double lam : spec.kinks)
        if (x == lam) throw KinkPoint(x);
    if (x < 0.0) return 0.0;
    switch (spec.family) {
        case KernelFamily::Exponential: return -spec.alpha * spec.beta * std::exp(-spec.beta * x);
        case KernelFamily::Bump: {
            if (x <= 0.0 || x >= spec.width) return 0.0;
            double q = x * (spec.width - x);
            double k = bump_raw(spec.alpha, spec.width, x);
            return k * spec.width * spec.width * (spec.width - 2.0 * x) / (q * q);
        }
        case KernelFamily::SampledTable: return table_deriv(spec, x);
    }
    return 0.0;
}

double kernel_support_end(const KernelSpec& spec) {
    switch (spec.family) {
        case KernelFamily::Exponential: return kInf;
        case KernelFamily::Bump: return spec.width;
        case KernelFamily::SampledTable: return spec.table_x.empty() ? 0.0 : spec.table_x.back();
    }
    return kInf;
}

double kernel_decay_rate(const KernelSpec& spec) {
    return spec.family == KernelFamily::Exponential ? spec.beta : kInf;
}

double kernel_cumulative(const KernelSpec& spec, double s) {
    if (s <= 0.0) return 0.0;
    if (spec.family == KernelFamily::Exponential)
        return spec.alpha / spec.beta * (1.0 - std::exp(-spec.beta * s));
    double hi = std::min(s, kernel_support_end(spec));
    return panel_integral(spec, 0.0, hi, 0.25, 40, [](double) { return 1.0; });
}

double kernel_mass(const KernelSpec& spec) {
    if (spec.family == KernelFamily::Exponential) return spec.alpha / spec.beta;
    return kernel_cumulative(spec, kernel_support_end(spec));
}

Complex kernel_fourier(const KernelSpec& spec, Complex z, double tol) {
    if (!(z.imag() > spec.growth_c))
        throw DomainError("kernel_fourier requires Im z > c");
    double v = z.imag();
    double cutoff = kernel_support_end(spec);
    if (!std::isfinite(cutoff)) {
        // |∫_X^inf K e^{izx}| <= alpha e^{-(r+v)X} / (r+v) with r the decay rate
        double r = kernel_decay_rate(spec);
        double rv = r + v;
        double amp = std::max(std::abs(spec.alpha), 1e-300);
        cutoff = std::max(1.0, std::log(amp / (tol * rv)) / rv);
    }
    double max_len = std::min(1.0, 6.0 / (1.0 + std::abs(z.real())));
    Complex iz(0.0, 1.0);
    iz *= z;
    double re = panel_integral(spec, 0.0, cutoff, max_len, 32,
                               [&](double x) { return std::exp(-v * x) * std::cos(z.real() * x); });
    double im = panel_integral(spec, 0.0, cutoff, max_len, 32,
                               [&](double x) { return std::exp(-v * x) * std::sin(z.real() * x); });
    return {re, im};
}

KernelValidationReport kernel_validate(const KernelSpec& spec, int probe_density) {
    KernelValidationReport rep;

    // (K3): probe the negative axis, plus declared table samples.
    double neg_max = 0.0;
    for (int i = 1; i <= probe_density; ++i) {
        double x = -5.0 * i / probe_density;
        neg_max = std::max(neg_max, std::abs(kernel_eval(spec, x)));
    }
    if (spec.family == KernelFamily::SampledTable)
        for (size_t i = 0; i < spec.table_x.size(); ++i)
            if (spec.table_x[i] < 0.0 && spec.table_k[i] != 0.0) neg_max = std::max(neg_max, std::abs(spec.table_k[i]));
    rep.support_ok = neg_max == 0.0;

    // continuity probe across [-1, support..] including the kink set
    double probe_end = std::min(kernel_support_end(spec) + 1.0, 10.0);
    double delta = 1e-7;
    double jump = 0.0;
    auto probe_jump = [&](double x) {
        jump = std::max(jump, std::abs(kernel_eval(spec, x + delta) - kernel_eval(spec, x - delta)));
    };
    for (int i = 0; i <= probe_density; ++i) probe_jump(-1.0 + (probe_end + 1.0) * i / probe_density);
    for (double lam : spec.kinks) probe_jump(lam);
    rep.continuity_probe_max_jump = jump;

    // growth estimate from log-slopes on [1, 20]
    double slope_max = 0.0;
    double prev_x = 1.0, prev_k = std::abs(kernel_eval(spec, 1.0));
    for (int i = 1; i <= 40; ++i) {
        double x = 1.0 + 19.0 * i / 40.0;
        double k = std::abs(kernel_eval(spec, x));
        if (prev_k > 1e-14 && k > 1e-14) slope_max = std::max(slope_max, std::log(k / prev_k) / (x - prev_x));
        prev_x = x;
        prev_k = k;
    }
    rep.estimated_growth_c = std::max(0.0, slope_max);

    // sup over a wide u-grid of |FK(u + i(c+eps))|
    double eps = 0.05;
    double sup = 0.0;
    int nu = std::max(200, probe_density);
    for (int i = 0; i <= nu; ++i) {
        double u = -50.0 + 100.0 * i / nu;
        sup = std::max(sup, std::abs(kernel_fourier(spec, Complex(u, spec.growth_c + eps), 1e-10)));
    }
    sup = std::max(sup, std::abs(kernel_fourier(spec, Complex(0.0, spec.growth_c + eps), 1e-10)));
    rep.fourier_sup_bound = sup;
    rep.k5_small_symbol = sup < 1.0;
    return rep;
}

namespace {

std::string family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::Exponential: return "exp";
        case KernelFamily::Bump: return "bump";
        case KernelFamily::SampledTable: return "table";
    }
    return "exp";
}

} // namespace

KernelSpec kernel_spec_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::string family = j.at("family").get<std::string>();
    KernelSpec s;
    if (family == "exp") {
        s = make_exponential(j.at("alpha").get<double>(), j.at("beta").get<double>());
    } else if (family == "bump") {
        s = make_bump(j.at("alpha").get<double>(), j.at("width").get<double>());
    } else if (family == "table") {
        std::vector<double> xs, ks;
        for (const auto& row : j.at("samples")) {
            xs.push_back(row.at(0).get<double>());
            ks.push_back(row.at(1).get<double>());
        }
        s = make_table(std::move(xs), std::move(ks), j.value("interp_order", 3));
    } else {
        throw DomainError("unknown kernel family '" + family + "'");
    }
    if (j.contains("c")) s.growth_c = j.at("c").get<double>();
    if (j.contains("kinks")) s.kinks = j.at("kinks").get<std::vector<double>>();
    if (j.contains("smoothness")) s.smoothness_class = j.at("smoothness").get<int>();
    std::sort(s.kinks.begin(), s.kinks.end());
    return s;
}

KernelSpec load_kernel_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open kernel spec '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return kernel_spec_from_json(ss.str());
}

std::string kernel_spec_to_json(const KernelSpec& spec) {
    nlohmann::ordered_json j;
    j["family"] = family_name(spec.family);
    if (spec.family == KernelFamily::Exponential) {
        j["alpha"] = spec.alpha;
        j["beta"] = spec.beta;
    } else if (spec.family == KernelFamily::Bump) {
        j["alpha"] = spec.alpha;
        j["width"] = spec.width;
    } else {
        auto samples = nlohmann::ordered_json::array();
        for (size_t i = 0; i < spec.table_x.size(); ++i)
            samples.push_back({spec.table_x[i], spec.table_k[i]});
        j["samples"] = samples;
        j["interp_order"] = spec.interp_order;
    }
    j["c"] = spec.growth_c;
    j["kinks"] = spec.kinks;
    j["smoothness"] = spec.smoothness_class;
    return j.dump(2);
}

} // namespace canham
