#include "canham/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "canham/errors.hpp"

namespace canham {

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string format_sci(Complex v) { return format_sci(v.real()) + "," + format_sci(v.imag()); }

TolProfile tol_profile(const std::string& name) {
    TolProfile p;
    p.name = name;
    if (name == "kinked") {
        // algebraic quadrature convergence across the kink anti-diagonal
        p.det_identity = 1e-5;
        p.mu_route = 1e-5;
        p.relations = 5e-3;
        p.ode = 1e-3;
        p.boundary = 1e-6;
        p.energy = 1e-5;
        p.pde = 5e-3;
        p.fd_orders = false;
    } else if (name != "default") {
        throw DomainError("unknown tolerance profile '" + name + "'");
    }
    return p;
}

const std::vector<std::string>& identity_names() {
    static const std::vector<std::string> names = {
        "determinant", "mu-route", "closed-forms", "derivative-relations", "canonical-ode",
        "theta",       "spectral", "boundary",     "jkernel",              "energy",
        "pde"};
    return names;
}

namespace {

const Complex kI(0.0, 1.0);

std::vector<double> default_t_checks(double tmax) {
    std::vector<double> out;
    for (double t : {0.25, 0.5, 1.0, 1.5, 2.0})
        if (t <= tmax + 1e-12) out.push_back(t);
    if (out.empty()) out.push_back(tmax);
    return out;
}

// residual of the defining integral equation at off-node x, by independent
// panel quadrature of ∫ K(x+y) u(y) dy over [-x, t]
double equation_residual(const KernelSpec& spec, const FieldSolution& sol, double x) {
    double rhs = (sol.kind == FieldKind::Phi || sol.kind == FieldKind::Psi)
                     ? 1.0
                     : kernel_eval(spec, x + sol.t);
    double lo = -x, hi = sol.t;
    double integral = 0.0;
    if (hi > lo) {
        std::vector<double> edges = {lo, hi};
        for (double lam : spec.kinks) {
            double y = lam - x;
            if (y > lo && y < hi) edges.push_back(y);
        }
        std::sort(edges.begin(), edges.end());
        std::vector<double> qx, qw;
        for (size_t p = 0; p + 1 < edges.size(); ++p) {
            int pieces = std::max(1, static_cast<int>(std::ceil((edges[p + 1] - edges[p]) / 0.25)));
            for (int q = 0; q < pieces; ++q) {
                double a = edges[p] + (edges[p + 1] - edges[p]) * q / pieces;
                double b = edges[p] + (edges[p + 1] - edges[p]) * (q + 1) / pieces;
                gauss_nodes(24, a, b, qx, qw);
                for (size_t i = 0; i < qx.size(); ++i)
                    integral += qw[i] * kernel_eval(spec, x + qx[i]) * sol.eval(qx[i]);
            }
        }
    }
    return std::abs(sol.eval(x) + field_sign(sol.kind) * integral - rhs);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
};

class Runner {
  public:
    Runner(const KernelSpec& spec, const RunConfig& cfg, Exec mode)
        : spec_(spec), cfg_(cfg), tol_(tol_profile(cfg.profile)), mode_(mode) {
        ts_ = cfg.t_checks.empty() ? default_t_checks(cfg.tmax) : cfg.t_checks;
        zs_ = cfg.z_checks.empty() ? std::vector<Complex>{{0.0, 2.0}, {1.0, 2.0}} : cfg.z_checks;
        t_mid_ = 1.0 <= cfg.tmax + 1e-12 ? 1.0 : cfg.tmax;
    }

    void add(const std::string& identity, const std::string& params, double residual, double tolv,
             bool pass_override_valid = false, bool pass_override = false) {
        IdentityResult r;
        r.identity = identity;
        r.params = params;
        r.residual = residual;
        r.tolerance = tolv;
        r.pass = pass_override_valid ? pass_override : residual <= tolv;
        results_.push_back(r);
    }

    void determinant() {
        for (double t : ts_) {
            HamiltonianSample hs = hamiltonian_at(spec_, t, cfg_.res);
            auto [one_over_phi, psi] = boundary_m(spec_, t, cfg_.res);
            double r = std::max(std::abs(hs.m - one_over_phi), std::abs(hs.m - psi));
            add("determinant", "t=" + format_sci(t), r, tol_.det_identity);
        }
    }

    void mu_route() {
        for (double t : ts_) {
            if (t < 0.49) continue; // short intervals tested via the curve anyway
            double m_det = hamiltonian_at(spec_, t, cfg_.res).m;
            double m_mu = m_from_mu(spec_, t, 192, cfg_.res, mode_);
            add("mu-route", "t=" + format_sci(t), std::abs(m_det - m_mu), tol_.mu_route);
        }
    }

    void closed_forms() {
        // defining equations of the t <= 0 closed forms, checked by
        // independent quadrature at 12 off-node probes
        double t = -0.4;
        double extent = std::min(kernel_support_end(spec_), 2.5);
        double rmax = 0.0;
        for (FieldKind kind : {FieldKind::Phi, FieldKind::Psi, FieldKind::PhiPlus, FieldKind::PhiMinus}) {
            FieldSolution sol = solve_field(spec_, t, kind, cfg_.res);
            for (int i = 0; i < 3; ++i) {
                double x = -t + 0.03 + (extent - 0.06) * i / 2.0;
                rmax = std::max(rmax, equation_residual(spec_, sol, x));
            }
        }
        add("closed-forms", "equations,t=" + format_sci(t), rmax, tol_.closed_forms);

        // trigonometric evolution for t <= 0 against the tail-integral route
        double smax = 0.0;
        size_t nz = std::min<size_t>(2, zs_.size());
        for (size_t zi = 0; zi < nz; ++zi) {
            Complex z = zs_[zi];
            RatioPoint p0 = ab_ratio(spec_, 0.0, z, AbRoute::PsiPhiTail, cfg_.res);
            for (double t_neg : {-0.25, -0.5, -0.75, -1.0}) {
                RatioPoint p = ab_ratio(spec_, t_neg, z, AbRoute::PsiPhiTail, cfg_.res);
                Complex a_ref = p0.a * std::cos(t_neg * z) + p0.b * std::sin(t_neg * z);
                Complex b_ref = -p0.a * std::sin(t_neg * z) + p0.b * std::cos(t_neg * z);
                smax = std::max(smax, std::abs(p.a - a_ref) + std::abs(p.b - b_ref));
            }
        }
        add("closed-forms", "trig-evolution", smax, tol_.closed_forms);
    }

    void derivative_relations() {
        auto r_h = relation_residuals(spec_, t_mid_, cfg_.h, cfg_.res);
        auto r_h2 = relation_residuals(spec_, t_mid_, cfg_.h / 2.0, cfg_.res);
        for (const auto& [key, value] : r_h) {
            add("derivative-relations", key + ",t=" + format_sci(t_mid_), value, tol_.relations);
            bool fd_based = key[1] != '5' && key[1] != '6'; // r5/r6 carry no finite difference
            if (!fd_based || !tol_.fd_orders) continue;
            double floor = 0.01 * tol_.relations;
            if (value <= floor && r_h2.at(key) <= floor) continue; // below the quadrature floor
            double order = std::log2(value / r_h2.at(key));
            add("derivative-relations", key + ",order", order, 0.0, true,
                std::abs(order - 2.0) <= tol_.order_window);
        }
    }

    void canonical_ode() {
        for (double t : ode_ts())
            for (Complex z : zs_) {
                OdeResidual r = ode_residual(spec_, t, z, cfg_.h, cfg_.res);
                std::string params = "t=" + format_sci(t) + ",z=" + format_sci(z);
                add("canonical-ode", params, std::max(r.res_a, r.res_b), tol_.ode);
                add("canonical-ode", params + ",order", r.observed_order, 0.0, true,
                    std::abs(r.observed_order - 2.0) <= tol_.order_window);
            }
    }

    std::vector<double> ode_ts() const {
        double lo = std::min(0.5, cfg_.tmax);
        return lo == t_mid_ ? std::vector<double>{t_mid_} : std::vector<double>{lo, t_mid_};
    }

    void theta() {
        ThetaConsistency r = theta_consistency(spec_, zs_[0], cfg_.res);
        add("theta", "z=" + format_sci(zs_[0]), r.residual, tol_.theta);
        add("theta", "unit-identity,z=" + format_sci(zs_[0]), r.unit_identity, tol_.theta);
    }

    void spectral() {
        std::vector<double> ts;
        for (double t : {0.5, 1.0, 1.5, 2.0})
            if (t <= cfg_.tmax + 1e-12) ts.push_back(t);
        std::vector<SpectrumReport> reps(ts.size());
        for_each_index(static_cast<int>(ts.size()), mode_, [&](int i) {
            reps[static_cast<size_t>(i)] = spectrum_at(spec_, ts[static_cast<size_t>(i)], cfg_.res);
        });
        double mono_violation = 0.0, frob = 0.0, op_norm = 0.0;
        for (size_t i = 0; i < reps.size(); ++i) {
            double sum_sq = 0.0;
            for (double l : reps[i].eigenvalues) sum_sq += l * l;
            frob = std::max(frob, std::abs(sum_sq - reps[i].frobenius_sq));
            op_norm = std::max(op_norm, reps[i].op_norm);
            if (i > 0 && !reps[i].lambda_plus.empty() && !reps[i - 1].lambda_plus.empty())
                mono_violation = std::max(mono_violation, reps[i - 1].lambda_plus[0] - reps[i].lambda_plus[0]);
        }
        add("spectral", "lambda1-monotone", mono_violation, tol_.spectral_monotone);
        add("spectral", "frobenius-identity", frob, tol_.spectral_frobenius);
        if (cfg_.sup_norm_bound > 0.0) add("spectral", "op-norm", op_norm, cfg_.sup_norm_bound);
    }

    void boundary() {
        // kinked kernels converge at second order only; the 1e-6 target
        // needs the finer panel split
        Resolution bres = cfg_.res;
        if (!spec_.kinks.empty()) bres.min_panels = std::max(bres.min_panels, 16);
        for (double t : ode_ts())
            for (Complex z : zs_)
                add("boundary", "t=" + format_sci(t) + ",z=" + format_sci(z),
                    boundary_identity(spec_, t, z, bres), tol_.boundary);
    }

    void jkernel() {
        Complex z = zs_[0];
        Complex w = zs_.size() > 1 ? zs_[1] : zs_[0];
        KernelValue diag = j_kernel(spec_, 0.0, z, z, cfg_.res);
        Complex theta = kernel_fourier(spec_, z);
        Complex closed = (1.0 - std::conj(theta) * theta) /
                         (2.0 * std::numbers::pi * kI * (std::conj(z) - z));
        add("jkernel", "t0-reduction,z=" + format_sci(z), std::abs(diag.j_hat - closed), tol_.jkernel);

        KernelValue kzw = j_kernel(spec_, t_mid_, z, w, cfg_.res);
        KernelValue kwz = j_kernel(spec_, t_mid_, w, z, cfg_.res);
        double herm = std::abs(kzw.j_hat - std::conj(kwz.j_hat));
        herm = std::max(herm, std::abs(diag.j_hat.imag()));
        add("jkernel", "hermitian", herm, tol_.jkernel_hermitian);
    }

    void energy() {
        double t = std::min(0.5, cfg_.tmax);
        double s = std::min(1.5, cfg_.tmax);
        Complex z = zs_[0];
        Complex w = zs_.size() > 1 ? zs_[1] : zs_[0];
        double r = energy_identity(spec_, t, s, z, w, cfg_.energy_r_nodes, cfg_.res, mode_);
        add("energy", "t=" + format_sci(t) + ",s=" + format_sci(s), r, tol_.energy);
    }

    void pde() {
        auto r_h = pde_residual(spec_, t_mid_, cfg_.h, cfg_.res, zs_[0]);
        auto r_h2 = pde_residual(spec_, t_mid_, cfg_.h / 2.0, cfg_.res, zs_[0]);
        for (const auto& [key, value] : r_h) {
            add("pde", key + ",t=" + format_sci(t_mid_), value, tol_.pde);
            if (key == "damping_consistency" || !tol_.fd_orders) continue;
            double floor = 0.01 * tol_.pde;
            if (value <= floor && r_h2.at(key) <= floor) continue;
            double order = std::log2(value / r_h2.at(key));
            add("pde", key + ",order", order, 0.0, true, std::abs(order - 2.0) <= tol_.order_window);
        }
    }

    VerificationReport run(const std::string& which) {
        VerificationReport rep;
        try {
            for (const std::string& name : identity_names()) {
                if (which != "all" && which != name) continue;
                Timer timer;
                if (name == "determinant") determinant();
                else if (name == "mu-route") mu_route();
                else if (name == "closed-forms") closed_forms();
                else if (name == "derivative-relations") derivative_relations();
                else if (name == "canonical-ode") canonical_ode();
                else if (name == "theta") theta();
                else if (name == "spectral") spectral();
                else if (name == "boundary") boundary();
                else if (name == "jkernel") jkernel();
                else if (name == "energy") energy();
                else if (name == "pde") pde();
                runtimes_[name] = timer.ms();
            }
        } catch (const std::exception& e) {
            rep.numerical_breakdown = true;
            rep.breakdown_what = e.what();
        }
        rep.results = results_;
        for (const auto& r : rep.results) rep.all_pass = rep.all_pass && r.pass;
        if (rep.numerical_breakdown) rep.all_pass = false;
        rep.config_echo = config_json();
        runtimes_out_ = runtimes_;
        return rep;
    }

    Json config_json() const {
        Json j;
        j["spec_path"] = cfg_.spec_path;
        j["tmax"] = cfg_.tmax;
        j["nodes_per_panel"] = cfg_.res.nodes_per_panel;
        j["min_panels"] = cfg_.res.min_panels;
        j["h"] = cfg_.h;
        j["profile"] = cfg_.profile;
        j["energy_r_nodes"] = cfg_.energy_r_nodes;
        Json zl = Json::array();
        for (Complex z : zs_) zl.push_back({z.real(), z.imag()});
        j["z_checks"] = zl;
        Json tl = Json::array();
        for (double t : ts_) tl.push_back(t);
        j["t_checks"] = tl;
        return j;
    }

    std::map<std::string, double> runtimes_out_;

  private:
    const KernelSpec& spec_;
    const RunConfig& cfg_;
    TolProfile tol_;
    Exec mode_;
    std::vector<double> ts_;
    std::vector<Complex> zs_;
    double t_mid_ = 1.0;
    std::vector<IdentityResult> results_;
    std::map<std::string, double> runtimes_;
};

} // namespace

VerificationReport run_verification(const KernelSpec& spec, const RunConfig& cfg, const std::string& which,
                                    Exec mode) {
    Runner runner(spec, cfg, mode);
    VerificationReport rep = runner.run(which);
    rep.runtimes_ms = runner.runtimes_out_;
    return rep;
}

Json report_to_json(const VerificationReport& report, bool strip_run_meta) {
    Json j;
    j["config"] = report.config_echo;
    Json env;
    env["compiler"] = __VERSION__;
    env["threads"] = max_threads();
    j["environment"] = env;
    Json rows = Json::array();
    for (const auto& r : report.results) {
        Json row;
        row["identity"] = r.identity;
        row["params"] = r.params;
        row["residual"] = r.residual;
        row["tolerance"] = r.tolerance;
        row["pass"] = r.pass;
        rows.push_back(row);
    }
    j["identities"] = rows;
    j["all_pass"] = report.all_pass;
    j["numerical_breakdown"] = report.numerical_breakdown;
    if (report.numerical_breakdown) j["breakdown_what"] = report.breakdown_what;
    if (!strip_run_meta) {
        Json meta;
        auto now = std::chrono::system_clock::now().time_since_epoch();
        meta["timestamp_unix_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
        Json rt;
        for (const auto& [k, v] : report.runtimes_ms) rt[k] = v;
        meta["runtimes_ms"] = rt;
        j["run_meta"] = meta;
    }
    return j;
}

} // namespace canham
