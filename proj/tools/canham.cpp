// canham: construct canonical-system Hamiltonians from Hankel-type kernels
// via Fredholm determinants and verify the identity web at desk scale.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "canham/errors.hpp"
#include "canham/verify.hpp"

using namespace canham;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// "2i", "0+2i", "1-2i", "-1+3i", "2"
Complex parse_complex(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    if (s.empty()) throw DomainError("empty complex literal");
    if (s.back() != 'i') return Complex(std::stod(s), 0.0);
    s.pop_back();
    size_t split = s.npos;
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i] == '+' || (s[i] == '-' && s[i - 1] != 'e' && s[i - 1] != 'E')) split = i;
    if (split == s.npos) return Complex(0.0, s.empty() || s == "+" ? 1.0 : s == "-" ? -1.0 : std::stod(s));
    std::string re = s.substr(0, split), im = s.substr(split);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return Complex(std::stod(re), std::stod(im));
}

std::vector<double> linspace(double a, double b, int steps) {
    std::vector<double> out;
    if (steps <= 0) {
        out.push_back(a);
        return out;
    }
    for (int i = 0; i <= steps; ++i) out.push_back(a + (b - a) * i / steps);
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file '" + path + "'");
    out << text;
}

int cmd_kernel_validate(const std::string& spec_path) {
    KernelSpec spec = load_kernel_spec(spec_path);
    KernelValidationReport rep = kernel_validate(spec);
    Json j;
    j["support_ok"] = rep.support_ok;
    j["continuity_probe_max_jump"] = rep.continuity_probe_max_jump;
    j["estimated_growth_c"] = rep.estimated_growth_c;
    j["fourier_sup_bound"] = rep.fourier_sup_bound;
    j["k5_small_symbol"] = rep.k5_small_symbol;
    std::cout << j.dump(2) << "\n";
    return rep.support_ok ? kExitPass : kExitVerifyFail;
}

int cmd_kernel_fourier(const std::string& spec_path, const std::string& z_text) {
    KernelSpec spec = load_kernel_spec(spec_path);
    Complex z = parse_complex(z_text);
    Complex theta = kernel_fourier(spec, z);
    std::cout << "theta_re=" << format_sci(theta.real()) << "\n"
              << "theta_im=" << format_sci(theta.imag()) << "\n";
    return kExitPass;
}

int cmd_hamiltonian(const std::string& spec_path, double t0, double t1, int steps, Resolution res,
                    bool certify, const std::string& out, Exec mode) {
    KernelSpec spec = load_kernel_spec(spec_path);
    std::vector<double> ts = linspace(t0, t1, steps);
    std::vector<HamiltonianSample> curve;
    try {
        curve = hamiltonian_curve(spec, ts, res, certify, mode);
    } catch (const K5Violation& e) {
        std::cerr << "K5 violation at t = " << e.t << ": " << e.what() << "\n";
        return kExitVerifyFail;
    }
    std::string csv = "t,det_plus,det_minus,m,gamma,h11,h22,gap_to_one\n";
    for (const auto& h : curve) {
        csv += format_sci(h.t) + "," + format_sci(h.det_plus) + "," + format_sci(h.det_minus) + "," +
               format_sci(h.m) + "," + format_sci(h.gamma) + "," + format_sci(h.h11) + "," +
               format_sci(h.h22) + "," + format_sci(h.gap_to_one) + "\n";
    }
    write_file(out, csv);
    std::cout << "wrote " << curve.size() << " rows to " << out
              << " (continuity gap " << format_sci(curve_continuity_gap(curve)) << ")\n";
    return kExitPass;
}

int cmd_fields(const std::string& spec_path, double t, double xmin, double xmax, int samples,
               Resolution res, const std::string& out) {
    KernelSpec spec = load_kernel_spec(spec_path);
    FieldSolution phi = solve_field(spec, t, FieldKind::Phi, res);
    FieldSolution psi = solve_field(spec, t, FieldKind::Psi, res);
    FieldSolution fp = solve_field(spec, t, FieldKind::PhiPlus, res);
    FieldSolution fm = solve_field(spec, t, FieldKind::PhiMinus, res);
    std::string csv = "x,Phi,Psi,PhiPlus,PhiMinus\n";
    for (double x : linspace(xmin, xmax, samples))
        csv += format_sci(x) + "," + format_sci(phi.eval(x)) + "," + format_sci(psi.eval(x)) + "," +
               format_sci(fp.eval(x)) + "," + format_sci(fm.eval(x)) + "\n";
    write_file(out, csv);
    std::cout << "wrote " << samples + 1 << " rows to " << out << "\n";
    return kExitPass;
}

int cmd_spectrum(const std::string& spec_path, double t0, double t1, int steps, Resolution res,
                 const std::string& out, Exec mode) {
    KernelSpec spec = load_kernel_spec(spec_path);
    std::vector<double> ts;
    for (double t : linspace(t0, t1, steps))
        if (t > 0.0) ts.push_back(t);
    std::vector<SpectrumReport> reps(ts.size());
    for_each_index(static_cast<int>(ts.size()), mode,
                   [&](int i) { reps[static_cast<size_t>(i)] = spectrum_at(spec, ts[static_cast<size_t>(i)], res); });
    std::string csv = "t,op_norm,gap_to_one,frobenius_sq,lambda_plus_1,lambda_plus_2,lambda_plus_3,"
                      "lambda_minus_1,lambda_minus_2,lambda_minus_3\n";
    for (const auto& r : reps) {
        csv += format_sci(r.t) + "," + format_sci(r.op_norm) + "," + format_sci(r.gap_to_one) + "," +
               format_sci(r.frobenius_sq);
        for (int k = 0; k < 3; ++k)
            csv += "," + format_sci(k < static_cast<int>(r.lambda_plus.size()) ? r.lambda_plus[static_cast<size_t>(k)] : 0.0);
        for (int k = 0; k < 3; ++k)
            csv += "," + format_sci(k < static_cast<int>(r.lambda_minus.size()) ? r.lambda_minus[static_cast<size_t>(k)] : 0.0);
        csv += "\n";
    }
    write_file(out, csv);
    std::cout << "wrote " << reps.size() << " rows to " << out << "\n";
    return kExitPass;
}

int cmd_canonical(const std::string& spec_path, double t0, double t1, int steps,
                  const std::vector<std::string>& z_texts, Resolution res, const std::string& out) {
    KernelSpec spec = load_kernel_spec(spec_path);
    std::string csv = "t,re_z,im_z,re_a,im_a,re_b,im_b,route,route_agreement\n";
    for (double t : linspace(t0, t1, steps))
        for (const std::string& zt : z_texts) {
            Complex z = parse_complex(zt);
            RatioPoint p1 = ab_ratio(spec, t, z, AbRoute::PsiPhiTail, res);
            RatioPoint p2 = ab_ratio(spec, t, z, AbRoute::PhiPlusMinusTail, res);
            double gap = std::abs(p1.a - p2.a) + std::abs(p1.b - p2.b);
            csv += format_sci(t) + "," + format_sci(z.real()) + "," + format_sci(z.imag()) + "," +
                   format_sci(p1.a.real()) + "," + format_sci(p1.a.imag()) + "," +
                   format_sci(p1.b.real()) + "," + format_sci(p1.b.imag()) + ",psi-phi-tail," +
                   format_sci(gap) + "\n";
        }
    write_file(out, csv);
    std::cout << "wrote canonical scan to " << out << "\n";
    return kExitPass;
}

int cmd_verify(const std::string& spec_path, const std::string& which, RunConfig cfg,
               const std::string& report_path, Exec mode) {
    KernelSpec spec = load_kernel_spec(spec_path);
    cfg.spec_path = spec_path;
    if (which != "all") {
        const auto& names = identity_names();
        if (std::find(names.begin(), names.end(), which) == names.end())
            throw DomainError("unknown identity '" + which + "'");
    }
    VerificationReport rep = run_verification(spec, cfg, which, mode);
    for (const auto& r : rep.results)
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.identity << " [" << r.params << "] residual "
                  << format_sci(r.residual) << (r.tolerance > 0.0 ? " tol " + format_sci(r.tolerance) : "")
                  << "\n";
    if (rep.numerical_breakdown) std::cout << "NUMERICAL BREAKDOWN: " << rep.breakdown_what << "\n";
    if (!report_path.empty()) write_file(report_path, report_to_json(rep).dump(2) + "\n");
    if (rep.numerical_breakdown) return kExitNumerical;
    return rep.all_pass ? kExitPass : kExitVerifyFail;
}

int cmd_refine(const std::string& spec_path, const std::string& identity, double t, int base_nodes,
               int levels) {
    if (levels < 2) {
        std::cerr << "refine needs at least 2 resolution levels\n";
        return kExitUsage;
    }
    KernelSpec spec = load_kernel_spec(spec_path);
    std::vector<double> values;
    for (int l = 0; l < levels; ++l) {
        Resolution res{base_nodes << l, 2};
        if (identity == "determinant") {
            values.push_back(hamiltonian_at(spec, t, res).m);
        } else if (identity == "theta") {
            values.push_back(theta_consistency(spec, Complex(0.0, 2.0), res).residual);
        } else {
            throw DomainError("refine supports identities: determinant, theta");
        }
        std::cout << "nodes_per_panel=" << (base_nodes << l) << " value=" << format_sci(values.back())
                  << "\n";
    }
    // successive differences give the observed convergence order
    bool kinked = !spec.kinks.empty();
    double floor_order = kinked ? 1.2 : 5.0;
    bool ok = true;
    for (size_t l = 0; l + 2 < values.size(); ++l) {
        double d1 = std::abs(values[l] - values[l + 1]);
        double d2 = std::abs(values[l + 1] - values[l + 2]);
        if (d2 < 1e-12) {
            std::cout << "level " << l << ": converged below 1e-12\n";
            continue;
        }
        double order = std::log2(d1 / d2);
        std::cout << "level " << l << ": observed order " << format_sci(order) << "\n";
        if (order < floor_order) ok = false;
    }
    if (values.size() == 2) {
        double d = std::abs(values[0] - values[1]);
        std::cout << "difference " << format_sci(d) << "\n";
        ok = d < 1e-6;
    }
    return ok ? kExitPass : kExitVerifyFail;
}

int cmd_modelspace_j(const std::string& spec_path, double t, const std::string& z_text,
                     const std::string& w_text, Resolution res, const std::string& out) {
    KernelSpec spec = load_kernel_spec(spec_path);
    KernelValue kv = j_kernel(spec, t, parse_complex(z_text), parse_complex(w_text), res);
    std::cout << "j_re=" << format_sci(kv.j_hat.real()) << "\nj_im=" << format_sci(kv.j_hat.imag())
              << "\n";
    if (!out.empty()) {
        std::string csv = "t,re_z,im_z,re_w,im_w,re_j,im_j\n";
        csv += format_sci(kv.t) + "," + format_sci(kv.z.real()) + "," + format_sci(kv.z.imag()) + "," +
               format_sci(kv.w.real()) + "," + format_sci(kv.w.imag()) + "," +
               format_sci(kv.j_hat.real()) + "," + format_sci(kv.j_hat.imag()) + "\n";
        write_file(out, csv);
    }
    return kExitPass;
}

int cmd_modelspace_energy(const std::string& spec_path, double t, double s, const std::string& z_text,
                          const std::string& w_text, int r_nodes, Resolution res, Exec mode) {
    KernelSpec spec = load_kernel_spec(spec_path);
    double r = energy_identity(spec, t, s, parse_complex(z_text), parse_complex(w_text), r_nodes, res, mode);
    std::cout << "energy_residual=" << format_sci(r) << "\n";
    return kExitPass;
}

int cmd_modelspace_decay(const std::string& spec_path, const std::string& z_text, double t0, double t1,
                         int steps, Resolution res, const std::string& out, Exec mode) {
    KernelSpec spec = load_kernel_spec(spec_path);
    Complex z = parse_complex(z_text);
    DecayScan scan = decay_scan(spec, z, linspace(t0, t1, steps), res, mode);
    std::string csv = "t,re_z,im_z,j_diag\n";
    for (size_t i = 0; i < scan.ts.size(); ++i)
        csv += format_sci(scan.ts[i]) + "," + format_sci(z.real()) + "," + format_sci(z.imag()) + "," +
               format_sci(scan.j_diag[i]) + "\n";
    write_file(out, csv);
    std::cout << "max_increase=" << format_sci(scan.max_increase) << "\n";
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"canonical-system Hamiltonians from Hankel-type kernels"};
    app.require_subcommand(1);

    std::string spec_path, out = "out.csv", report_path, z_text = "2i", w_text = "1+2i";
    std::string which = "all", profile = "default", identity = "determinant";
    double t0 = 0.0, t1 = 2.0, t = 1.0, s = 1.5, xmin = -2.0, xmax = 2.0, tmax = 2.0, h = 1e-2;
    double op_norm_bound = 0.0;
    int steps = 64, samples = 200, nodes = 64, panels = 4, r_nodes = 64, levels = 3, base_nodes = 16;
    bool no_certify = false, serial = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--spec", spec_path, "kernel spec JSON")->required();
        cmd->add_option("--nodes", nodes, "Gauss nodes per panel");
        cmd->add_option("--panels", panels, "minimum panel count");
        cmd->add_flag("--serial", serial, "disable the parallel execution policy");
    };

    CLI::App* kernel = app.add_subcommand("kernel", "kernel ingestion and validation");
    kernel->require_subcommand(1);
    CLI::App* kval = kernel->add_subcommand("validate", "check admissibility and print the report");
    kval->add_option("--spec", spec_path, "kernel spec JSON")->required();
    CLI::App* kfour = kernel->add_subcommand("fourier", "evaluate the Fourier symbol");
    kfour->add_option("--spec", spec_path, "kernel spec JSON")->required();
    kfour->add_option("--z", z_text, "evaluation point, Im z > c")->required();

    CLI::App* ham = app.add_subcommand("hamiltonian", "Hamiltonian curve CSV");
    add_common(ham);
    ham->add_option("--t0", t0);
    ham->add_option("--t1", t1);
    ham->add_option("--steps", steps);
    ham->add_option("--out", out);
    ham->add_flag("--no-certify", no_certify, "skip the per-t eigensolver certificate");

    CLI::App* fields = app.add_subcommand("fields", "field profiles CSV at fixed t");
    add_common(fields);
    fields->add_option("--t", t);
    fields->add_option("--xmin", xmin);
    fields->add_option("--xmax", xmax);
    fields->add_option("--samples", samples);
    fields->add_option("--out", out);

    CLI::App* spectrum = app.add_subcommand("spectrum", "spectrum scan CSV");
    add_common(spectrum);
    spectrum->add_option("--t0", t0);
    spectrum->add_option("--t1", t1);
    spectrum->add_option("--steps", steps);
    spectrum->add_option("--out", out);

    std::vector<std::string> z_list = {"2i"};
    CLI::App* canonical = app.add_subcommand("canonical", "a,b ratio scan CSV");
    add_common(canonical);
    canonical->add_option("--t0", t0);
    canonical->add_option("--t1", t1);
    canonical->add_option("--steps", steps);
    canonical->add_option("--z", z_list, "evaluation points");
    canonical->add_option("--out", out);

    CLI::App* verify = app.add_subcommand("verify", "run the identity suite");
    add_common(verify);
    verify->add_option("name", which, "identity name or 'all'");
    verify->add_option("--tmax", tmax);
    verify->add_option("--fd-step", h, "finite difference step");
    verify->add_option("--tol-profile", profile, "default | kinked");
    verify->add_option("--report", report_path, "write the JSON report here");
    verify->add_option("--op-norm-bound", op_norm_bound, "assert the spectral norm stays below this");
    verify->add_option("--r-nodes", r_nodes, "energy identity quadrature nodes");

    CLI::App* refine = app.add_subcommand("refine", "convergence study across resolutions");
    refine->add_option("--spec", spec_path, "kernel spec JSON")->required();
    refine->add_option("--identity", identity, "determinant | theta");
    refine->add_option("--t", t);
    refine->add_option("--base-nodes", base_nodes);
    refine->add_option("--levels", levels);

    CLI::App* modelspace = app.add_subcommand("modelspace", "reproducing kernel operations");
    modelspace->require_subcommand(1);
    CLI::App* msj = modelspace->add_subcommand("j", "evaluate j(t;z,w)");
    add_common(msj);
    msj->add_option("--t", t);
    msj->add_option("--z", z_text);
    msj->add_option("--w", w_text);
    std::string ms_out;
    msj->add_option("--out", ms_out, "optional CSV output");
    CLI::App* mse = modelspace->add_subcommand("energy", "energy identity residual");
    add_common(mse);
    mse->add_option("--t", t);
    mse->add_option("--s", s);
    mse->add_option("--z", z_text);
    mse->add_option("--w", w_text);
    mse->add_option("--r-nodes", r_nodes);
    CLI::App* msd = modelspace->add_subcommand("decay", "diagonal decay scan CSV");
    add_common(msd);
    msd->add_option("--z", z_text);
    msd->add_option("--t0", t0);
    msd->add_option("--t1", t1);
    msd->add_option("--steps", steps);
    msd->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    if (verify->parsed() && verify->count("--panels") == 0) panels = 8;
    Resolution res{nodes, panels};
    Exec mode = serial ? Exec::Serial : Exec::Parallel;
    try {
        if (kval->parsed()) return cmd_kernel_validate(spec_path);
        if (kfour->parsed()) return cmd_kernel_fourier(spec_path, z_text);
        if (ham->parsed()) return cmd_hamiltonian(spec_path, t0, t1, steps, res, !no_certify, out, mode);
        if (fields->parsed()) return cmd_fields(spec_path, t, xmin, xmax, samples, res, out);
        if (spectrum->parsed()) return cmd_spectrum(spec_path, t0, t1, steps, res, out, mode);
        if (canonical->parsed()) return cmd_canonical(spec_path, t0, t1, steps, z_list, res, out);
        if (verify->parsed()) {
            RunConfig cfg;
            cfg.tmax = tmax;
            cfg.res = res;
            cfg.h = h;
            cfg.profile = profile;
            cfg.energy_r_nodes = r_nodes;
            cfg.sup_norm_bound = op_norm_bound;
            return cmd_verify(spec_path, which, cfg, report_path, mode);
        }
        if (refine->parsed()) return cmd_refine(spec_path, identity, t, base_nodes, levels);
        if (msj->parsed()) return cmd_modelspace_j(spec_path, t, z_text, w_text, res, ms_out);
        if (mse->parsed()) return cmd_modelspace_energy(spec_path, t, s, z_text, w_text, r_nodes, res, mode);
        if (msd->parsed()) return cmd_modelspace_decay(spec_path, z_text, t0, t1, steps, res, out, mode);
    } catch (const K5Violation& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NearSingular& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const LinearSolveFailure& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
