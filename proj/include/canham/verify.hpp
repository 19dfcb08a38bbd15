#pragma once

#include <json.hpp>

#include "canham/modelspace.hpp"

namespace canham {

using Json = nlohmann::ordered_json;

// Tolerances per identity. "default" is the smooth-kernel profile, "kinked"
// the degraded profile for kernels with a derivative jump.
struct TolProfile {
    std::string name = "default";
    double det_identity = 1e-8;
    double mu_route = 1e-6;
    double closed_forms = 1e-10;
    double relations = 1e-4;
    double ode = 1e-4;
    double theta = 1e-8;
    double spectral_monotone = 1e-8;
    double spectral_frobenius = 1e-10;
    double boundary = 1e-6;
    double jkernel = 1e-7;
    double jkernel_hermitian = 1e-10;
    double energy = 1e-6;
    double pde = 1e-4;
    double order_window = 0.3; // accepted deviation of observed order from 2
    // kinked kernels sit at the discretization floor where h-refinement does
    // not bite; the h-convergence rows only make sense for smooth kernels
    bool fd_orders = true;
};

TolProfile tol_profile(const std::string& name); // "default" | "kinked"

struct RunConfig {
    std::string spec_path;
    double tmax = 2.0;
    std::vector<double> t_checks;  // defaults derived from tmax when empty
    std::vector<Complex> z_checks; // defaults {2i, 1+2i}
    Resolution res{64, 8};
    double h = 1e-2;
    std::string profile = "default";
    int energy_r_nodes = 64;
    double sup_norm_bound = 0.0; // spectral op-norm bound to assert; 0 = skip
};

struct IdentityResult {
    std::string identity;
    std::string params;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime_ms = 0.0;
};

struct VerificationReport {
    std::vector<IdentityResult> results;
    bool all_pass = true;
    bool numerical_breakdown = false;
    std::string breakdown_what;
    Json config_echo;
    std::map<std::string, double> runtimes_ms; // per identity; volatile, run_meta only
};

// Names accepted by run_verification / `canham verify <name>`.
const std::vector<std::string>& identity_names();

// Runs one identity ("determinant", "mu-route", ...) or all of them.
VerificationReport run_verification(const KernelSpec& spec, const RunConfig& cfg,
                                    const std::string& which = "all", Exec mode = Exec::Parallel);

// Deterministic JSON form. Volatile data (timestamp, runtimes) lives in the
// single "run_meta" field; strip_run_meta produces the byte-comparable form.
Json report_to_json(const VerificationReport& report, bool strip_run_meta = false);

// 17-significant-digit scientific formatting used by all CSV emitters.
std::string format_sci(double v);
std::string format_sci(Complex v); // "re,im" pair

} // namespace canham
