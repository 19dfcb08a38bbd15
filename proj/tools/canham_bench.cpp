// Benchmark of the OpenMP execution policy against the serial reference
// path, checking bit-identical results along the way.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "canham/modelspace.hpp"

using namespace canham;

namespace {

double time_ms(const std::function<void()>& fn) {
    auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-24s serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   %s\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, identical ? "bit-identical" : "MISMATCH");
}

} // namespace

int main() {
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    Resolution res{64, 2};
    std::printf("threads: %d\n", max_threads());

    std::vector<double> ts;
    for (int i = 0; i <= 48; ++i) ts.push_back(0.05 + 1.95 * i / 48.0);

    std::vector<HamiltonianSample> curve_s, curve_p;
    double t_s = time_ms([&] { curve_s = hamiltonian_curve(bump, ts, res, true, Exec::Serial); });
    double t_p = time_ms([&] { curve_p = hamiltonian_curve(bump, ts, res, true, Exec::Parallel); });
    bool same = curve_s.size() == curve_p.size();
    for (size_t i = 0; same && i < curve_s.size(); ++i)
        same = std::memcmp(&curve_s[i].m, &curve_p[i].m, sizeof(double)) == 0 &&
               std::memcmp(&curve_s[i].det_plus, &curve_p[i].det_plus, sizeof(double)) == 0;
    report("hamiltonian_curve", t_s, t_p, same);

    K5Certificate cert_s, cert_p;
    double c_s = time_ms([&] { cert_s = k5_certificate(bump, ts, res, Exec::Serial); });
    double c_p = time_ms([&] { cert_p = k5_certificate(bump, ts, res, Exec::Parallel); });
    report("k5_certificate", c_s, c_p, std::memcmp(&cert_s.min_gap, &cert_p.min_gap, sizeof(double)) == 0);

    Complex z(0.0, 2.0), w(1.0, 2.0);
    double e_s = 0.0, e_p = 0.0;
    double es_ms = time_ms([&] { e_s = energy_identity(bump, 0.5, 1.5, z, w, 48, res, Exec::Serial); });
    double ep_ms = time_ms([&] { e_p = energy_identity(bump, 0.5, 1.5, z, w, 48, res, Exec::Parallel); });
    report("energy_identity", es_ms, ep_ms, std::memcmp(&e_s, &e_p, sizeof(double)) == 0);
    return 0;
}
