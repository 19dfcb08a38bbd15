#include <doctest.h>

#include <cmath>

#include "canham/canonical.hpp"
#include "canham/errors.hpp"

using namespace canham;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_SUITE("canonical") {

TEST_CASE("ratios at t = 0 from the closed-form symbol") {
    KernelSpec e = make_exponential(0.5, 1.0);
    RatioPoint p = ab_ratio(e, 0.0, {0.0, 2.0});
    CHECK(std::abs(p.a - Complex(7.0 / 12.0, 0.0)) < 1e-9);
    CHECK(std::abs(p.b - Complex(0.0, 5.0 / 12.0)) < 1e-9);
}

TEST_CASE("theta consistency") {
    ThetaConsistency exp_tc = theta_consistency(make_exponential(0.5, 1.0), {0.0, 2.0});
    CHECK(exp_tc.residual < 1e-8);
    CHECK(exp_tc.unit_identity < 1e-8);
    ThetaConsistency bump_tc = theta_consistency(make_bump_with_mass(0.9, 1.0), {0.0, 3.0});
    CHECK(bump_tc.residual < 1e-8);
    CHECK(bump_tc.unit_identity < 1e-8);
}

TEST_CASE("domain margin is enforced") {
    KernelSpec e = make_exponential(0.5, 1.0);
    CHECK_THROWS_AS(ab_ratio(e, 0.5, {0.0, 0.05}), DomainError);
    CHECK_THROWS_AS(theta_consistency(e, {0.0, 0.01}), DomainError);
}

TEST_CASE("negative-t trigonometric evolution") {
    KernelSpec e = make_exponential(0.5, 1.0);
    Complex z(0.0, 2.0);
    RatioPoint p0 = ab_ratio(e, 0.0, z);
    for (double t : {-0.25, -0.5, -1.0}) {
        RatioPoint p = ab_ratio(e, t, z);
        Complex a_ref = p0.a * std::cos(t * z) + p0.b * std::sin(t * z);
        Complex b_ref = -p0.a * std::sin(t * z) + p0.b * std::cos(t * z);
        CHECK(std::abs(p.a - a_ref) < 1e-10);
        CHECK(std::abs(p.b - b_ref) < 1e-10);
    }
}

TEST_CASE("route agreement") {
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    Resolution res{64, 4};
    for (double t : {0.0, 1.0, 2.0})
        for (Complex z : {Complex(0, 2), Complex(1, 2), Complex(-1, 3)}) {
            RatioPoint r1 = ab_ratio(bump, t, z, AbRoute::PsiPhiTail, res);
            RatioPoint r2 = ab_ratio(bump, t, z, AbRoute::PhiPlusMinusTail, res);
            CHECK(std::abs(r1.a - r2.a) < 1e-7);
            CHECK(std::abs(r1.b - r2.b) < 1e-7);
        }
}

TEST_CASE("frak normalization") {
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    for (AbRoute route : {AbRoute::PsiPhiTail, AbRoute::PhiPlusMinusTail}) {
        RatioPoint p = ab_ratio(bump, 1.0, {1.0, 2.0}, route, {48, 4});
        CHECK(std::abs(p.a_frak * p.m - p.a) <= 1e-15 * std::abs(p.a));
        CHECK(std::abs(p.b_frak - p.m * p.b) <= 1e-15 * std::abs(p.b_frak));
    }
}

TEST_CASE("tail transform truncation robustness") {
    KernelSpec e = make_exponential(0.5, 1.0);
    FieldSolution psi = solve_field(e, 1.0, FieldKind::Psi, {48, 4});
    Complex coarse = tail_transform(psi, {1.0, 2.0}, 1e-9);
    Complex fine = tail_transform(psi, {1.0, 2.0}, 1e-14);
    CHECK(std::abs(coarse - fine) < 1e-8);
}

TEST_CASE("ode residual second order in h") {
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    Resolution res{64, 8};
    OdeResidual r = ode_residual(bump, 1.0, {0.0, 2.0}, 1e-2, res);
    CHECK(r.res_a < 1e-3);
    CHECK(r.res_b < 1e-3);
    CHECK(r.observed_order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("ode residual in the closed-form regime is the trig differencing error") {
    KernelSpec e = make_exponential(0.5, 1.0);
    Complex z(0.0, 0.4);
    double h = 1e-3;
    OdeResidual r = ode_residual(e, -0.5, z, h, {48, 4});
    CHECK(r.res_a < 1e-8);
    CHECK(r.res_b < 1e-8);
    // prediction: |da - z b| = |a_t| |1 - sinc(zh)|, sinc expansion (zh)^2/6
    RatioPoint p0 = ab_ratio(e, 0.0, z, AbRoute::PsiPhiTail, {48, 4});
    RatioPoint pt = ab_ratio(e, -0.5, z, AbRoute::PsiPhiTail, {48, 4});
    double scale = std::abs(pt.a) + std::abs(pt.b);
    double predicted = std::abs(z * pt.b) * std::abs(z * h) * std::abs(z * h) / 6.0 / scale;
    CHECK(r.res_a / predicted > 0.2);
    CHECK(r.res_a / predicted < 5.0);
    (void)p0;
}

TEST_CASE("small z keeps the unnormalized residual linear in z") {
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    Resolution res{48, 4};
    Complex z(0.0, 0.12); // just above the margin
    double gamma = hamiltonian_at(bump, 1.0, res).gamma;
    RatioPoint c = ab_ratio(bump, 1.0, z, AbRoute::PsiPhiTail, res);
    RatioPoint pp = ab_ratio(bump, 1.0 + 1e-2, z, AbRoute::PsiPhiTail, res);
    RatioPoint pm = ab_ratio(bump, 1.0 - 1e-2, z, AbRoute::PsiPhiTail, res);
    Complex da = (pp.a - pm.a) / 2e-2;
    CHECK(std::abs(da - z * gamma * c.b) < std::abs(z) * 1e-4);
}

TEST_CASE("pde residuals at positive t") {
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    Resolution res{64, 8};
    auto r1 = pde_residual(bump, 1.0, 1e-2, res);
    auto r2 = pde_residual(bump, 1.0, 5e-3, res);
    for (const char* key :
         {"system_phi", "system_psi", "wave_phi", "wave_psi", "schrodinger_a", "schrodinger_b"}) {
        CAPTURE(key);
        CHECK(r1.at(key) < 1e-3);
        double ratio = r1.at(key) / r2.at(key);
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.5);
    }
    CHECK(r1.at("damping_consistency") < 1e-3);
}

TEST_CASE("pde residuals vanish in the closed-form regime") {
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    auto r = pde_residual(bump, -0.5, 1e-2, {48, 4});
    for (const auto& [key, value] : r) {
        CAPTURE(key);
        CHECK(value < 1e-10);
    }
}

} // TEST_SUITE
