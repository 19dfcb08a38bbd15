#include <doctest.h>

#include <cmath>

#include "canham/errors.hpp"
#include "canham/kernel.hpp"

using namespace canham;

namespace {

// deterministic LCG so the random-point checks are reproducible
struct Lcg {
    uint64_t state = 0x2545F4914F6CDD1DULL;
    double uniform(double lo, double hi) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return lo + (hi - lo) * ((state >> 11) * 0x1.0p-53);
    }
};

} // namespace

TEST_SUITE("kernel") {

TEST_CASE("vanishing on the negative axis") {
    Lcg rng;
    for (const KernelSpec& spec :
         {make_exponential(0.5, 1.0), make_bump(2.0, 1.0),
          make_table({0.0, 0.5, 1.0, 1.5}, {0.0, 1.0, 0.5, 0.0})}) {
        for (int i = 0; i < 50; ++i) CHECK(kernel_eval(spec, rng.uniform(-10.0, -1e-9)) == 0.0);
    }
    CHECK(kernel_eval(make_exponential(0.5, 1.0), -1.0) == 0.0);
}

TEST_CASE("family values") {
    CHECK(kernel_eval(make_exponential(0.5, 1.0), 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    KernelSpec bump = make_bump(1.7, 1.0);
    CHECK(kernel_eval(bump, 0.5) == doctest::Approx(1.7).epsilon(1e-14)); // exponent 4 - 1/0.25 = 0
    CHECK(kernel_eval(bump, 1.0) == 0.0);
    CHECK(kernel_eval(bump, 1e-12) == 0.0); // flat entry into the support
}

TEST_CASE("derivative closed form and kink") {
    KernelSpec e = make_exponential(0.5, 1.0);
    CHECK(kernel_deriv(e, 1.0) == doctest::Approx(-0.5 * std::exp(-1.0)).epsilon(1e-13));
    CHECK(kernel_deriv(make_bump(1.0, 1.0), -0.5) == 0.0);
    CHECK_THROWS_AS(kernel_deriv(e, 0.0), KinkPoint);
}

TEST_CASE("derivative finite difference consistency") {
    // second-order agreement away from kinks, h in {1e-3, 5e-4}
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    double x = 0.2; // steep flank
    auto fd_err = [&](double h) {
        double fd = (kernel_eval(bump, x + h) - kernel_eval(bump, x - h)) / (2.0 * h);
        return std::abs(fd - kernel_deriv(bump, x));
    };
    double e1 = fd_err(1e-3), e2 = fd_err(5e-4);
    CHECK(e1 < 1e-3);
    CHECK(e2 < e1);                                       // decreasing in h
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25)); // O(h^2)

    KernelSpec e = make_exponential(0.5, 1.0);
    for (double xx : {0.5, 1.0, 2.0}) {
        double fd = (kernel_eval(e, xx + 1e-3) - kernel_eval(e, xx - 1e-3)) / 2e-3;
        CHECK(std::abs(fd - kernel_deriv(e, xx)) < 1e-7);
    }
}

TEST_CASE("fourier against the exponential closed form") {
    KernelSpec e = make_exponential(0.5, 1.0);
    Lcg rng;
    for (int i = 0; i < 20; ++i) {
        Complex z(rng.uniform(-5.0, 5.0), rng.uniform(0.5, 5.0));
        Complex exact = 0.5 / (1.0 - Complex(0.0, 1.0) * z); // alpha/(beta - iz)
        Complex got = kernel_fourier(e, z);
        CHECK(std::abs(got - exact) / std::abs(exact) < 1e-10);
    }
    // magnitude decay along a horizontal line
    double u = 50.0;
    double expect = 0.5 / std::sqrt(4.0 + u * u);
    CHECK(std::abs(kernel_fourier(e, {u, 1.0})) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("fourier self-convergence for the bump") {
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    Complex a = kernel_fourier(bump, {0.0, 3.0}, 1e-12);
    Complex b = kernel_fourier(bump, {0.0, 3.0}, 1e-15);
    CHECK(std::abs(a - b) < 1e-12);
    // dominated decay on the imaginary axis
    double m1 = std::abs(kernel_fourier(bump, {0.0, 2.0}));
    double m2 = std::abs(kernel_fourier(bump, {0.0, 6.0}));
    double m3 = std::abs(kernel_fourier(bump, {0.0, 18.0}));
    CHECK(m1 < 0.9);
    CHECK(m2 < m1);
    CHECK(m3 < m2);
}

TEST_CASE("fourier domain guard") {
    CHECK_THROWS_AS(kernel_fourier(make_exponential(0.5, 1.0), {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(kernel_fourier(make_exponential(0.5, 1.0), {1.0, -1.0}), DomainError);
}

TEST_CASE("cumulative and mass") {
    KernelSpec e = make_exponential(0.5, 1.0);
    CHECK(kernel_cumulative(e, 1.0) == doctest::Approx(0.5 * (1.0 - std::exp(-1.0))).epsilon(1e-14));
    CHECK(kernel_cumulative(e, -2.0) == 0.0);
    CHECK(kernel_mass(e) == doctest::Approx(0.5).epsilon(1e-14));
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    CHECK(kernel_mass(bump) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(kernel_cumulative(bump, 2.0) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("validation report") {
    KernelValidationReport ok = kernel_validate(make_exponential(0.5, 1.0));
    CHECK(ok.support_ok);
    CHECK(ok.k5_small_symbol);
    CHECK(ok.fourier_sup_bound < 0.5);
    CHECK(ok.estimated_growth_c == 0.0);

    KernelValidationReport big = kernel_validate(make_exponential(3.0, 1.0));
    CHECK(big.support_ok);
    CHECK_FALSE(big.k5_small_symbol);
    CHECK(big.fourier_sup_bound > 1.0);

    KernelSpec bad = make_table({-0.5, 0.0, 0.5, 1.0}, {0.3, 0.0, 1.0, 0.0});
    CHECK_FALSE(kernel_validate(bad).support_ok);
}

TEST_CASE("table interpolation") {
    // sample the exponential densely and interpolate
    std::vector<double> xs, ks;
    KernelSpec e = make_exponential(0.5, 1.0);
    for (int i = 0; i <= 300; ++i) {
        xs.push_back(6.0 * i / 300.0);
        ks.push_back(kernel_eval(e, xs.back()));
    }
    KernelSpec table = make_table(xs, ks, 3);
    Lcg rng;
    for (int i = 0; i < 40; ++i) {
        double x = rng.uniform(0.05, 5.9);
        CHECK(kernel_eval(table, x) == doctest::Approx(kernel_eval(e, x)).epsilon(1e-7));
        CHECK(kernel_deriv(table, x) == doctest::Approx(kernel_deriv(e, x)).epsilon(1e-4));
    }
    CHECK(kernel_eval(table, -1.0) == 0.0);
    CHECK(kernel_eval(table, 7.0) == 0.0);
}

TEST_CASE("json round trip") {
    for (const KernelSpec& spec : {make_exponential(0.5, 1.0), make_bump_with_mass(0.9, 1.0),
                                   make_table({0.0, 1.0, 2.0}, {0.0, 0.7, 0.0})}) {
        KernelSpec back = kernel_spec_from_json(kernel_spec_to_json(spec));
        CHECK(back.family == spec.family);
        for (double x : {-1.0, 0.1, 0.4, 0.9, 1.7}) CHECK(kernel_eval(back, x) == kernel_eval(spec, x));
        CHECK(back.kinks == spec.kinks);
        CHECK(back.growth_c == spec.growth_c);
    }
    CHECK_THROWS(load_kernel_spec("/nonexistent/kernel.json"));
    CHECK_THROWS(kernel_spec_from_json("{\"family\":\"warp\"}"));
}

} // TEST_SUITE
