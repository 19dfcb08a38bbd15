#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "canham/fredholm.hpp"

using namespace canham;

TEST_SUITE("parallel") {

TEST_CASE("serial and parallel policies agree bitwise") {
    KernelSpec bump = make_bump_with_mass(0.9, 1.0);
    std::vector<double> ts;
    for (int i = 0; i <= 16; ++i) ts.push_back(0.1 + 1.4 * i / 16.0);
    auto serial = hamiltonian_curve(bump, ts, {32, 2}, true, Exec::Serial);
    auto parallel = hamiltonian_curve(bump, ts, {32, 2}, true, Exec::Parallel);
    REQUIRE(serial.size() == parallel.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(std::memcmp(&serial[i].m, &parallel[i].m, sizeof(double)) == 0);
        CHECK(std::memcmp(&serial[i].det_plus, &parallel[i].det_plus, sizeof(double)) == 0);
        CHECK(std::memcmp(&serial[i].det_minus, &parallel[i].det_minus, sizeof(double)) == 0);
        CHECK(std::memcmp(&serial[i].gap_to_one, &parallel[i].gap_to_one, sizeof(double)) == 0);
    }

    K5Certificate cs = k5_certificate(bump, ts, {32, 2}, Exec::Serial);
    K5Certificate cp = k5_certificate(bump, ts, {32, 2}, Exec::Parallel);
    CHECK(std::memcmp(&cs.min_gap, &cp.min_gap, sizeof(double)) == 0);
}

TEST_CASE("first failing index wins") {
    std::vector<int> seen(64, 0);
    try {
        for_each_index(64, Exec::Parallel, [&](int i) {
            seen[static_cast<size_t>(i)] = 1;
            if (i >= 17) throw std::runtime_error("fail at " + std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "fail at 17");
    }
    CHECK(seen[5] == 1);
}

TEST_CASE("thread cap from the environment") {
    setenv("CANHAM_THREADS", "1", 1);
    CHECK(max_threads() == 1);
    unsetenv("CANHAM_THREADS");
    CHECK(max_threads() >= 1);
}

TEST_CASE("empty range is a no-op") {
    int calls = 0;
    for_each_index(0, Exec::Parallel, [&](int) { ++calls; });
    CHECK(calls == 0);
}

} // TEST_SUITE
