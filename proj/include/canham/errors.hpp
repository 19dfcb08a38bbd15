#pragma once

#include <stdexcept>
#include <string>

namespace canham {

// x lies in the kink set Λ; the caller has to split panels there instead
// of differentiating across the jump.
struct KinkPoint : std::runtime_error {
    double x;
    explicit KinkPoint(double x_)
        : std::runtime_error("kernel derivative requested at kink point x = " + std::to_string(x_)), x(x_) {}
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInterval : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |det(1 - K[t])| below the underflow threshold: indistinguishable from a
// unit eigenvalue at desk precision.
struct NearSingular : std::runtime_error {
    double value;
    explicit NearSingular(double v)
        : std::runtime_error("det(1 - K[t]) = " + std::to_string(v) + " is numerically singular"), value(v) {}
};

struct K5Violation : std::runtime_error {
    double t;
    K5Violation(double t_, const std::string& what_)
        : std::runtime_error("(K5) certificate failed at t = " + std::to_string(t_) + ": " + what_), t(t_) {}
};

struct LinearSolveFailure : std::runtime_error {
    double condition;
    explicit LinearSolveFailure(double cond)
        : std::runtime_error("linear system condition estimate " + std::to_string(cond) + " exceeds 1e12"),
          condition(cond) {}
};

} // namespace canham
