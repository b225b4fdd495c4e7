#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chl {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    int max_depth = 40;
};

// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
// Throws QuadratureError when the local error estimate cannot be driven
// below abs_tol within max_depth bisections; the error carries the achieved
// estimate.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});

// Same, but with forced breakpoints inside [a, b] (kinks, singular
// abscissae). Breakpoints outside (a, b) are ignored.
double integrate_with_breakpoints(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breakpoints,
                                  const QuadratureOptions& opt = {});

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& msg, double achieved)
        : std::runtime_error(msg), achieved_estimate(achieved) {}
    double achieved_estimate;
};

}  // namespace chl
