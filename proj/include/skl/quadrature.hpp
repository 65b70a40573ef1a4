#pragma once

#include <functional>

namespace skl {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // accumulated Richardson estimate
    long evaluations = 0;
    bool converged = true;  // false when the interval budget was exhausted
};

/// Adaptive Simpson quadrature with Richardson error control.
/// Splits until the local error estimate meets the (subdivided) absolute
/// tolerance or the interval budget / depth cap is reached.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double abs_tol = 1e-10, int max_depth = 320,
                            long max_intervals = 1L << 20);

}  // namespace skl
