#pragma once

#include <cmath>
#include <utility>

namespace stabrad {

struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Golden-section search for a local maximum of `f` on [a, b].
///
/// Stops when the bracket is narrower than tol * max(1, |x|). The returned point
/// is the best one evaluated, so `value` is always an attained function value.
template <typename F>
GoldenResult golden_section_maximize(F&& f, double a, double b, double tol, int max_iterations = 500) {
    constexpr double inv_phi = 0.6180339887498949;
    if (a > b) std::swap(a, b);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);

    GoldenResult best{c, fc, 0, false};
    if (fd > best.value) best = {d, fd, 0, false};

    for (int it = 0; it < max_iterations; ++it) {
        best.iterations = it;
        const double mid = 0.5 * (a + b);
        if (b - a <= tol * std::max(1.0, std::abs(mid))) {
            best.converged = true;
            return best;
        }
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if (fc > best.value) best = {c, fc, it, false};
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if (fd > best.value) best = {d, fd, it, false};
        }
    }
    return best;
}

}  // namespace stabrad
