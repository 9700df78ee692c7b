#pragma once

#include <algorithm>
#include <cmath>

#include "graphfuse/errors.hpp"
#include "graphfuse/matrix.hpp"

namespace graphfuse {

/// Central-difference validation of an analytic gradient.
///
/// For every coordinate of theta, evaluates f at theta +/- step and compares
/// the central difference against the supplied analytic gradient. Returns the
/// maximum over coordinates of
///   |cd - analytic| / max(1e-12, |cd| + |analytic|).
/// f must be a pure scalar function of theta; theta is restored bit-exactly
/// after every probe.
template <typename F>
double grad_check(F&& f, Matrix& theta, const Matrix& analytic_grad, double step) {
    if (step <= 0.0) {
        throw ParamError("grad_check: step must be > 0");
    }
    require_same_shape(theta, analytic_grad, "grad_check");
    double max_rel = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double saved = theta.values()[i];
        theta.values()[i] = saved + step;
        const double f_plus = f(static_cast<const Matrix&>(theta));
        theta.values()[i] = saved - step;
        const double f_minus = f(static_cast<const Matrix&>(theta));
        theta.values()[i] = saved;
        if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
            throw NumericError("grad_check: non-finite objective value at coordinate " +
                               std::to_string(i));
        }
        const double cd = (f_plus - f_minus) / (2.0 * step);
        const double g = analytic_grad.values()[i];
        const double rel = std::abs(cd - g) / std::max(1e-12, std::abs(cd) + std::abs(g));
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

}  // namespace graphfuse
