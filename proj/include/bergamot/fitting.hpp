#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "bergamot/errors.hpp"

namespace bergamot {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_abs_residual = 0.0;
};

// Ordinary least squares y = slope*x + intercept; residual is the largest
// absolute deviation of any point from the fitted line.
inline LineFit least_squares_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw ValidationError("least_squares_line: need at least 2 matching points");
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0)
        throw ValidationError("least_squares_line: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::abs(ys[i] - (fit.slope * xs[i] + fit.intercept));
        fit.max_abs_residual = std::max(fit.max_abs_residual, r);
    }
    return fit;
}

} // namespace bergamot
