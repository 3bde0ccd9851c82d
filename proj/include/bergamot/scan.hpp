#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bergamot/bounds.hpp"
#include "bergamot/domain.hpp"
#include "bergamot/errors.hpp"
#include "bergamot/fitting.hpp"

namespace bergamot {

/// Per-point bound record. Quantities that a scan does not compute stay
/// NaN and are emitted as such.
struct BoundReport {
    double t = 0.0;
    Point point;
    double kappa_lower = std::numeric_limits<double>::quiet_NaN();
    double kappa_upper = std::numeric_limits<double>::quiet_NaN();
    double env_kappa = std::numeric_limits<double>::quiet_NaN();
    double ratio_kl = std::numeric_limits<double>::quiet_NaN();
    double ratio_ku = std::numeric_limits<double>::quiet_NaN();
    double metric_lower = std::numeric_limits<double>::quiet_NaN();
    double metric_upper = std::numeric_limits<double>::quiet_NaN();
    double env_metric = std::numeric_limits<double>::quiet_NaN();
    double szego_lower = std::numeric_limits<double>::quiet_NaN();
    double szego_upper_env = std::numeric_limits<double>::quiet_NaN();
    double env_szego = std::numeric_limits<double>::quiet_NaN();
    double i0_upper = std::numeric_limits<double>::quiet_NaN();
    double i1_upper = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
};

inline const std::vector<std::string>& scan_columns() {
    static const std::vector<std::string> cols = {
        "t",           "kappa_lower", "kappa_upper",     "env_kappa", "ratio_kl",
        "ratio_ku",    "metric_lower", "metric_upper",   "env_metric", "szego_lower",
        "szego_upper_env", "env_szego", "status"};
    return cols;
}

inline double report_column(const BoundReport& row, const std::string& name) {
    if (name == "t") return row.t;
    if (name == "kappa_lower") return row.kappa_lower;
    if (name == "kappa_upper") return row.kappa_upper;
    if (name == "env_kappa") return row.env_kappa;
    if (name == "ratio_kl") return row.ratio_kl;
    if (name == "ratio_ku") return row.ratio_ku;
    if (name == "metric_lower") return row.metric_lower;
    if (name == "metric_upper") return row.metric_upper;
    if (name == "env_metric") return row.env_metric;
    if (name == "szego_lower") return row.szego_lower;
    if (name == "szego_upper_env") return row.szego_upper_env;
    if (name == "env_szego") return row.env_szego;
    if (name == "i0_upper") return row.i0_upper;
    if (name == "i1_upper") return row.i1_upper;
    throw ValidationError("unknown scan column: " + name);
}

struct ScanMetadata {
    std::string config_hash;
    std::vector<double> alpha;
    double beta = 0.0;
    double t0 = 0.0;
    std::uint64_t seed = 0;
    double quad_tol = 0.0;
};

struct ScanTable {
    std::vector<BoundReport> rows;
    ScanMetadata meta;
};

struct ScanOptions {
    std::optional<Direction> xi;
    bool convex = false;
    SurfaceOptions surface;
    double quad_tol = 1e-9;
    BlockQuad block_mode = BlockQuad::Auto;
};

inline void check_scan_grid(const std::vector<double>& t_grid, double t0) {
    if (t_grid.empty()) throw ValidationError("scan: empty t grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw ValidationError("scan: grid values must be positive");
        if (t_grid[i] > t0 * (1.0 + 1e-12))
            throw ValidationError("scan: grid value above t0");
        if (i > 0 && !(t_grid[i] < t_grid[i - 1]))
            throw ValidationError("scan: grid must be strictly decreasing");
    }
}

/// Evaluates all computable bounds and envelopes along the approach path.
/// A failed row is recorded with its error message in `status`, never
/// dropped.
inline ScanTable ratio_scan(const DomainDescriptor& domain, const ApproachSpec& approach,
                            const std::vector<double>& t_grid, const ScanOptions& options = {}) {
    check_scan_grid(t_grid, approach.t0);
    const int n = domain.total_dim();
    ScanTable table;
    table.meta.alpha = approach.alpha;
    table.meta.beta = approach.beta;
    table.meta.t0 = approach.t0;
    table.meta.quad_tol = options.quad_tol;
    for (double t : t_grid) {
        BoundReport row;
        row.t = t;
        try {
            row.point = approach_point(domain, approach, t);
            const double phi_sq =
                phi_norm_sq_upper(domain, row.point, options.quad_tol, options.block_mode).value;
            row.kappa_lower = std::pow(2.0, -2 * n) / phi_sq;
            row.i0_upper = std::pow(2.0, 2 * n) * phi_sq;
            row.kappa_upper = kappa_upper(domain, approach, row.point);
            row.env_kappa = predicted_envelope(domain, t, EnvelopeKind::Kappa);
            row.ratio_kl = row.kappa_lower / row.env_kappa;
            row.ratio_ku = row.kappa_upper / row.env_kappa;
            SurfaceOptions surf = options.surface;
            surf.t0 = approach.t0;
            row.szego_lower = szego_lower(domain, row.point, surf, options.quad_tol,
                                          options.block_mode);
            row.env_szego = predicted_envelope(domain, t, EnvelopeKind::Szego);
            if (options.convex)
                row.szego_upper_env = szego_upper_envelope(domain, approach, row.point, true);
            if (options.xi) {
                const MetricBounds mb = metric_bounds(domain, approach, row.point, *options.xi,
                                                      options.quad_tol, options.block_mode);
                row.metric_lower = mb.lower;
                row.metric_upper = mb.upper;
                row.i1_upper = mb.i1_upper;
                row.env_metric = metric_envelope(domain, t, *options.xi);
            }
        } catch (const Error& e) {
            row.status = std::string("error: ") + e.what();
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

/// Extended-domain scan: lower bounds and extended envelopes only.
inline ScanTable extended_ratio_scan(const ExtendedDomainDescriptor& domain,
                                     const std::vector<double>& t_grid, double t0,
                                     const ScanOptions& options = {}) {
    check_scan_grid(t_grid, t0);
    const int n = domain.total_dim();
    ScanTable table;
    table.meta.t0 = t0;
    table.meta.quad_tol = options.quad_tol;
    for (double t : t_grid) {
        BoundReport row;
        row.t = t;
        try {
            Point z;
            z.block_parts.assign(1, std::vector<std::complex<double>>(n - 1, {0.0, 0.0}));
            z.z_n = {t, 0.0};
            row.point = z;
            const double phi_sq =
                phi_norm_sq_upper(domain, z, options.quad_tol, options.block_mode).value;
            row.kappa_lower = std::pow(2.0, -2 * n) / phi_sq;
            row.i0_upper = std::pow(2.0, 2 * n) * phi_sq;
            row.env_kappa = predicted_envelope(domain, t, ExtendedEnvelopeKind::KappaExtended);
            row.ratio_kl = row.kappa_lower / row.env_kappa;
            SurfaceOptions surf = options.surface;
            surf.t0 = t0;
            row.szego_lower = szego_lower(domain, z, surf, options.quad_tol, options.block_mode);
            row.env_szego = predicted_envelope(domain, t, ExtendedEnvelopeKind::SzegoExtended);
        } catch (const Error& e) {
            row.status = std::string("error: ") + e.what();
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

struct SlopeFit {
    double slope = 0.0;
    double residual = 0.0;
};

/// Least-squares slope of log(column) against log(t) over the rows with
/// status "ok" and a finite positive column value.
inline SlopeFit slope_fit(const ScanTable& table, const std::string& column) {
    std::vector<double> lx, ly;
    for (const auto& row : table.rows) {
        if (row.status != "ok") continue;
        const double v = report_column(row, column);
        if (!std::isfinite(v) || !(v > 0.0)) continue;
        lx.push_back(std::log(row.t));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 8)
        throw ValidationError("slope_fit: fewer than 8 usable rows for column " + column);
    const LineFit fit = least_squares_line(lx, ly);
    return {fit.slope, fit.max_abs_residual};
}

/// Geometric grid from t_max down to t_min inclusive.
inline std::vector<double> geometric_grid(double t_min, double t_max, int points) {
    if (!(t_min > 0.0) || !(t_min < t_max)) throw ValidationError("grid: need 0 < t_min < t_max");
    if (points < 2) throw ValidationError("grid: need at least 2 points");
    std::vector<double> grid(points);
    const double ratio = std::log(t_min / t_max) / (points - 1);
    for (int i = 0; i < points; ++i) grid[i] = t_max * std::exp(ratio * i);
    return grid;
}

} // namespace bergamot
