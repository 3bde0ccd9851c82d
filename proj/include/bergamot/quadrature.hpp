#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "bergamot/errors.hpp"
#include "bergamot/profile.hpp"

namespace bergamot {

struct IntegralResult {
    double value = 0.0;
    double abs_error = 0.0;
    int subdivisions = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
    double value;
    double abs_error;
};

template <typename F>
PanelEstimate gk15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    const double fc = f(center);
    double result_gauss = kGaussWeights[3] * fc;
    double result_kronrod = kKronrodWeights[7] * fc;
    double resabs = kKronrodWeights[7] * std::abs(fc);
    fv[14] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kGK15Nodes[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        const double sum = f1 + f2;
        result_kronrod += kKronrodWeights[j] * sum;
        resabs += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) result_gauss += kGaussWeights[j / 2] * sum;
    }
    const double mean = 0.5 * result_kronrod;
    double resasc = kKronrodWeights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kKronrodWeights[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));

    PanelEstimate est;
    est.value = result_kronrod * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    est.abs_error = std::abs((result_kronrod - result_gauss) * half);
    if (resasc != 0.0 && est.abs_error != 0.0)
        est.abs_error = resasc * std::min(1.0, std::pow(200.0 * est.abs_error / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        est.abs_error = std::max(eps * 50.0 * resabs, est.abs_error);
    return est;
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

} // namespace detail

/// Globally adaptive integration of f on [a,b]: repeatedly bisects the
/// panel with the largest estimated error until the total error estimate
/// drops below max(epsabs, epsrel*|integral|).
template <typename F>
IntegralResult integrate_adaptive(const F& f, double a, double b, double epsabs,
                                  double epsrel, int max_subdivisions = 4000) {
    if (!(a < b)) throw RangeError("integrate_adaptive: requires a < b");
    std::priority_queue<detail::Panel> panels;
    detail::PanelEstimate first = detail::gk15(f, a, b);
    panels.push({a, b, first.value, first.abs_error});
    double total = first.value;
    double total_err = first.abs_error;
    int splits = 0;
    while (total_err > std::max(epsabs, epsrel * std::abs(total))) {
        if (splits >= max_subdivisions)
            throw ConvergenceError("integrate_adaptive: subdivision budget exhausted");
        detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw ConvergenceError("integrate_adaptive: interval collapsed below machine resolution");
        detail::PanelEstimate left = detail::gk15(f, worst.a, mid);
        detail::PanelEstimate right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.abs_error + right.abs_error - worst.error;
        panels.push({worst.a, mid, left.value, left.abs_error});
        panels.push({mid, worst.b, right.value, right.abs_error});
        ++splits;
    }
    return {total, total_err, splits};
}

/// Absolute-tolerance form of integrate_adaptive.
template <typename F>
IntegralResult integrate_adaptive(const F& f, double a, double b, double tol) {
    return integrate_adaptive(f, a, b, tol, 0.0);
}

/// The radial comparison integral int_0^1 r^(k-1) / (f(r) + t)^k dr,
/// evaluated to 1e-9 relative accuracy.
inline IntegralResult prop32_integral(const ProfileFunction& profile, int k, double t,
                                      double m_cap = 1.0) {
    if (k < 1) throw RangeError("prop32_integral: k must be >= 1");
    if (!(t > 0.0)) throw RangeError("prop32_integral: t must be positive");
    if (t > m_cap) throw RangeError("prop32_integral: t above the configured cap M");
    auto integrand = [&](double r) {
        const double base = profile.eval(r) + t;
        return std::pow(r, k - 1) / std::pow(base, k);
    };
    return integrate_adaptive(integrand, 0.0, 1.0, 1e-300, 1e-9);
}

/// prop32_integral normalized by its predicted growth t^k / [f^-1(t)]^k.
/// Boundedness of this ratio over a t-grid is the checkable statement.
inline double prop32_ratio(const ProfileFunction& profile, int k, double t, double m_cap = 1.0) {
    const IntegralResult integral = prop32_integral(profile, k, t, m_cap);
    const double finv = profile.inverse(t);
    if (!(finv > 0.0)) throw RangeError("prop32_ratio: f^-1(t) vanished");
    return integral.value * std::pow(t / finv, k);
}

/// Weighted radial integral int_0^1 r^(2nj+1) / (f(r) + t)^(2(nj+1)) dr
/// appearing in the tangential metric candidate norm.
inline IntegralResult tangential_weighted_integral(const ProfileFunction& profile, int n_j,
                                                   double t) {
    if (n_j < 1) throw RangeError("tangential_weighted_integral: block dim must be >= 1");
    if (!(t > 0.0)) throw RangeError("tangential_weighted_integral: t must be positive");
    auto integrand = [&](double r) {
        const double base = profile.eval(r) + t;
        return std::pow(r, 2 * n_j + 1) / std::pow(base, 2 * (n_j + 1));
    };
    return integrate_adaptive(integrand, 0.0, 1.0, 1e-300, 1e-9);
}

} // namespace bergamot
