#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bergamot/errors.hpp"
#include "bergamot/fitting.hpp"

namespace bergamot {

enum class ProfileKind { Power, ExpFlat, Custom };

/// One-variable boundary profile f : [0, domain_cap] -> [0, inf), strictly
/// increasing with f(0) = 0. Power evaluates c*x^m, ExpFlat evaluates
/// exp(-1/x^p) (0 at x = 0). Custom wraps an arbitrary monotone callable.
class ProfileFunction {
public:
    static ProfileFunction power(double m, double c = 1.0, double domain_cap = 1.0) {
        if (!(m > 1.0)) throw ValidationError("Power profile requires exponent m > 1");
        if (!(c > 0.0)) throw ValidationError("Power profile requires scale c > 0");
        ProfileFunction p;
        p.kind_ = ProfileKind::Power;
        p.m_ = m;
        p.c_ = c;
        p.domain_cap_ = check_cap(domain_cap);
        return p;
    }

    static ProfileFunction exp_flat(double p, double domain_cap = 1.0) {
        if (!(p > 0.0)) throw ValidationError("ExpFlat profile requires exponent p > 0");
        ProfileFunction f;
        f.kind_ = ProfileKind::ExpFlat;
        f.p_ = p;
        f.domain_cap_ = check_cap(domain_cap);
        return f;
    }

    static ProfileFunction custom(std::function<double(double)> fn, double domain_cap = 1.0) {
        if (!fn) throw ValidationError("Custom profile requires a callable");
        ProfileFunction f;
        f.kind_ = ProfileKind::Custom;
        f.fn_ = std::move(fn);
        f.domain_cap_ = check_cap(domain_cap);
        return f;
    }

    ProfileKind kind() const { return kind_; }
    double domain_cap() const { return domain_cap_; }
    double power_exponent() const { return m_; }
    double power_scale() const { return c_; }
    double exp_flat_exponent() const { return p_; }

    double eval(double x) const {
        if (!(x >= 0.0) || x > domain_cap_ * (1.0 + 1e-12))
            throw RangeError("profile eval: x outside [0, domain_cap]");
        if (x == 0.0) return 0.0;
        switch (kind_) {
        case ProfileKind::Power:
            return c_ * std::pow(x, m_);
        case ProfileKind::ExpFlat:
            // exp underflows to 0 for tiny x, which is the right limit
            return std::exp(-std::pow(x, -p_));
        case ProfileKind::Custom:
            return fn_(x);
        }
        return 0.0;
    }

    /// Solves f(x) = t on [0, domain_cap]. Closed form for Power/ExpFlat,
    /// bracketed bisection otherwise (rtol 1e-12).
    double inverse(double t) const {
        if (!(t >= 0.0)) throw RangeError("profile inverse: t must be nonnegative");
        const double top = eval(domain_cap_);
        if (t > top * (1.0 + 1e-12))
            throw RangeError("profile inverse: t above f(domain_cap)");
        if (t == 0.0) return 0.0;
        switch (kind_) {
        case ProfileKind::Power:
            return std::pow(t / c_, 1.0 / m_);
        case ProfileKind::ExpFlat:
            // f(x) = exp(-x^-p) = t  =>  x = (log(1/t))^(-1/p)
            return std::pow(std::log(1.0 / t), -1.0 / p_);
        case ProfileKind::Custom:
            return bisect_inverse(t);
        }
        return 0.0;
    }

    /// Lambda transform: -1/log(f(x)) for x > 0, 0 at x = 0. Defined while
    /// f(x) < 1. ExpFlat evaluates to x^p directly, avoiding log of an
    /// underflowed value.
    double lambda(double x) const {
        if (!(x >= 0.0)) throw RangeError("lambda: x must be nonnegative");
        if (x == 0.0) return 0.0;
        if (kind_ == ProfileKind::ExpFlat) {
            if (x > domain_cap_ * (1.0 + 1e-12))
                throw RangeError("lambda: x outside [0, domain_cap]");
            return std::pow(x, p_);
        }
        const double fx = eval(x);
        if (fx >= 1.0) throw RangeError("lambda: f(x) >= 1, transform undefined");
        if (fx == 0.0) return 0.0;
        return -1.0 / std::log(fx);
    }

    /// Solves lambda(x) = t. Uses the identity f^-1(s) = lambda^-1(-1/log s).
    double lambda_inverse(double t) const {
        if (!(t >= 0.0)) throw RangeError("lambda_inverse: t must be nonnegative");
        if (t == 0.0) return 0.0;
        switch (kind_) {
        case ProfileKind::ExpFlat:
            return std::pow(t, 1.0 / p_);
        case ProfileKind::Power:
            // lambda(x) = t  =>  log(c x^m) = -1/t
            return std::exp((-1.0 / t - std::log(c_)) / m_);
        case ProfileKind::Custom: {
            // bisection on lambda over the region where f < 1
            double hi = domain_cap_;
            while (hi > 0.0 && eval(hi) >= 1.0) hi *= 0.5;
            if (hi <= 0.0) throw RangeError("lambda_inverse: profile >= 1 everywhere");
            if (lambda(hi) < t) throw RangeError("lambda_inverse: t above lambda range");
            double lo = 0.0;
            for (int i = 0; i < 200; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (lambda(mid) < t) lo = mid; else hi = mid;
                if (hi - lo <= 1e-15 * hi) break;
            }
            return 0.5 * (lo + hi);
        }
        }
        return 0.0;
    }

    /// Largest |f'| on [0, hi], analytic for the built-in kinds and a
    /// sampled central difference for Custom. Used for surface-measure
    /// factors.
    double max_derivative(double hi) const {
        if (!(hi > 0.0) || hi > domain_cap_ * (1.0 + 1e-12))
            throw RangeError("max_derivative: hi outside (0, domain_cap]");
        const int grid = 4096;
        double best = 0.0;
        for (int i = 1; i <= grid; ++i) {
            const double x = hi * static_cast<double>(i) / grid;
            double d;
            switch (kind_) {
            case ProfileKind::Power:
                d = c_ * m_ * std::pow(x, m_ - 1.0);
                break;
            case ProfileKind::ExpFlat:
                d = p_ * std::pow(x, -p_ - 1.0) * std::exp(-std::pow(x, -p_));
                break;
            case ProfileKind::Custom: {
                const double h = std::max(1e-7 * hi, 1e-12);
                const double a = std::max(0.0, x - h);
                d = (fn_(std::min(x + h, domain_cap_)) - fn_(a)) / (std::min(x + h, domain_cap_) - a);
                break;
            }
            }
            best = std::max(best, std::abs(d));
        }
        return best;
    }

private:
    ProfileFunction() = default;

    static double check_cap(double cap) {
        if (!(cap > 0.0)) throw ValidationError("profile domain_cap must be positive");
        return cap;
    }

    double bisect_inverse(double t) const {
        double lo = 0.0, hi = domain_cap_;
        double flo = 0.0, fhi = eval(hi);
        const double rtol = 1e-12, atol = 1e-300;
        for (int i = 0; i < 400; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double fm = eval(mid);
            const double slack = 1e-14 * (std::abs(fhi) + std::abs(flo)) + 1e-300;
            if (fm < flo - slack || fm > fhi + slack)
                throw InvalidProfileError("profile inverse: non-monotone values during bracketing");
            if (std::abs(fm - t) <= rtol * t + atol) return mid;
            if (fm < t) { lo = mid; flo = fm; }
            else        { hi = mid; fhi = fm; }
            if (hi - lo <= 1e-16 * hi) break;
        }
        const double x = 0.5 * (lo + hi);
        if (std::abs(eval(x) - t) > 1e-9 * t + atol)
            throw InvalidProfileError(
                "profile inverse: bracket collapsed without reaching the target value");
        return x;
    }

    ProfileKind kind_ = ProfileKind::Power;
    double m_ = 2.0;
    double c_ = 1.0;
    double p_ = 1.0;
    std::function<double(double)> fn_;
    double domain_cap_ = 1.0;
};

/// Grid-verified doubling certificate for the lambda transform:
/// 2*lambda(x) <= lambda(sigma*x) on [0, range_end/sigma].
struct DoublingCertificate {
    double sigma = 0.0;
    double range_end = 0.0;
    int grid_size = 0;
    double max_violation = 0.0;
};

namespace detail {

inline double doubling_violation(const ProfileFunction& f, double sigma, double R, int grid) {
    double worst = -std::numeric_limits<double>::infinity();
    const double xmax = R / sigma;
    for (int i = 0; i < grid; ++i) {
        const double x = xmax * static_cast<double>(i) / (grid - 1);
        worst = std::max(worst, 2.0 * f.lambda(x) - f.lambda(sigma * x));
    }
    return worst;
}

} // namespace detail

/// Finds the smallest doubling constant sigma for lambda_f on [0, R]:
/// scans sigma-1 over a geometric ladder up to 1e6, then bisects the first
/// bracketing pair. Throws NotDoublingError when even sigma = 1e6 fails.
inline DoublingCertificate doubling_constant(const ProfileFunction& f, double R, int grid_size) {
    if (!(R > 0.0)) throw RangeError("doubling_constant: R must be positive");
    if (f.eval(R) >= 1.0) throw RangeError("doubling_constant: need f(R) < 1");
    if (grid_size < 64) throw ValidationError("doubling_constant: grid_size must be >= 64");

    const double sigma_max = 1e6;
    double lo = 1.0;                 // always fails (2g <= g impossible for g > 0)
    double hi = -1.0;
    for (double s = 1.0 + std::ldexp(1.0, -20); s <= sigma_max; s = 1.0 + 2.0 * (s - 1.0)) {
        if (detail::doubling_violation(f, s, R, grid_size) <= 0.0) { hi = s; break; }
        lo = s;
    }
    if (hi < 0.0) {
        if (detail::doubling_violation(f, sigma_max, R, grid_size) <= 0.0)
            hi = sigma_max;
        else
            throw NotDoublingError("doubling_constant: no sigma <= 1e6 satisfies the doubling condition");
    }
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        if (detail::doubling_violation(f, mid, R, grid_size) <= 0.0) hi = mid;
        else lo = mid;
    }
    DoublingCertificate cert;
    cert.sigma = hi;
    cert.range_end = R;
    cert.grid_size = grid_size;
    cert.max_violation = detail::doubling_violation(f, hi, R, grid_size);
    return cert;
}

/// Measured constant of the doubling inequality raised to the m-th power:
/// max over t in (0, T] of ([lambda^-1(2t)]^m - [lambda^-1(t)]^m) / [lambda^-1(t)]^m.
/// Bounded by sigma^m - 1 for any valid doubling constant sigma.
inline double lemma31_ratio(const ProfileFunction& f, double m, double T, int grid_size) {
    if (!(m >= 1.0)) throw RangeError("lemma31_ratio: m must be >= 1");
    if (!(T > 0.0)) throw RangeError("lemma31_ratio: T must be positive");
    if (grid_size < 64) throw ValidationError("lemma31_ratio: grid_size must be >= 64");
    double worst = 0.0;
    for (int i = 1; i <= grid_size; ++i) {
        const double t = T * static_cast<double>(i) / grid_size;
        const double a = std::pow(f.lambda_inverse(t), m);
        const double b = std::pow(f.lambda_inverse(2.0 * t), m);
        if (!(a > 0.0)) throw RangeError("lemma31_ratio: lambda_inverse vanished on the grid");
        worst = std::max(worst, (b - a) / a);
    }
    return worst;
}

struct TypeReport {
    enum class Kind { FiniteType, MildlyInfinite, Unknown };
    Kind kind = Kind::Unknown;
    double m_est = 0.0;
    double c_est = 0.0;
    std::optional<DoublingCertificate> doubling;
};

/// Classifies a profile near zero. FiniteType when log f vs log x fits a
/// line of slope m > 1 on [1e-6, 1e-3] with residual < 1e-3; MildlyInfinite
/// when the fit diverges but a doubling certificate exists; Unknown
/// otherwise.
inline TypeReport classify(const ProfileFunction& f) {
    const int pts = 64;
    std::vector<double> lx, ly;
    bool flat = false;
    for (int i = 0; i < pts; ++i) {
        const double x = 1e-6 * std::pow(1e3, static_cast<double>(i) / (pts - 1));
        const double fx = f.eval(x);
        if (!(fx > 0.0)) { flat = true; break; }
        lx.push_back(std::log(x));
        ly.push_back(std::log(fx));
    }
    TypeReport report;
    if (!flat) {
        const LineFit fit = least_squares_line(lx, ly);
        if (fit.max_abs_residual < 1e-3) {
            if (fit.slope > 1.0 + 1e-9) {
                report.kind = TypeReport::Kind::FiniteType;
                report.m_est = fit.slope;
                report.c_est = std::exp(fit.intercept);
                return report;
            }
            return report; // clean power law with m <= 1: not finite type, not flat
        }
    }
    // flat or non-power behaviour: attempt a doubling certificate
    double R = 0.25 * f.domain_cap();
    while (R > 0.0 && f.eval(R) >= 1.0) R *= 0.5;
    if (R > 0.0) {
        try {
            report.doubling = doubling_constant(f, R, 256);
            report.kind = TypeReport::Kind::MildlyInfinite;
        } catch (const Error&) {
            // stays Unknown
        }
    }
    return report;
}

} // namespace bergamot
