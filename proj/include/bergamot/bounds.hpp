#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "bergamot/domain.hpp"
#include "bergamot/errors.hpp"
#include "bergamot/norms.hpp"

namespace bergamot {

/// Direction for the metric, split into block parts and a normal component
/// to mirror the coordinate blocks of the domain.
struct Direction {
    std::vector<std::vector<std::complex<double>>> block_parts;
    std::complex<double> normal = {0.0, 0.0};

    static Direction normal_dir(const DomainDescriptor& domain) {
        Direction d = zero(domain);
        d.normal = {1.0, 0.0};
        return d;
    }

    /// Unit vector in the last coordinate of the given block.
    static Direction tangential(const DomainDescriptor& domain, int block) {
        Direction d = zero(domain);
        d.block_parts.at(block).back() = {1.0, 0.0};
        return d;
    }

    static Direction zero(const DomainDescriptor& domain) {
        Direction d;
        for (const auto& b : domain.blocks)
            d.block_parts.emplace_back(b.dim, std::complex<double>{0.0, 0.0});
        return d;
    }

    double block_norm_sq(std::size_t j) const {
        double s = 0.0;
        for (const auto& c : block_parts[j]) s += std::norm(c);
        return s;
    }

    double norm_sq() const {
        double s = std::norm(normal);
        for (std::size_t j = 0; j < block_parts.size(); ++j) s += block_norm_sq(j);
        return s;
    }
};

/// Certified lower bound for the Bergman kernel on the diagonal:
/// |phi(z)|^2 / ||phi||^2 = 2^(-2n) / phi_norm_sq_upper.
inline double kappa_lower(const DomainDescriptor& domain, const Point& z, double rtol = 1e-9,
                          BlockQuad mode = BlockQuad::Auto) {
    const int n = domain.total_dim();
    return std::pow(2.0, -2 * n) / phi_norm_sq_upper(domain, z, rtol, mode).value;
}

inline double kappa_lower(const ExtendedDomainDescriptor& domain, const Point& z,
                          double rtol = 1e-9, BlockQuad mode = BlockQuad::Auto) {
    const int n = domain.total_dim();
    return std::pow(2.0, -2 * n) / phi_norm_sq_upper(domain, z, rtol, mode).value;
}

/// Certified upper bound: the center value 1/Vol(A_z) of the inscribed
/// product of balls.
inline double kappa_upper(const DomainDescriptor& domain, const ApproachSpec& approach,
                          const Point& z) {
    return 1.0 / polydisc_volume(polydisc_build(domain, approach, z));
}

/// Center Bergman metric of the product of balls A_z.
inline double polydisc_center_metric(const PolydiscRegion& region, const Direction& xi) {
    double value = 2.0 * std::norm(xi.normal) / (region.normal_radius * region.normal_radius);
    for (std::size_t j = 0; j < region.block_radii.size(); ++j) {
        const double rj = region.block_radii[j];
        value += (region.block_dims[j] + 1) * xi.block_norm_sq(j) / (rj * rj);
    }
    return value;
}

struct MetricBounds {
    double lower = 0.0;
    double upper = 0.0;
    double i1_upper = 0.0; // best certified bound on the extremal integral I_1
};

/// Two-sided metric bounds at z in direction xi. The lower bound runs
/// through explicit candidates for I_1 (one per nonzero direction piece,
/// averaged); the upper bound compares against the polydisc center metric.
inline MetricBounds metric_bounds(const DomainDescriptor& domain, const ApproachSpec& approach,
                                  const Point& z, const Direction& xi, double rtol = 1e-9,
                                  BlockQuad mode = BlockQuad::Auto) {
    if (!(xi.norm_sq() > 0.0)) throw ValidationError("metric_bounds: zero direction");
    if (xi.block_parts.size() != domain.blocks.size())
        throw ValidationError("metric_bounds: direction blocks do not match domain");

    const int n = domain.total_dim();
    const double t = z.t();
    const PolydiscRegion region = polydisc_build(domain, approach, z); // also checks the cone
    const double ku = 1.0 / polydisc_volume(region);
    const double phi_sq = phi_norm_sq_upper(domain, z, rtol, mode).value;
    const double kl = std::pow(2.0, -2 * n) / phi_sq;

    const double four_pow = std::pow(4.0, n + 1);
    std::vector<double> piece_lowers;
    double i1_best = std::numeric_limits<double>::infinity();

    if (std::norm(xi.normal) > 0.0) {
        // psi_1 = 2^(n+1) t phi / xi_n and ||psi_2||^2 <= 2 ||psi_1||^2
        const double i1 = 12.0 * four_pow * t * t * phi_sq / std::norm(xi.normal);
        piece_lowers.push_back(1.0 / (ku * i1));
        i1_best = std::min(i1_best, i1);
    }
    const double c_next = detail::inner_line_constant(n + 1);
    const double chain_factor = four_pow * std::pow(t, 2 * (n + 1)) * c_next / (2.0 * n);
    for (std::size_t j = 0; j < xi.block_parts.size(); ++j) {
        if (!(xi.block_norm_sq(j) > 0.0)) continue;
        std::size_t imax = 0;
        for (std::size_t i = 1; i < xi.block_parts[j].size(); ++i)
            if (std::norm(xi.block_parts[j][i]) > std::norm(xi.block_parts[j][imax])) imax = i;
        const double comp_sq = std::norm(xi.block_parts[j][imax]);
        const double psi1 =
            chain_factor * weighted_tangential_block_product(domain, t, static_cast<int>(j), rtol) /
            comp_sq;
        const double psi2 = std::norm(z.block_parts[j][imax]) * chain_factor *
                            raised_tangential_block_product(domain, t, static_cast<int>(j), rtol) /
                            comp_sq;
        const double i1 = 2.0 * (psi1 + psi2);
        piece_lowers.push_back(1.0 / (ku * i1));
        i1_best = std::min(i1_best, i1);
    }

    MetricBounds out;
    double sum = 0.0;
    for (double v : piece_lowers) sum += v;
    out.lower = sum / static_cast<double>(piece_lowers.size());
    out.i1_upper = i1_best;
    out.upper = (ku / kl) * polydisc_center_metric(region, xi);
    return out;
}

/// Lower bound for the Szego kernel built from the surface norm of phi.
/// Rate-certified; the localization constant is unknown.
inline double szego_lower(const DomainDescriptor& domain, const Point& z,
                          const SurfaceOptions& opt = {}, double rtol = 1e-9,
                          BlockQuad mode = BlockQuad::Auto) {
    const int n = domain.total_dim();
    return std::pow(2.0, -2 * n) / phi_surface_norm_sq_upper(domain, z, opt, rtol, mode).value;
}

inline double szego_lower(const ExtendedDomainDescriptor& domain, const Point& z,
                          const SurfaceOptions& opt = {}, double rtol = 1e-9,
                          BlockQuad mode = BlockQuad::Auto) {
    const int n = domain.total_dim();
    return std::pow(2.0, -2 * n) / phi_surface_norm_sq_upper(domain, z, opt, rtol, mode).value;
}

/// Upper envelope Re z_n * kappa_upper(z) for the Szego kernel, valid up
/// to an unknown comparison constant on convex domains. Never used in
/// sandwich assertions.
inline double szego_upper_envelope(const DomainDescriptor& domain, const ApproachSpec& approach,
                                   const Point& z, bool convex) {
    if (!convex)
        throw UnsupportedDomainError("szego upper envelope requires convex flag");
    return z.t() * kappa_upper(domain, approach, z);
}

enum class EnvelopeKind { Kappa, MetricNormal, MetricBlock, Szego };

/// Predicted boundary growth envelopes from the two-sided estimates:
/// Kappa -> t^-2 prod [f_j^-1(t)]^(-2 n_j), Szego -> t^-1 prod ...,
/// MetricNormal -> t^-2, MetricBlock -> [f_j^-1(t)]^-2.
inline double predicted_envelope(const DomainDescriptor& domain, double t, EnvelopeKind kind,
                                 int block_index = -1) {
    if (!(t > 0.0)) throw RangeError("predicted_envelope: t must be positive");
    switch (kind) {
    case EnvelopeKind::MetricNormal:
        return 1.0 / (t * t);
    case EnvelopeKind::MetricBlock: {
        if (block_index < 0 || block_index >= domain.block_count())
            throw ValidationError("predicted_envelope: block index out of range");
        const double finv = domain.blocks[block_index].profile.inverse(t);
        return 1.0 / (finv * finv);
    }
    case EnvelopeKind::Kappa:
    case EnvelopeKind::Szego: {
        double value = (kind == EnvelopeKind::Kappa) ? 1.0 / (t * t) : 1.0 / t;
        for (const auto& b : domain.blocks)
            value *= std::pow(b.profile.inverse(t), -2.0 * b.dim);
        return value;
    }
    }
    return 0.0;
}

enum class ExtendedEnvelopeKind { KappaExtended, SzegoExtended };

/// Extended-domain envelopes use exponent -n_j with the real block dims.
inline double predicted_envelope(const ExtendedDomainDescriptor& domain, double t,
                                 ExtendedEnvelopeKind kind) {
    if (!(t > 0.0)) throw RangeError("predicted_envelope: t must be positive");
    double value = (kind == ExtendedEnvelopeKind::KappaExtended) ? 1.0 / (t * t) : 1.0 / t;
    for (const auto& b : domain.blocks)
        value *= std::pow(b.profile.inverse(t), -static_cast<double>(b.dim));
    return value;
}

/// Combined metric envelope for a full direction.
inline double metric_envelope(const DomainDescriptor& domain, double t, const Direction& xi) {
    double value = std::norm(xi.normal) / (t * t);
    for (std::size_t j = 0; j < xi.block_parts.size(); ++j) {
        const double finv = domain.blocks[j].profile.inverse(t);
        value += xi.block_norm_sq(j) / (finv * finv);
    }
    return value;
}

} // namespace bergamot
