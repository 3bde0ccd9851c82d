#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <numeric>
#include <vector>

#include "bergamot/errors.hpp"
#include "bergamot/profile.hpp"
#include "bergamot/rng.hpp"

namespace bergamot {

struct Block {
    int dim = 1; // complex dimension of the block
    ProfileFunction profile = ProfileFunction::power(2.0);
};

/// Model domain piece {Re z_n > F(z')} with F(z') = sum_j f_j(|z^j|),
/// truncated to the product of per-block balls of the given radius.
struct DomainDescriptor {
    std::vector<Block> blocks;
    double truncation = 1.0;

    int block_count() const { return static_cast<int>(blocks.size()); }

    /// Complex dimension n = 1 + sum of block dimensions.
    int total_dim() const {
        int s = 1;
        for (const auto& b : blocks) s += b.dim;
        return s;
    }
};

inline DomainDescriptor make_domain(std::vector<Block> blocks, double truncation = 1.0) {
    if (blocks.empty()) throw ValidationError("domain: needs at least one block");
    if (!(truncation > 0.0)) throw ValidationError("domain: truncation must be positive");
    for (const auto& b : blocks) {
        if (b.dim < 1) throw ValidationError("domain: block dimension must be >= 1");
        if (b.profile.domain_cap() < truncation)
            throw ValidationError("domain: profile domain_cap smaller than truncation");
    }
    return DomainDescriptor{std::move(blocks), truncation};
}

struct Point {
    std::vector<std::vector<std::complex<double>>> block_parts;
    std::complex<double> z_n;

    double t() const { return z_n.real(); }

    double block_norm(std::size_t j) const {
        double s = 0.0;
        for (const auto& c : block_parts[j]) s += std::norm(c);
        return std::sqrt(s);
    }

    /// z' flattened to a single complex vector, blocks in order.
    std::vector<std::complex<double>> prime_flat() const {
        std::vector<std::complex<double>> out;
        for (const auto& part : block_parts)
            out.insert(out.end(), part.begin(), part.end());
        return out;
    }

    /// All ambient coordinates (z', z_n) flattened.
    std::vector<std::complex<double>> ambient() const {
        auto out = prime_flat();
        out.push_back(z_n);
        return out;
    }
};

inline Point radial_point(const DomainDescriptor& domain, double t) {
    Point z;
    z.block_parts.resize(domain.blocks.size());
    for (std::size_t j = 0; j < domain.blocks.size(); ++j)
        z.block_parts[j].assign(domain.blocks[j].dim, {0.0, 0.0});
    z.z_n = {t, 0.0};
    return z;
}

inline Point point_from_ambient(const DomainDescriptor& domain,
                                const std::vector<std::complex<double>>& coords) {
    if (static_cast<int>(coords.size()) != domain.total_dim())
        throw ValidationError("point_from_ambient: coordinate count mismatch");
    Point z;
    std::size_t pos = 0;
    for (const auto& b : domain.blocks) {
        z.block_parts.emplace_back(coords.begin() + pos, coords.begin() + pos + b.dim);
        pos += b.dim;
    }
    z.z_n = coords[pos];
    return z;
}

namespace detail {

inline void check_point_shape(const DomainDescriptor& domain, const Point& z) {
    if (z.block_parts.size() != domain.blocks.size())
        throw ValidationError("point: block count does not match domain");
    for (std::size_t j = 0; j < domain.blocks.size(); ++j)
        if (static_cast<int>(z.block_parts[j].size()) != domain.blocks[j].dim)
            throw ValidationError("point: block dimension does not match domain");
}

inline void check_in_box(const DomainDescriptor& domain, const Point& z) {
    const double limit = domain.truncation * (1.0 + 1e-12);
    for (std::size_t j = 0; j < domain.blocks.size(); ++j)
        if (z.block_norm(j) > limit)
            throw RangeError("point outside truncation box (block norm)");
    if (std::abs(z.z_n) > limit)
        throw RangeError("point outside truncation box (normal coordinate)");
}

} // namespace detail

/// Defining function rho(z) = F(z') - Re z_n: negative inside the domain.
inline double rho_eval(const DomainDescriptor& domain, const Point& z) {
    detail::check_point_shape(domain, z);
    detail::check_in_box(domain, z);
    double big_f = 0.0;
    for (std::size_t j = 0; j < domain.blocks.size(); ++j)
        big_f += domain.blocks[j].profile.eval(z.block_norm(j));
    return big_f - z.z_n.real();
}

inline bool contains(const DomainDescriptor& domain, const Point& z) {
    return rho_eval(domain, z) < 0.0;
}

/// Approach region parameters: Re z_n > k*beta * sum_j f_j(alpha_j |z^j|),
/// plus the admissibility threshold t0 and a path t -> z(t).
struct ApproachSpec {
    std::vector<double> alpha;
    double beta = 2.0;
    double t0 = 0.05;
    std::function<Point(const DomainDescriptor&, double)> path;
};

inline ApproachSpec make_radial_approach(std::vector<double> alpha, double beta,
                                         double t0 = 0.05) {
    for (double a : alpha)
        if (!(a > 1.0)) throw ValidationError("approach: every alpha_j must be > 1");
    if (!(beta > 1.0)) throw ValidationError("approach: beta must be > 1");
    if (!(t0 > 0.0)) throw ValidationError("approach: t0 must be positive");
    ApproachSpec spec;
    spec.alpha = std::move(alpha);
    spec.beta = beta;
    spec.t0 = t0;
    spec.path = [](const DomainDescriptor& d, double t) { return radial_point(d, t); };
    return spec;
}

inline bool gamma_contains(const DomainDescriptor& domain, const ApproachSpec& approach,
                           const Point& z) {
    detail::check_point_shape(domain, z);
    if (approach.alpha.size() != domain.blocks.size())
        throw ValidationError("approach: alpha length does not match block count");
    const double k = static_cast<double>(domain.block_count());
    double rhs = 0.0;
    for (std::size_t j = 0; j < domain.blocks.size(); ++j)
        rhs += domain.blocks[j].profile.eval(approach.alpha[j] * z.block_norm(j));
    return z.z_n.real() > k * approach.beta * rhs;
}

/// Evaluates the approach path at parameter t and verifies the result lies
/// in the approach region.
inline Point approach_point(const DomainDescriptor& domain, const ApproachSpec& approach,
                            double t) {
    if (!(t > 0.0) || t >= domain.truncation)
        throw RangeError("approach_point: t must lie in (0, truncation)");
    Point z = approach.path(domain, t);
    if (!gamma_contains(domain, approach, z))
        throw PathError("approach_point: path left the approach region");
    return z;
}

/// Product of balls around z that the domain is guaranteed to contain.
struct PolydiscRegion {
    Point center;
    std::vector<int> block_dims;
    std::vector<double> block_radii;
    double normal_radius = 0.0;
};

inline PolydiscRegion polydisc_build(const DomainDescriptor& domain,
                                     const ApproachSpec& approach, const Point& z) {
    if (!gamma_contains(domain, approach, z))
        throw NotInConeError("polydisc_build: point not in the approach region");
    const double t = z.z_n.real();
    if (t > approach.t0 * (1.0 + 1e-12))
        throw NotInConeError("polydisc_build: Re z_n above the t0 threshold");
    const double k = static_cast<double>(domain.block_count());
    PolydiscRegion region;
    region.center = z;
    for (std::size_t j = 0; j < domain.blocks.size(); ++j) {
        const double aj = approach.alpha[j];
        const double rj =
            (aj - 1.0) / aj * domain.blocks[j].profile.inverse(t / (k * approach.beta));
        region.block_dims.push_back(domain.blocks[j].dim);
        region.block_radii.push_back(rj);
    }
    region.normal_radius = (approach.beta - 1.0) / approach.beta * t;
    return region;
}

/// Vol = (pi r_n^2) * prod_j pi^(n_j) r_j^(2 n_j) / n_j!
inline double polydisc_volume(const PolydiscRegion& region) {
    double vol = std::numbers::pi * region.normal_radius * region.normal_radius;
    for (std::size_t j = 0; j < region.block_radii.size(); ++j) {
        const int m = region.block_dims[j];
        double fact = 1.0;
        for (int i = 2; i <= m; ++i) fact *= i;
        vol *= std::pow(std::numbers::pi, m) * std::pow(region.block_radii[j], 2 * m) / fact;
    }
    if (!(vol > 0.0)) throw ValidationError("polydisc_volume: degenerate region");
    return vol;
}

/// Draws uniform samples from the product of balls and returns the largest
/// rho value seen. Negative means every sample stayed inside the domain.
inline double polydisc_inclusion_check(const DomainDescriptor& domain,
                                       const PolydiscRegion& region, int samples,
                                       std::uint64_t seed) {
    if (samples < 1) throw ValidationError("polydisc_inclusion_check: samples must be >= 1");
    Rng rng(seed);
    double max_rho = -std::numeric_limits<double>::infinity();
    Point w = region.center;
    for (int s = 0; s < samples; ++s) {
        for (std::size_t j = 0; j < region.block_radii.size(); ++j) {
            const auto offset = sample_complex_ball(rng, region.block_dims[j], region.block_radii[j]);
            for (std::size_t i = 0; i < offset.size(); ++i)
                w.block_parts[j][i] = region.center.block_parts[j][i] + offset[i];
        }
        const auto normal_offset = sample_complex_ball(rng, 1, region.normal_radius);
        w.z_n = region.center.z_n + normal_offset[0];
        max_rho = std::max(max_rho, rho_eval(domain, w));
    }
    return max_rho;
}

/// Extended variant: decoupling over groups of real coordinates of z'.
/// `coords` lists the real-coordinate indices of the block in the layout
/// (Re z_1, Im z_1, Re z_2, Im z_2, ...).
struct ExtendedBlock {
    int dim = 1; // real dimension
    ProfileFunction profile = ProfileFunction::power(2.0);
    std::vector<int> coords;
};

struct ExtendedDomainDescriptor {
    std::vector<ExtendedBlock> blocks;
    double truncation = 1.0;
    double delta = 0.25;

    int block_count() const { return static_cast<int>(blocks.size()); }

    /// Complex dimension n with sum of real block dims equal to 2(n-1).
    int total_dim() const {
        int s = 0;
        for (const auto& b : blocks) s += b.dim;
        return 1 + s / 2;
    }
};

inline ExtendedDomainDescriptor make_extended_domain(std::vector<ExtendedBlock> blocks,
                                                     double truncation = 1.0,
                                                     double delta = 0.25) {
    if (blocks.empty()) throw ValidationError("extended domain: needs at least one block");
    if (!(truncation > 0.0)) throw ValidationError("extended domain: truncation must be positive");
    if (!(delta > 0.0)) throw ValidationError("extended domain: delta must be positive");
    int total = 0;
    for (const auto& b : blocks) {
        if (b.dim < 1) throw ValidationError("extended domain: block dimension must be >= 1");
        total += b.dim;
    }
    if (total % 2 != 0)
        throw ValidationError("extended domain: real dimensions must sum to 2(n-1)");
    // default coordinate assignment is consecutive; explicit lists must
    // partition the real coordinates
    int cursor = 0;
    std::vector<bool> used(total, false);
    for (auto& b : blocks) {
        if (b.coords.empty()) {
            for (int i = 0; i < b.dim; ++i) b.coords.push_back(cursor++);
        } else {
            if (static_cast<int>(b.coords.size()) != b.dim)
                throw ValidationError("extended domain: coords length must equal block dim");
            cursor += b.dim;
        }
        for (int idx : b.coords) {
            if (idx < 0 || idx >= total || used[idx])
                throw ValidationError("extended domain: coords must partition the real coordinates");
            used[idx] = true;
        }
    }
    return ExtendedDomainDescriptor{std::move(blocks), truncation, delta};
}

/// rho for the extended domain. The z' part of the point is flattened to
/// real coordinates and regrouped by the block coordinate lists.
inline double extended_rho_eval(const ExtendedDomainDescriptor& domain, const Point& z) {
    const auto prime = z.prime_flat();
    if (static_cast<int>(prime.size()) != domain.total_dim() - 1)
        throw ValidationError("extended_rho_eval: point dimension mismatch");
    std::vector<double> real_coords;
    real_coords.reserve(2 * prime.size());
    for (const auto& c : prime) {
        real_coords.push_back(c.real());
        real_coords.push_back(c.imag());
    }
    const double limit = domain.truncation * (1.0 + 1e-12);
    double big_f = 0.0;
    for (const auto& b : domain.blocks) {
        double s = 0.0;
        for (int idx : b.coords) s += real_coords[idx] * real_coords[idx];
        const double r = std::sqrt(s);
        if (r > limit) throw RangeError("extended_rho_eval: block outside truncation");
        big_f += b.profile.eval(r);
    }
    if (std::abs(z.z_n) > limit)
        throw RangeError("extended_rho_eval: normal coordinate outside truncation");
    return big_f - z.z_n.real();
}

} // namespace bergamot
