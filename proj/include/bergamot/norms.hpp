#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "bergamot/domain.hpp"
#include "bergamot/errors.hpp"
#include "bergamot/quadrature.hpp"

namespace bergamot {

enum class NormMode { UpperCertified, Estimate };
enum class BlockQuad { Auto, Tensor, Separated };

/// Certified bound on a squared norm, with a labeled factor breakdown.
/// UpperCertified values only ever use integrand-monotone relaxations
/// (extending the imaginary line, sending the normal coordinate to
/// infinity, separating powers of F + t), each of which increases the
/// integral.
struct NormBound {
    double value = 0.0;
    NormMode mode = NormMode::UpperCertified;
    std::vector<std::pair<std::string, double>> components;
};

struct SurfaceOptions {
    bool gradient_factor = true;
    bool tail = true;
    double t0 = 0.05;
    double a_max = 100.0;
};

namespace detail {

// Surface area of the unit sphere in R^d.
inline double sphere_area_real(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

// c_q = int_R (1+s^2)^-q ds = pi * binom(2q-2, q-1) / 4^(q-1).
inline double inner_line_constant(int q) {
    double binom = 1.0;
    for (int i = 1; i <= q - 1; ++i) binom *= static_cast<double>(q - 1 + i) / i;
    return std::numbers::pi * binom / std::pow(4.0, q - 1);
}

// int_0^tau r^num_pow (f(r) + t)^-exp dr
inline double radial_profile_integral(const ProfileFunction& f, int num_pow, int exp,
                                      double t, double tau, double rtol) {
    auto integrand = [&](double r) {
        return std::pow(r, num_pow) * std::pow(f.eval(r) + t, -exp);
    };
    return integrate_adaptive(integrand, 0.0, tau, 1e-300, rtol).value;
}

struct RadialBlock {
    int real_dim;
    const ProfileFunction* profile;
};

inline std::vector<RadialBlock> radial_blocks(const DomainDescriptor& d) {
    std::vector<RadialBlock> out;
    for (const auto& b : d.blocks) out.push_back({2 * b.dim, &b.profile});
    return out;
}

inline std::vector<RadialBlock> radial_blocks(const ExtendedDomainDescriptor& d) {
    std::vector<RadialBlock> out;
    for (const auto& b : d.blocks) out.push_back({b.dim, &b.profile});
    return out;
}

// prod_j A_dj int_0^tau r^(dj-1) (f_j(r) + t)^-dj dr. The per-block
// exponent equals the block's real dimension, so the product over blocks
// relaxes (F + t)^(sum dj) into separated factors.
inline double separated_block_product(const std::vector<RadialBlock>& blocks, double t,
                                      double tau, double rtol) {
    double prod = 1.0;
    for (const auto& b : blocks)
        prod *= sphere_area_real(b.real_dim) *
                radial_profile_integral(*b.profile, b.real_dim - 1, b.real_dim, t, tau, rtol);
    return prod;
}

// Nested adaptive quadrature of
//   int ... int prod_j [A_dj r_j^(dj-1)] (sum_j f_j(r_j) + t)^-total_exp dr
// over [0, tau]^k. Supported for k <= 3.
inline double tensor_block_integral(const std::vector<RadialBlock>& blocks, int total_exp,
                                    double t, double tau, double rtol) {
    if (blocks.size() > 3)
        throw ValidationError("tensor_block_integral: tensor mode limited to k <= 3 blocks");
    std::function<double(std::size_t, double, double)> level = [&](std::size_t j, double acc,
                                                                   double tol) -> double {
        const auto& b = blocks[j];
        auto integrand = [&](double r) {
            const double fr = b.profile->eval(r) + acc;
            const double weight = std::pow(r, b.real_dim - 1);
            if (j + 1 == blocks.size())
                return weight * std::pow(fr + t, -total_exp);
            return weight * level(j + 1, fr, tol / 50.0);
        };
        return sphere_area_real(b.real_dim) *
               integrate_adaptive(integrand, 0.0, tau, 1e-300, tol).value;
    };
    return level(0, 0.0, rtol);
}

inline bool use_tensor(BlockQuad mode, std::size_t k) {
    switch (mode) {
    case BlockQuad::Tensor: return true;
    case BlockQuad::Separated: return false;
    case BlockQuad::Auto: return k <= 3;
    }
    return false;
}

// sqrt(1 + sup|grad F|^2) over the truncation box, inflated by 1.01.
inline double gradient_sup_factor(const std::vector<RadialBlock>& blocks, double tau) {
    double grad_sq = 0.0;
    for (const auto& b : blocks) {
        const double d = b.profile->max_derivative(tau);
        grad_sq += d * d;
    }
    return std::sqrt(1.0 + grad_sq) * 1.01;
}

template <typename Domain>
NormBound phi_volume_norm_impl(const Domain& domain, double t, int n, double rtol,
                               BlockQuad mode) {
    const auto blocks = radial_blocks(domain);
    const double cn = inner_line_constant(n);
    const double u_factor = 1.0 / (2.0 * n - 2.0);
    const bool tensor = use_tensor(mode, blocks.size());
    const double radial = tensor
                              ? tensor_block_integral(blocks, 2 * n - 2, t, domain.truncation, rtol)
                              : separated_block_product(blocks, t, domain.truncation, rtol);
    NormBound bound;
    bound.value = std::pow(t, 2 * n) * cn * u_factor * radial;
    bound.mode = NormMode::UpperCertified;
    bound.components = {{"inner_constant", cn},
                        {"u_integral_factor", u_factor},
                        {"radial_blocks", radial},
                        {"t_power", std::pow(t, 2 * n)},
                        {"tensor_mode", tensor ? 1.0 : 0.0}};
    return bound;
}

template <typename Domain>
NormBound phi_surface_norm_impl(const Domain& domain, double t, int n,
                                const SurfaceOptions& opt, double rtol, BlockQuad mode) {
    const auto blocks = radial_blocks(domain);
    const double cn = inner_line_constant(n);
    const bool tensor = use_tensor(mode, blocks.size());
    // total power 2n-1 on the graph; the separated route peels one factor
    // of (F + t) >= t before splitting the rest
    const double radial = tensor
                              ? tensor_block_integral(blocks, 2 * n - 1, t, domain.truncation, rtol)
                              : separated_block_product(blocks, t, domain.truncation, rtol) / t;
    const double core = std::pow(t, 2 * n) * cn * radial;
    const double grad = opt.gradient_factor ? gradient_sup_factor(blocks, domain.truncation) : 1.0;
    const double tail = opt.tail ? std::pow(t / (2.0 * opt.t0), 2 * n) * opt.a_max : 0.0;
    NormBound bound;
    bound.value = core * grad + tail;
    bound.mode = NormMode::UpperCertified;
    bound.components = {{"inner_constant", cn},
                        {"radial_blocks", radial},
                        {"core", core},
                        {"gradient_factor", grad},
                        {"tail", tail},
                        {"tensor_mode", tensor ? 1.0 : 0.0}};
    return bound;
}

} // namespace detail

/// Certified upper bound on the squared Bergman-space norm of the kernel
/// candidate phi(w) = t^n / (w_n - i Im z_n + t)^n over the truncated
/// model domain.
inline NormBound phi_norm_sq_upper(const DomainDescriptor& domain, const Point& z,
                                   double rtol = 1e-9, BlockQuad mode = BlockQuad::Auto) {
    if (!contains(domain, z))
        throw RangeError("phi_norm_sq_upper: point not inside the domain");
    return detail::phi_volume_norm_impl(domain, z.t(), domain.total_dim(), rtol, mode);
}

inline NormBound phi_norm_sq_upper(const ExtendedDomainDescriptor& domain, const Point& z,
                                   double rtol = 1e-9, BlockQuad mode = BlockQuad::Auto) {
    if (!(extended_rho_eval(domain, z) < 0.0))
        throw RangeError("phi_norm_sq_upper: point not inside the extended domain");
    return detail::phi_volume_norm_impl(domain, z.t(), domain.total_dim(), rtol, mode);
}

/// Certified upper bound on the squared Hardy norm of phi over the graph
/// part of the boundary, with a sampled surface-measure factor and a
/// configurable far-boundary tail (t / 2 t0)^(2n) * a_max.
inline NormBound phi_surface_norm_sq_upper(const DomainDescriptor& domain, const Point& z,
                                           const SurfaceOptions& opt = {}, double rtol = 1e-9,
                                           BlockQuad mode = BlockQuad::Auto) {
    if (!contains(domain, z))
        throw RangeError("phi_surface_norm_sq_upper: point not inside the domain");
    return detail::phi_surface_norm_impl(domain, z.t(), domain.total_dim(), opt, rtol, mode);
}

inline NormBound phi_surface_norm_sq_upper(const ExtendedDomainDescriptor& domain,
                                           const Point& z, const SurfaceOptions& opt = {},
                                           double rtol = 1e-9,
                                           BlockQuad mode = BlockQuad::Auto) {
    if (!(extended_rho_eval(domain, z) < 0.0))
        throw RangeError("phi_surface_norm_sq_upper: point not inside the extended domain");
    return detail::phi_surface_norm_impl(domain, z.t(), domain.total_dim(), opt, rtol, mode);
}

/// Block product for the tangential candidate psi*_1: the distinguished
/// block carries the |w|^2 weight and two extra powers of (f_j + t), the
/// remaining blocks contribute their standard factors.
inline double weighted_tangential_block_product(const DomainDescriptor& domain, double t,
                                                int block_index, double rtol = 1e-9) {
    const auto blocks = detail::radial_blocks(domain);
    if (block_index < 0 || block_index >= static_cast<int>(blocks.size()))
        throw ValidationError("weighted_tangential_block_product: block index out of range");
    double prod = 1.0;
    for (int j = 0; j < static_cast<int>(blocks.size()); ++j) {
        const auto& b = blocks[j];
        const int num_pow = (j == block_index) ? b.real_dim + 1 : b.real_dim - 1;
        const int exp = (j == block_index) ? b.real_dim + 2 : b.real_dim;
        prod *= detail::sphere_area_real(b.real_dim) *
                detail::radial_profile_integral(*b.profile, num_pow, exp, t, domain.truncation, rtol);
    }
    return prod;
}

/// Same split as above without the weight, for psi*_2.
inline double raised_tangential_block_product(const DomainDescriptor& domain, double t,
                                              int block_index, double rtol = 1e-9) {
    const auto blocks = detail::radial_blocks(domain);
    if (block_index < 0 || block_index >= static_cast<int>(blocks.size()))
        throw ValidationError("raised_tangential_block_product: block index out of range");
    double prod = 1.0;
    for (int j = 0; j < static_cast<int>(blocks.size()); ++j) {
        const auto& b = blocks[j];
        const int exp = (j == block_index) ? b.real_dim + 2 : b.real_dim;
        prod *= detail::sphere_area_real(b.real_dim) *
                detail::radial_profile_integral(*b.profile, b.real_dim - 1, exp, t, domain.truncation, rtol);
    }
    return prod;
}

} // namespace bergamot
