#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <vector>

#include "bergamot/domain.hpp"
#include "bergamot/errors.hpp"
#include "bergamot/rng.hpp"

namespace bergamot {

/// Finite holomorphic monomial dictionary over the ambient coordinates.
struct Dictionary {
    std::vector<std::vector<int>> entries;

    int size() const { return static_cast<int>(entries.size()); }

    /// All multi-indices with total degree <= max_degree, ordered by total
    /// degree then lexicographically, so that truncating by degree gives a
    /// nested refinement.
    static Dictionary total_degree(int n_coords, int max_degree) {
        if (n_coords < 1 || max_degree < 0)
            throw ValidationError("Dictionary: bad dimensions");
        Dictionary dict;
        std::vector<int> idx(n_coords, 0);
        for (int deg = 0; deg <= max_degree; ++deg) {
            std::function<void(int, int)> emit = [&](int pos, int remaining) {
                if (pos == n_coords - 1) {
                    idx[pos] = remaining;
                    dict.entries.push_back(idx);
                    return;
                }
                for (int d = remaining; d >= 0; --d) {
                    idx[pos] = d;
                    emit(pos + 1, remaining - d);
                }
            };
            emit(0, deg);
        }
        return dict;
    }
};

struct GramEstimate {
    double value = 0.0;
    int dictionary_size = 0;
    int mc_samples = 0;
    std::uint64_t seed = 0;
    double condition_diag = 0.0; // smallest retained eigenvalue
    double std_error = 0.0;      // 16-way batch estimate, absolute
};

namespace detail {

// Sampling region: maps quasi-uniform points from the unit cube into a
// bounding box of known volume, with an acceptance predicate.
struct SampleRegion {
    virtual ~SampleRegion() = default;
    virtual int ambient_dim() const = 0;
    virtual int uniform_dims() const = 0;
    virtual double box_volume() const = 0;
    virtual bool draw(const double* u, std::vector<std::complex<double>>& out) const = 0;
};

struct ModelRegion final : SampleRegion {
    const DomainDescriptor& domain;
    explicit ModelRegion(const DomainDescriptor& d) : domain(d) {}

    int ambient_dim() const override { return domain.total_dim(); }

    int uniform_dims() const override {
        int dims = 2; // normal coordinate disc
        for (const auto& b : domain.blocks) dims += 2 * b.dim;
        return dims;
    }

    double box_volume() const override {
        const double tau = domain.truncation;
        double vol = std::numbers::pi * tau * tau;
        for (const auto& b : domain.blocks) {
            double fact = 1.0;
            for (int i = 2; i <= b.dim; ++i) fact *= i;
            vol *= std::pow(std::numbers::pi, b.dim) * std::pow(tau, 2 * b.dim) / fact;
        }
        return vol;
    }

    bool draw(const double* u, std::vector<std::complex<double>>& out) const override {
        out.clear();
        const double tau = domain.truncation;
        int cursor = 0;
        double big_f = 0.0;
        for (const auto& b : domain.blocks) {
            const auto part = complex_ball_from_uniforms(b.dim, tau, u + cursor);
            cursor += 2 * b.dim;
            double norm_sq = 0.0;
            for (const auto& c : part) norm_sq += std::norm(c);
            big_f += b.profile.eval(std::sqrt(norm_sq));
            out.insert(out.end(), part.begin(), part.end());
        }
        const auto wn = complex_ball_from_uniforms(1, tau, u + cursor);
        out.push_back(wn[0]);
        return wn[0].real() > big_f;
    }
};

struct PolydiscRegionSampler final : SampleRegion {
    std::vector<double> radii;
    explicit PolydiscRegionSampler(std::vector<double> r) : radii(std::move(r)) {}

    int ambient_dim() const override { return static_cast<int>(radii.size()); }
    int uniform_dims() const override { return 2 * static_cast<int>(radii.size()); }

    double box_volume() const override {
        double vol = 1.0;
        for (double r : radii) vol *= std::numbers::pi * r * r;
        return vol;
    }

    bool draw(const double* u, std::vector<std::complex<double>>& out) const override {
        out.clear();
        for (std::size_t i = 0; i < radii.size(); ++i)
            out.push_back(complex_ball_from_uniforms(1, radii[i], u + 2 * i)[0]);
        return true;
    }
};

struct BallRegionSampler final : SampleRegion {
    int m;
    double radius;
    BallRegionSampler(int dim, double r) : m(dim), radius(r) {}

    int ambient_dim() const override { return m; }
    int uniform_dims() const override { return 2 * m; }

    double box_volume() const override {
        double fact = 1.0;
        for (int i = 2; i <= m; ++i) fact *= i;
        return std::pow(std::numbers::pi, m) * std::pow(radius, 2 * m) / fact;
    }

    bool draw(const double* u, std::vector<std::complex<double>>& out) const override {
        out = complex_ball_from_uniforms(m, radius, u);
        return true;
    }
};

inline void eval_monomials(const Dictionary& dict,
                           const std::vector<std::complex<double>>& w, int max_degree,
                           Eigen::VectorXcd& out) {
    const int n = static_cast<int>(w.size());
    // power table per coordinate
    static thread_local std::vector<std::complex<double>> powers;
    powers.assign(static_cast<std::size_t>(n) * (max_degree + 1), {0.0, 0.0});
    for (int i = 0; i < n; ++i) {
        powers[i * (max_degree + 1)] = {1.0, 0.0};
        for (int d = 1; d <= max_degree; ++d)
            powers[i * (max_degree + 1) + d] = powers[i * (max_degree + 1) + d - 1] * w[i];
    }
    for (int a = 0; a < dict.size(); ++a) {
        std::complex<double> v = {1.0, 0.0};
        for (int i = 0; i < n; ++i) v *= powers[i * (max_degree + 1) + dict.entries[a][i]];
        out[a] = v;
    }
}

inline double pinv_quadratic_form(const Eigen::MatrixXcd& gram, const Eigen::VectorXcd& w,
                                  double svd_cutoff, double* smallest_kept) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
    const auto& values = eig.eigenvalues();
    const double top = values.maxCoeff();
    if (!(top > 0.0)) throw DegenerateDictionaryError("gram matrix has no positive spectrum");
    const double cutoff = svd_cutoff * top;
    double total = 0.0;
    double kept_min = top;
    int kept = 0;
    for (int i = 0; i < values.size(); ++i) {
        if (values[i] <= cutoff) continue;
        const std::complex<double> proj = eig.eigenvectors().col(i).adjoint() * w;
        total += std::norm(proj) / values[i];
        kept_min = std::min(kept_min, values[i]);
        ++kept;
    }
    if (kept == 0) throw DegenerateDictionaryError("all gram eigenvalues below the cutoff");
    if (smallest_kept) *smallest_kept = kept_min;
    return total;
}

inline GramEstimate gram_kappa_region(const SampleRegion& region,
                                      const std::vector<std::complex<double>>& z,
                                      const Dictionary& dict, int mc_samples,
                                      std::uint64_t seed, double svd_cutoff) {
    if (mc_samples < 10000)
        throw ValidationError("gram_kappa: mc_samples must be >= 1e4");
    if (dict.size() == 0) throw ValidationError("gram_kappa: empty dictionary");
    if (static_cast<int>(z.size()) != region.ambient_dim())
        throw ValidationError("gram_kappa: point dimension mismatch");
    int max_degree = 0;
    for (const auto& e : dict.entries) {
        if (static_cast<int>(e.size()) != region.ambient_dim())
            throw ValidationError("gram_kappa: dictionary arity mismatch");
        int total = 0;
        for (int d : e) total += d;
        max_degree = std::max(max_degree, total);
    }

    const int m = dict.size();
    constexpr int kBatches = 16;
    std::vector<Eigen::MatrixXcd> batch_sums(kBatches, Eigen::MatrixXcd::Zero(m, m));
    std::vector<int> batch_draws(kBatches, 0);

    HaltonSequence halton(region.uniform_dims(), seed);
    std::vector<double> u(region.uniform_dims());
    std::vector<std::complex<double>> w;
    Eigen::VectorXcd mono(m);
    long accepted = 0;
    for (int s = 0; s < mc_samples; ++s) {
        halton.next(u.data());
        const int b = s % kBatches;
        ++batch_draws[b];
        if (!region.draw(u.data(), w)) continue;
        ++accepted;
        eval_monomials(dict, w, max_degree, mono);
        batch_sums[b].noalias() += mono.conjugate() * mono.transpose();
    }
    if (accepted < mc_samples * 1e-4)
        throw SamplingError("gram_kappa: rejection acceptance rate below 1e-4");

    const double vol = region.box_volume();
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(m, m);
    for (const auto& bs : batch_sums) gram += bs;
    gram *= vol / static_cast<double>(mc_samples);

    Eigen::VectorXcd vec(m);
    eval_monomials(dict, z, max_degree, vec);
    Eigen::VectorXcd w_conj = vec.conjugate();

    GramEstimate est;
    est.dictionary_size = m;
    est.mc_samples = mc_samples;
    est.seed = seed;
    est.value = pinv_quadratic_form(gram, w_conj, svd_cutoff, &est.condition_diag);

    // batch spread for the standard error
    std::vector<double> batch_values;
    for (int b = 0; b < kBatches; ++b) {
        if (batch_draws[b] == 0) continue;
        Eigen::MatrixXcd gb = batch_sums[b] * (vol / static_cast<double>(batch_draws[b]));
        try {
            batch_values.push_back(pinv_quadratic_form(gb, w_conj, svd_cutoff, nullptr));
        } catch (const DegenerateDictionaryError&) {
            // drop degenerate batches from the spread estimate
        }
    }
    if (batch_values.size() >= 2) {
        double mean = 0.0;
        for (double v : batch_values) mean += v;
        mean /= batch_values.size();
        double var = 0.0;
        for (double v : batch_values) var += (v - mean) * (v - mean);
        var /= (batch_values.size() - 1);
        est.std_error = std::sqrt(var / batch_values.size());
    } else {
        est.std_error = std::numeric_limits<double>::quiet_NaN();
    }
    return est;
}

} // namespace detail

/// Subspace Gram lower estimate of the Bergman kernel on the model domain.
/// Deterministic for a fixed seed; `value` estimates the reproducing
/// kernel of the monomial span, which is at most kappa up to Monte Carlo
/// error.
inline GramEstimate gram_kappa(const DomainDescriptor& domain, const Point& z,
                               const Dictionary& dict, int mc_samples, std::uint64_t seed,
                               double svd_cutoff = 1e-10) {
    if (!contains(domain, z)) throw RangeError("gram_kappa: point not inside the domain");
    detail::ModelRegion region(domain);
    return detail::gram_kappa_region(region, z.ambient(), dict, mc_samples, seed, svd_cutoff);
}

/// Classical reference domains with closed-form diagonal kernels.
struct ReferenceDomain {
    enum class Kind { Disc, Polydisc, Ball };
    Kind kind = Kind::Disc;
    std::vector<double> radii; // one entry per coordinate (Ball: single entry)
    int dim = 1;

    static ReferenceDomain disc(double r) { return {Kind::Disc, {r}, 1}; }
    static ReferenceDomain polydisc(std::vector<double> r) {
        const int d = static_cast<int>(r.size());
        return {Kind::Polydisc, std::move(r), d};
    }
    static ReferenceDomain ball(int dim, double r) { return {Kind::Ball, {r}, dim}; }
};

inline double exact_kappa_reference(const ReferenceDomain& ref,
                                    const std::vector<std::complex<double>>& z) {
    if (static_cast<int>(z.size()) != ref.dim)
        throw ValidationError("exact_kappa_reference: point dimension mismatch");
    switch (ref.kind) {
    case ReferenceDomain::Kind::Disc: {
        const double r = ref.radii[0];
        const double gap = r * r - std::norm(z[0]);
        if (!(gap > 0.0)) throw RangeError("exact_kappa_reference: point not inside the disc");
        return r * r / (std::numbers::pi * gap * gap);
    }
    case ReferenceDomain::Kind::Polydisc: {
        double value = 1.0;
        for (int i = 0; i < ref.dim; ++i) {
            const double r = ref.radii[i];
            const double gap = r * r - std::norm(z[i]);
            if (!(gap > 0.0))
                throw RangeError("exact_kappa_reference: point not inside the polydisc");
            value *= r * r / (std::numbers::pi * gap * gap);
        }
        return value;
    }
    case ReferenceDomain::Kind::Ball: {
        const double r = ref.radii[0];
        double norm_sq = 0.0;
        for (const auto& c : z) norm_sq += std::norm(c);
        const double gap = r * r - norm_sq;
        if (!(gap > 0.0)) throw RangeError("exact_kappa_reference: point not inside the ball");
        double fact = 1.0;
        for (int i = 2; i <= ref.dim; ++i) fact *= i;
        return fact / std::pow(std::numbers::pi, ref.dim) * r * r / std::pow(gap, ref.dim + 1);
    }
    }
    return 0.0;
}

inline GramEstimate gram_kappa(const ReferenceDomain& ref,
                               const std::vector<std::complex<double>>& z,
                               const Dictionary& dict, int mc_samples, std::uint64_t seed,
                               double svd_cutoff = 1e-10) {
    std::unique_ptr<detail::SampleRegion> region;
    switch (ref.kind) {
    case ReferenceDomain::Kind::Disc:
    case ReferenceDomain::Kind::Polydisc:
        region = std::make_unique<detail::PolydiscRegionSampler>(ref.radii);
        break;
    case ReferenceDomain::Kind::Ball:
        region = std::make_unique<detail::BallRegionSampler>(ref.dim, ref.radii[0]);
        break;
    }
    return detail::gram_kappa_region(*region, z, dict, mc_samples, seed, svd_cutoff);
}

/// Checks the extremal-integral transformation rule under a diagonal
/// scaling map using the closed-form kernels. Returns the relative
/// discrepancy |I0(z) |det J|^2 - I0'(f(z))| / I0'(f(z)).
inline double transformation_check(const ReferenceDomain& ref, const std::vector<double>& scales,
                                   const std::vector<std::complex<double>>& z) {
    if (static_cast<int>(scales.size()) != ref.dim)
        throw ValidationError("transformation_check: scale count mismatch");
    for (double s : scales)
        if (!(s > 0.0)) throw ValidationError("transformation_check: scales must be positive");

    ReferenceDomain image = ref;
    std::vector<std::complex<double>> fz = z;
    double det_sq = 1.0;
    for (int i = 0; i < ref.dim; ++i) {
        fz[i] *= scales[i];
        det_sq *= scales[i] * scales[i];
    }
    switch (ref.kind) {
    case ReferenceDomain::Kind::Disc:
    case ReferenceDomain::Kind::Ball:
        for (double s : scales)
            if (s != scales[0])
                throw ValidationError("transformation_check: disc/ball images need a uniform scale");
        image.radii[0] = ref.radii[0] * scales[0];
        break;
    case ReferenceDomain::Kind::Polydisc:
        for (int i = 0; i < ref.dim; ++i) image.radii[i] = ref.radii[i] * scales[i];
        break;
    }
    const double i0_src = 1.0 / exact_kappa_reference(ref, z);
    const double i0_dst = 1.0 / exact_kappa_reference(image, fz);
    return std::abs(i0_src * det_sq - i0_dst) / i0_dst;
}

struct TransformationSampleCheck {
    double discrepancy = 0.0;    // relative
    double rel_std_error = 0.0;  // propagated from both gram estimates
};

/// Gram-based version of the transformation rule on a polydisc image.
inline TransformationSampleCheck transformation_check_gram(const ReferenceDomain& ref,
                                                           const std::vector<double>& scales,
                                                           const std::vector<std::complex<double>>& z,
                                                           const Dictionary& dict, int mc_samples,
                                                           std::uint64_t seed,
                                                           double svd_cutoff = 1e-10) {
    if (ref.kind != ReferenceDomain::Kind::Polydisc)
        throw ValidationError("transformation_check_gram: implemented for polydisc sources");
    ReferenceDomain image = ref;
    std::vector<std::complex<double>> fz = z;
    double det_sq = 1.0;
    for (int i = 0; i < ref.dim; ++i) {
        fz[i] *= scales[i];
        image.radii[i] = ref.radii[i] * scales[i];
        det_sq *= scales[i] * scales[i];
    }
    const GramEstimate src = gram_kappa(ref, z, dict, mc_samples, seed, svd_cutoff);
    const GramEstimate dst = gram_kappa(image, fz, dict, mc_samples, seed + 1, svd_cutoff);
    const double i0_src = 1.0 / src.value;
    const double i0_dst = 1.0 / dst.value;
    TransformationSampleCheck out;
    out.discrepancy = std::abs(i0_src * det_sq - i0_dst) / i0_dst;
    const double r1 = src.std_error / src.value;
    const double r2 = dst.std_error / dst.value;
    out.rel_std_error = std::sqrt(r1 * r1 + r2 * r2);
    return out;
}

} // namespace bergamot
