#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "bergamot/bounds.hpp"
#include "bergamot/oracle.hpp"

using namespace bergamot;
using Catch::Approx;
using std::numbers::pi;
using cplx = std::complex<double>;

TEST_CASE("closed-form reference kernels", "[oracle]") {
    SECTION("center values equal 1/Vol") {
        CHECK(exact_kappa_reference(ReferenceDomain::disc(1.0), {cplx{0, 0}}) ==
              Approx(1.0 / pi).epsilon(1e-14));
        CHECK(exact_kappa_reference(ReferenceDomain::polydisc({1.0, 1.0}),
                                    {cplx{0, 0}, cplx{0, 0}}) ==
              Approx(1.0 / (pi * pi)).epsilon(1e-14));
        CHECK(exact_kappa_reference(ReferenceDomain::ball(2, 1.0), {cplx{0, 0}, cplx{0, 0}}) ==
              Approx(2.0 / (pi * pi)).epsilon(1e-14));
        // scaled radii
        CHECK(exact_kappa_reference(ReferenceDomain::disc(2.0), {cplx{0, 0}}) ==
              Approx(1.0 / (4.0 * pi)).epsilon(1e-14));
    }

    SECTION("disc off-center agrees with the geometric series") {
        const double z = 0.5;
        double series = 0.0;
        for (int a = 0; a < 80; ++a) series += (a + 1) * std::pow(z * z, a) / pi;
        const double exact = exact_kappa_reference(ReferenceDomain::disc(1.0), {cplx{z, 0}});
        CHECK(exact == Approx(series).epsilon(1e-13));
        CHECK(exact == Approx(0.565884).epsilon(1e-6));
    }

    SECTION("boundary and outside points are rejected") {
        CHECK_THROWS_AS(exact_kappa_reference(ReferenceDomain::disc(1.0), {cplx{1.0, 0}}),
                        RangeError);
        CHECK_THROWS_AS(exact_kappa_reference(ReferenceDomain::ball(2, 1.0),
                                              {cplx{0.8, 0}, cplx{0.7, 0}}),
                        RangeError);
    }
}

TEST_CASE("gram estimates agree with the references", "[oracle]") {
    const auto dict1 = Dictionary::total_degree(1, 8);
    const auto dict2 = Dictionary::total_degree(2, 8);

    SECTION("unit disc at the center: only the constant contributes") {
        const auto est = gram_kappa(ReferenceDomain::disc(1.0), {cplx{0, 0}}, dict1, 50000, 42);
        CHECK(est.value == Approx(1.0 / pi).epsilon(0.01));
        CHECK(est.dictionary_size == 9);
    }

    SECTION("unit disc at z = 0.5") {
        const auto est = gram_kappa(ReferenceDomain::disc(1.0), {cplx{0.5, 0}}, dict1, 50000, 42);
        CHECK(est.value ==
              Approx(exact_kappa_reference(ReferenceDomain::disc(1.0), {cplx{0.5, 0}}))
                  .epsilon(0.01));
    }

    SECTION("complex evaluation point") {
        const cplx z{0.3, 0.2};
        const auto est = gram_kappa(ReferenceDomain::disc(1.0), {z}, dict1, 50000, 42);
        CHECK(est.value ==
              Approx(exact_kappa_reference(ReferenceDomain::disc(1.0), {z})).epsilon(0.01));
    }

    SECTION("bidisc and ball centers") {
        const auto bidisc = gram_kappa(ReferenceDomain::polydisc({1.0, 1.0}),
                                       {cplx{0, 0}, cplx{0, 0}}, dict2, 50000, 42);
        CHECK(bidisc.value == Approx(1.0 / (pi * pi)).epsilon(0.01));
        const auto ball = gram_kappa(ReferenceDomain::ball(2, 1.0), {cplx{0, 0}, cplx{0, 0}},
                                     dict2, 50000, 42);
        CHECK(ball.value == Approx(2.0 / (pi * pi)).epsilon(0.01));
    }
}

TEST_CASE("gram estimate mechanics", "[oracle]") {
    SECTION("subspace value is non-decreasing under degree refinement") {
        double prev = -1.0;
        for (int d = 0; d <= 6; ++d) {
            const auto est = gram_kappa(ReferenceDomain::disc(1.0), {cplx{0.5, 0}},
                                        Dictionary::total_degree(1, d), 20000, 42);
            CHECK(est.value >= prev * (1.0 - 1e-12));
            prev = est.value;
        }
    }

    SECTION("identical seeds give bit-identical estimates") {
        const auto a = gram_kappa(ReferenceDomain::disc(1.0), {cplx{0.5, 0}},
                                  Dictionary::total_degree(1, 6), 20000, 7);
        const auto b = gram_kappa(ReferenceDomain::disc(1.0), {cplx{0.5, 0}},
                                  Dictionary::total_degree(1, 6), 20000, 7);
        CHECK(a.value == b.value);
        CHECK(a.std_error == b.std_error);
        CHECK(a.condition_diag == b.condition_diag);
    }

    SECTION("spectral cutoff above the spectrum reports a degenerate dictionary") {
        CHECK_THROWS_AS(gram_kappa(ReferenceDomain::disc(1.0), {cplx{0.5, 0}},
                                   Dictionary::total_degree(1, 4), 20000, 7, 2.0),
                        DegenerateDictionaryError);
    }

    SECTION("tiny acceptance rate raises a sampling error") {
        const auto steep = make_domain({Block{1, ProfileFunction::power(2.0, 1e5)}});
        const auto dict = Dictionary::total_degree(2, 2);
        CHECK_THROWS_AS(gram_kappa(steep, radial_point(steep, 1e-3), dict, 20000, 3),
                        SamplingError);
    }

    SECTION("budget validation") {
        CHECK_THROWS_AS(gram_kappa(ReferenceDomain::disc(1.0), {cplx{0, 0}},
                                   Dictionary::total_degree(1, 2), 100, 1),
                        ValidationError);
    }
}

TEST_CASE("model-domain gram stays below the certified upper bound", "[oracle]") {
    const auto dom = make_domain({Block{1, ProfileFunction::power(4.0)}});
    const auto app = make_radial_approach({2.0}, 2.0);
    const auto dict = Dictionary::total_degree(2, 8);
    for (double t : {1e-2, 3e-3}) {
        const Point z = radial_point(dom, t);
        const auto est = gram_kappa(dom, z, dict, 100000, 42);
        const double ku = kappa_upper(dom, app, z);
        INFO("t=" << t << " gram=" << est.value << " kappa_upper=" << ku);
        CHECK(est.value > 0.0);
        CHECK(est.value <= ku * (1.0 + 3.0 * est.std_error / est.value));
    }
}

TEST_CASE("transformation rule", "[oracle]") {
    SECTION("closed forms transform exactly") {
        CHECK(transformation_check(ReferenceDomain::disc(1.0), {2.0}, {cplx{0, 0}}) <= 1e-14);
        CHECK(transformation_check(ReferenceDomain::polydisc({1.0, 1.0}), {2.0, 3.0},
                                   {cplx{0, 0}, cplx{0, 0}}) <= 1e-14);
        CHECK(transformation_check(ReferenceDomain::disc(1.0), {2.0}, {cplx{0.3, 0.1}}) <= 1e-14);
    }

    SECTION("sampled bidisc discrepancy within three standard errors") {
        const auto dict2 = Dictionary::total_degree(2, 8);
        const auto check = transformation_check_gram(ReferenceDomain::polydisc({1.0, 1.0}),
                                                     {2.0, 3.0}, {cplx{0.3, 0}, cplx{0.1, 0}},
                                                     dict2, 50000, 42);
        INFO("discrepancy=" << check.discrepancy << " rel_se=" << check.rel_std_error);
        CHECK(check.discrepancy <= 3.0 * check.rel_std_error);
    }

    SECTION("non-uniform ball scaling is rejected") {
        CHECK_THROWS_AS(transformation_check(ReferenceDomain::ball(2, 1.0), {2.0, 3.0},
                                             {cplx{0, 0}, cplx{0, 0}}),
                        ValidationError);
    }
}
