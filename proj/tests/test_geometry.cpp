#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "bergamot/domain.hpp"

using namespace bergamot;
using Catch::Approx;
using cplx = std::complex<double>;

namespace {

DomainDescriptor quartic_plane() {
    return make_domain({Block{1, ProfileFunction::power(4.0)}});
}

Point c2_point(double z1_re, double z1_im, double zn_re, double zn_im = 0.0) {
    Point z;
    z.block_parts = {{cplx{z1_re, z1_im}}};
    z.z_n = {zn_re, zn_im};
    return z;
}

} // namespace

TEST_CASE("rho evaluation and membership", "[geometry]") {
    const auto dom = quartic_plane();

    CHECK(rho_eval(dom, c2_point(0.0, 0.0, 0.01)) == Approx(-0.01));
    CHECK(rho_eval(dom, c2_point(0.1, 0.0, 0.0)) == Approx(1e-4));
    CHECK(rho_eval(dom, c2_point(0.1, 0.0, 1e-4)) == Approx(0.0).margin(1e-18));

    CHECK(contains(dom, c2_point(0.0, 0.0, 0.01)));
    CHECK_FALSE(contains(dom, c2_point(0.1, 0.0, 5e-5)));
    CHECK_FALSE(contains(dom, c2_point(0.1, 0.0, 1e-4))); // open domain

    CHECK_THROWS_AS(rho_eval(dom, c2_point(1.2, 0.0, 0.01)), RangeError);
}

TEST_CASE("approach region membership", "[geometry]") {
    const auto dom = quartic_plane();
    const auto app = make_radial_approach({2.0}, 2.0);

    SECTION("radial axis is always inside") {
        for (double t : {1e-6, 1e-3, 0.04})
            CHECK(gamma_contains(dom, app, c2_point(0.0, 0.0, t)));
    }

    SECTION("arithmetic cases: k beta f(alpha |z1|) = 2 (0.2)^4 = 0.0032") {
        CHECK(gamma_contains(dom, app, c2_point(0.1, 0.0, 0.01)));
        CHECK_FALSE(gamma_contains(dom, app, c2_point(0.1, 0.0, 0.003)));
    }

    SECTION("alpha scaling beyond the profile cap") {
        CHECK_THROWS_AS(gamma_contains(dom, app, c2_point(0.6, 0.0, 0.01)), RangeError);
    }

    SECTION("membership is monotone when alpha and beta shrink") {
        const auto tighter = make_radial_approach({1.5}, 1.5);
        for (int i = 0; i <= 20; ++i) {
            for (int j = 1; j <= 20; ++j) {
                const Point z = c2_point(0.25 * i / 20.0, 0.0, 0.05 * j / 20.0);
                if (gamma_contains(dom, app, z)) CHECK(gamma_contains(dom, tighter, z));
            }
        }
    }

    SECTION("cone points lie inside the domain when k beta >= 1") {
        for (int i = 0; i <= 20; ++i) {
            for (int j = 1; j <= 20; ++j) {
                const Point z = c2_point(0.25 * i / 20.0, 0.1 * i / 20.0, 0.05 * j / 20.0);
                if (gamma_contains(dom, app, z)) CHECK(contains(dom, z));
            }
        }
    }
}

TEST_CASE("approach paths", "[geometry]") {
    const auto dom = quartic_plane();
    const auto app = make_radial_approach({2.0}, 2.0);

    SECTION("radial path") {
        const Point z = approach_point(dom, app, 1e-3);
        CHECK(z.block_parts[0][0] == cplx{0.0, 0.0});
        CHECK(z.z_n == cplx{1e-3, 0.0});
    }

    SECTION("t at or beyond the truncation") {
        CHECK_THROWS_AS(approach_point(dom, app, 1.0), RangeError);
        CHECK_THROWS_AS(approach_point(dom, app, -0.1), RangeError);
    }

    SECTION("slanted path z(t) = ((t/(4 k beta))^(1/m) u, t) for f = x^m") {
        const auto sq_dom = make_domain({Block{1, ProfileFunction::power(2.0)}});
        auto slanted = [](double kb) {
            return [kb](const DomainDescriptor& d, double t) {
                Point z = radial_point(d, t);
                z.block_parts[0][0] = std::sqrt(t / (4.0 * kb));
                return z;
            };
        };
        // f(alpha |z1|) = alpha^m t / (4 k beta): inside iff alpha^m < 4
        ApproachSpec inside = make_radial_approach({1.9}, 2.0);
        inside.path = slanted(1.0 * inside.beta);
        CHECK_NOTHROW(approach_point(sq_dom, inside, 1e-3));

        ApproachSpec outside = make_radial_approach({2.1}, 2.0);
        outside.path = slanted(1.0 * outside.beta);
        CHECK_THROWS_AS(approach_point(sq_dom, outside, 1e-3), PathError);
    }
}

TEST_CASE("polydisc construction", "[geometry]") {
    const auto dom = quartic_plane();
    const auto app = make_radial_approach({2.0}, 2.0);
    const Point z = c2_point(0.0, 0.0, 0.01);

    SECTION("radii from the profile inverse") {
        const auto region = polydisc_build(dom, app, z);
        CHECK(region.block_radii[0] == Approx(0.5 * std::pow(0.005, 0.25)).epsilon(1e-12));
        CHECK(region.normal_radius == Approx(0.005).epsilon(1e-14));
    }

    SECTION("normal radius grows with beta") {
        double prev = 0.0;
        for (double beta : {1.5, 2.0, 4.0, 16.0}) {
            const auto region = polydisc_build(dom, make_radial_approach({2.0}, beta), z);
            CHECK(region.normal_radius > prev);
            prev = region.normal_radius;
        }
        CHECK(prev < 0.01); // (beta-1)/beta t stays below t
    }

    SECTION("cone and threshold preconditions") {
        CHECK_THROWS_AS(polydisc_build(dom, app, c2_point(0.1, 0.0, 0.003)), NotInConeError);
        CHECK_THROWS_AS(polydisc_build(dom, app, c2_point(0.0, 0.0, 0.06)), NotInConeError);
    }
}

TEST_CASE("polydisc volume", "[geometry]") {
    PolydiscRegion unit;
    unit.block_dims = {1};
    unit.block_radii = {1.0};
    unit.normal_radius = 1.0;
    CHECK(polydisc_volume(unit) == Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-14));

    PolydiscRegion ball2;
    ball2.block_dims = {2};
    ball2.block_radii = {1.0};
    ball2.normal_radius = 1.0;
    CHECK(polydisc_volume(ball2) ==
          Approx(std::pow(std::numbers::pi, 3) / 2.0).epsilon(1e-14)); // pi * (pi^2/2!)

    SECTION("example region") {
        const auto dom = quartic_plane();
        const auto app = make_radial_approach({2.0}, 2.0);
        const auto region = polydisc_build(dom, app, c2_point(0.0, 0.0, 0.01));
        const double r1 = 0.5 * std::pow(0.005, 0.25);
        CHECK(polydisc_volume(region) ==
              Approx(std::pow(std::numbers::pi, 2) * r1 * r1 * 0.005 * 0.005).epsilon(1e-12));
    }

    SECTION("doubling all radii scales the volume by 2^(2n)") {
        PolydiscRegion r;
        r.block_dims = {1, 2};
        r.block_radii = {0.3, 0.2};
        r.normal_radius = 0.1;
        const double v1 = polydisc_volume(r);
        for (auto& x : r.block_radii) x *= 2.0;
        r.normal_radius *= 2.0;
        const int n = 4; // 1 + 1 + 2
        CHECK(polydisc_volume(r) == Approx(v1 * std::pow(2.0, 2 * n)).epsilon(1e-12));
    }
}

TEST_CASE("polydisc inclusion sampling", "[geometry]") {
    const auto dom = quartic_plane();
    const auto app = make_radial_approach({2.0}, 2.0);

    SECTION("compliant regions stay inside") {
        int case_id = 0;
        for (double t : {1e-2, 1e-4, 1e-8}) {
            const Point z = approach_point(dom, app, t);
            const auto region = polydisc_build(dom, app, z);
            const double max_rho = polydisc_inclusion_check(dom, region, 20000, 91 + case_id++);
            CHECK(max_rho < 0.0);
        }
    }

    SECTION("two-block mixed domain") {
        const auto mixed = make_domain(
            {Block{1, ProfileFunction::power(2.0)}, Block{1, ProfileFunction::exp_flat(1.0)}});
        const auto app2 = make_radial_approach({2.0, 1.5}, 2.0);
        const Point z = approach_point(mixed, app2, 1e-3);
        const auto region = polydisc_build(mixed, app2, z);
        CHECK(polydisc_inclusion_check(mixed, region, 20000, 7) < 0.0);
    }

    SECTION("inflating the normal radius breaks inclusion") {
        const Point z = approach_point(dom, app, 1e-2);
        auto region = polydisc_build(dom, app, z);
        region.normal_radius *= app.beta / (app.beta - 1.0) * 1.5;
        CHECK(polydisc_inclusion_check(dom, region, 20000, 17) > 0.0);
    }
}

TEST_CASE("extended domains", "[geometry]") {
    SECTION("real-block layout of a mixed C^3 boundary") {
        // Re z_3 > exp(-1/[(Re z_1)^2 + (Im z_2)^2]) + (Re z_2)^4 + (Im z_1)^2
        const auto dom = make_extended_domain(
            {ExtendedBlock{2, ProfileFunction::exp_flat(2.0), {0, 3}},
             ExtendedBlock{1, ProfileFunction::power(4.0), {2}},
             ExtendedBlock{1, ProfileFunction::power(2.0), {1}}});
        Point z;
        z.block_parts = {{cplx{0.0, 0.1}, cplx{0.1, 0.0}}};
        z.z_n = {0.5, 0.0};
        CHECK(extended_rho_eval(dom, z) == Approx(1e-4 + 1e-2 - 0.5).epsilon(1e-12));
    }

    SECTION("all-zero tangential coordinates") {
        const auto dom = make_extended_domain({ExtendedBlock{1, ProfileFunction::power(2.0)},
                                               ExtendedBlock{1, ProfileFunction::power(2.0)}});
        Point z;
        z.block_parts = {{cplx{0.0, 0.0}}};
        z.z_n = {0.02, 0.0};
        CHECK(extended_rho_eval(dom, z) == Approx(-0.02));
    }

    SECTION("aligned real blocks reduce to the complex form") {
        const auto ext = make_extended_domain({ExtendedBlock{2, ProfileFunction::power(2.0)}});
        const auto dom = make_domain({Block{1, ProfileFunction::power(2.0)}});
        for (double re : {0.0, 0.2, -0.3}) {
            for (double im : {0.0, 0.1}) {
                const Point z = c2_point(re, im, 0.04);
                CHECK(extended_rho_eval(ext, z) == Approx(rho_eval(dom, z)).epsilon(1e-14));
            }
        }
    }

    SECTION("validation") {
        CHECK_THROWS_AS(make_extended_domain({ExtendedBlock{1, ProfileFunction::power(2.0)}}),
                        ValidationError); // odd real dimension
        CHECK_THROWS_AS(
            make_extended_domain({ExtendedBlock{1, ProfileFunction::power(2.0), {0}},
                                  ExtendedBlock{1, ProfileFunction::power(2.0), {0}}}),
            ValidationError); // coords collide
    }
}
