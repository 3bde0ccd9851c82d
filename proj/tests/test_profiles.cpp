#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "bergamot/profile.hpp"
#include "bergamot/rng.hpp"

using namespace bergamot;
using Catch::Approx;

TEST_CASE("profile evaluation matches the closed forms", "[profiles]") {
    const auto quartic = ProfileFunction::power(4.0);
    const auto flat = ProfileFunction::exp_flat(1.0);

    CHECK(quartic.eval(0.5) == 0.0625);
    CHECK(flat.eval(0.5) == Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(quartic.eval(0.0) == 0.0);
    CHECK(flat.eval(0.0) == 0.0);
    CHECK(ProfileFunction::custom([](double x) { return x * x * x + x; }).eval(0.0) == 0.0);

    CHECK_THROWS_AS(quartic.eval(1.5), RangeError);
    CHECK_THROWS_AS(quartic.eval(-0.1), RangeError);
}

TEST_CASE("profile inversion", "[profiles]") {
    const auto quartic = ProfileFunction::power(4.0);
    const auto flat = ProfileFunction::exp_flat(1.0);
    const auto cubic = ProfileFunction::custom([](double x) { return x * x * x + x; });

    SECTION("closed forms") {
        CHECK(quartic.inverse(0.0625) == Approx(0.5).epsilon(1e-14));
        CHECK(flat.inverse(std::exp(-2.0)) == Approx(0.5).epsilon(1e-14));
        CHECK(quartic.inverse(0.0) == 0.0);
    }

    SECTION("roundtrip eval(inverse(t)) = t for 100 random draws") {
        Rng rng(2024);
        for (const auto* p : {&quartic, &flat, &cubic}) {
            const double top = p->eval(p->domain_cap());
            for (int i = 0; i < 100; ++i) {
                const double t = top * std::pow(rng.next_double(), 3.0); // bias toward 0
                if (t == 0.0) continue;
                const double x = p->inverse(t);
                CHECK(p->eval(x) == Approx(t).epsilon(1e-12));
            }
        }
    }

    SECTION("inverse is strictly increasing in t") {
        for (const auto* p : {&quartic, &flat, &cubic}) {
            const double top = p->eval(p->domain_cap());
            double prev = -1.0;
            for (int i = 1; i <= 64; ++i) {
                const double x = p->inverse(top * i / 64.0);
                CHECK(x > prev);
                prev = x;
            }
        }
    }

    SECTION("errors") {
        CHECK_THROWS_AS(quartic.inverse(1.5), RangeError);
        const auto wiggly = ProfileFunction::custom(
            [](double x) { return x + 0.5 * std::sin(2.0 * std::numbers::pi * x); });
        CHECK_THROWS_AS(wiggly.inverse(0.3), InvalidProfileError);
    }
}

TEST_CASE("lambda transform and its inverse", "[profiles]") {
    SECTION("exp-flat identity lambda(x) = x^p") {
        for (double p : {0.5, 1.0, 2.0}) {
            const auto f = ProfileFunction::exp_flat(p);
            for (int i = 1; i <= 40; ++i) {
                const double x = 0.9 * i / 40.0;
                CHECK(f.lambda(x) == Approx(std::pow(x, p)).epsilon(1e-12));
            }
        }
        CHECK(ProfileFunction::exp_flat(1.0).lambda(0.3) == Approx(0.3).epsilon(1e-14));
        CHECK(ProfileFunction::exp_flat(2.0).lambda(0.5) == Approx(0.25).epsilon(1e-14));
    }

    SECTION("power profile") {
        const auto sq = ProfileFunction::power(2.0);
        CHECK(sq.lambda(std::exp(-1.0)) == Approx(0.5).epsilon(1e-13));
        CHECK(sq.lambda(0.0) == 0.0);
        CHECK_THROWS_AS(sq.lambda(1.0), RangeError); // f(1) = 1
    }

    SECTION("lambda_inverse solves lambda(x) = t") {
        const auto sq = ProfileFunction::power(2.0);
        const auto flat = ProfileFunction::exp_flat(2.0);
        const auto cubic = ProfileFunction::custom([](double x) { return 0.5 * x * x * x; });
        for (const auto* p : {&sq, &flat, &cubic}) {
            for (int i = 1; i <= 20; ++i) {
                const double x = 0.4 * i / 20.0;
                const double t = p->lambda(x);
                CHECK(p->lambda_inverse(t) == Approx(x).epsilon(1e-9));
            }
        }
    }

    SECTION("identity f^-1(s) = lambda_inverse(-1/log s)") {
        const auto flat = ProfileFunction::exp_flat(1.0);
        for (double s : {1e-12, 1e-6, 1e-3, 0.05}) {
            CHECK(flat.inverse(s) ==
                  Approx(flat.lambda_inverse(-1.0 / std::log(s))).epsilon(1e-12));
        }
    }
}

TEST_CASE("doubling certificates", "[profiles]") {
    SECTION("exp-flat doubling constant is 2^(1/p)") {
        struct Case {
            double p, big_r, sigma;
        };
        for (const Case& c : {Case{1.0, 0.1, 2.0}, Case{2.0, 0.1, std::sqrt(2.0)},
                              Case{0.5, 0.05, 4.0}}) {
            const auto f = ProfileFunction::exp_flat(c.p);
            const auto cert = doubling_constant(f, c.big_r, 256);
            CHECK(cert.sigma == Approx(c.sigma).margin(1e-6));
            CHECK(cert.max_violation <= 0.0);
            // fresh denser grid never finds a violation above 1e-12
            CHECK(detail::doubling_violation(f, cert.sigma, c.big_r, 4 * cert.grid_size) <=
                  1e-12);
        }
    }

    SECTION("power profiles are not lambda-doubling near zero") {
        CHECK_THROWS_AS(doubling_constant(ProfileFunction::power(2.0), 0.1, 64),
                        NotDoublingError);
    }

    SECTION("input validation") {
        CHECK_THROWS_AS(doubling_constant(ProfileFunction::exp_flat(1.0), 0.1, 16),
                        ValidationError);
        CHECK_THROWS_AS(doubling_constant(ProfileFunction::exp_flat(1.0), -0.1, 64), RangeError);
    }
}

TEST_CASE("doubling ratio bound", "[profiles]") {
    SECTION("exp-flat p=1 closed forms") {
        const auto f = ProfileFunction::exp_flat(1.0);
        // lambda_inverse(t) = t, so the ratio is 2^m - 1 exactly
        CHECK(lemma31_ratio(f, 1.0, 0.05, 256) == Approx(1.0).epsilon(1e-12));
        CHECK(lemma31_ratio(f, 2.0, 0.05, 256) == Approx(3.0).epsilon(1e-12));
    }

    SECTION("exp-flat p=2, m=2 attains sigma^m - 1") {
        const auto f = ProfileFunction::exp_flat(2.0);
        const auto cert = doubling_constant(f, 0.1, 256);
        const double c = lemma31_ratio(f, 2.0, 0.01, 256);
        CHECK(c <= cert.sigma * cert.sigma - 1.0 + 1e-9);
        CHECK(c == Approx(1.0).epsilon(1e-9)); // lambda_inverse(t) = sqrt(t)
    }

    SECTION("bound C <= sigma^m - 1 for certified profiles") {
        for (double p : {0.5, 1.0, 2.0}) {
            const auto f = ProfileFunction::exp_flat(p);
            const double big_r = (p == 0.5) ? 0.05 : 0.1;
            const auto cert = doubling_constant(f, big_r, 256);
            const double t_top = f.lambda(big_r / cert.sigma);
            for (double m : {1.0, 2.0, 4.0}) {
                const double c = lemma31_ratio(f, m, t_top, 256);
                CHECK(c <= std::pow(cert.sigma, m) - 1.0 + 1e-9);
            }
        }
    }
}

TEST_CASE("profile classification", "[profiles]") {
    SECTION("exact power law") {
        const auto rep = classify(ProfileFunction::power(4.0));
        REQUIRE(rep.kind == TypeReport::Kind::FiniteType);
        CHECK(rep.m_est == Approx(4.0).margin(1e-6));
        CHECK(rep.c_est == Approx(1.0).margin(1e-6));
    }

    SECTION("exp-flat is mildly infinite with sigma near 2") {
        const auto rep = classify(ProfileFunction::exp_flat(1.0));
        REQUIRE(rep.kind == TypeReport::Kind::MildlyInfinite);
        REQUIRE(rep.doubling.has_value());
        CHECK(rep.doubling->sigma == Approx(2.0).margin(1e-5));
    }

    SECTION("linear profile fails the m > 1 requirement") {
        const auto rep = classify(ProfileFunction::custom([](double x) { return x; }));
        CHECK(rep.kind == TypeReport::Kind::Unknown);
    }
}
