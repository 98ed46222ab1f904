#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gapfield/geometry.hpp>
#include <gapfield/stats.hpp>

#include <cmath>

using namespace gapfield;

TEST_CASE("make_config populates the coaxal data") {
    const TwoDiskConfig cfg = make_config(0.1);
    CHECK(cfg.center1.x == doctest::Approx(-1.05).epsilon(1e-15));
    CHECK(cfg.center2.x == doctest::Approx(1.05).epsilon(1e-15));
    CHECK(cfg.alpha == doctest::Approx(0.32015621187164243).epsilon(1e-15));
    CHECK(cfg.e2.x == doctest::Approx(0.32015621187164243).epsilon(1e-15));
    CHECK(cfg.e1.x == -cfg.e2.x);
    CHECK(std::cosh(cfg.tau0) == doctest::Approx(1.05).epsilon(1e-14));
    // e_j lies strictly inside D_j
    CHECK(dist(cfg.e1, cfg.center1) < 1.0);
    CHECK(dist(cfg.e2, cfg.center2) < 1.0);

    CHECK(make_config(0.5).alpha == doctest::Approx(0.75).epsilon(1e-15));
    // e_j -> origin as eps -> 0
    CHECK(make_config(1e-4).alpha < 0.011);
}

TEST_CASE("make_config rejects out-of-range gaps") {
    CHECK_THROWS_AS(make_config(0.0), std::domain_error);
    CHECK_THROWS_AS(make_config(-1.0), std::domain_error);
    CHECK_THROWS_AS(make_config(0.6), std::domain_error);
}

TEST_CASE("make_dipole validates direction and location") {
    CHECK_THROWS_AS(make_dipole(0.0, {1.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(make_dipole(0.6, {1.0, 0.0}), std::domain_error);
    CHECK_NOTHROW(make_dipole(0.3, {0.6, 0.8}));
}

TEST_CASE("invert_in_circle: fixed circle, involution, direct value") {
    const Vec2 c{-1.05, 0.0};
    // points on the circle are fixed
    const Vec2 on = c + Vec2{std::cos(0.7), std::sin(0.7)};
    CHECK(dist(invert_in_circle(on, c, 1.0), on) < 1e-14);
    // direct formula evaluation
    const Vec2 img = invert_in_circle({0.0, 0.0}, c, 1.0);
    CHECK(img.x == doctest::Approx(-0.09761904761904762).epsilon(1e-14));
    CHECK(img.y == 0.0);
    CHECK_THROWS_AS(invert_in_circle(c, c, 1.0), std::domain_error);

    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const Vec2 x{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        if (dist(x, c) < 1e-2) continue;
        const Vec2 back = invert_in_circle(invert_in_circle(x, c, 1.0), c, 1.0);
        CHECK(dist(back, x) < 1e-13);
    }
}

TEST_CASE("fixed_point_iterate converges to the closed-form foci") {
    SUBCASE("example at eps = 0.1") {
        const TwoDiskConfig cfg = make_config(0.1);
        const Vec2 e2 = fixed_point_iterate(cfg, {0.5, 0.3}, 1e-13, 2);
        CHECK(dist(e2, cfg.e2) < 1e-12);
        // applying the composed inversion once more moves it below tol
        const Vec2 once = invert_in_circle(
            invert_in_circle(e2, cfg.center1, 1.0), cfg.center2, 1.0);
        CHECK(dist(once, e2) < 1e-12);
    }
    SUBCASE("example at eps = 0.5 from the origin") {
        const TwoDiskConfig cfg = make_config(0.5);
        const Vec2 e2 = fixed_point_iterate(cfg, {0.0, 0.0}, 1e-14, 2);
        CHECK(dist(e2, Vec2{0.75, 0.0}) < 1e-13);
    }
    SUBCASE("acceptance sweep to 1e-10") {
        for (double eps : {0.5, 0.1, 0.01, 0.001}) {
            const TwoDiskConfig cfg = make_config(eps);
            CHECK(dist(fixed_point_iterate(cfg, {0.5, 0.3}, 1e-11, 2), cfg.e2) < 1e-10);
            CHECK(dist(fixed_point_iterate(cfg, {-0.5, 0.1}, 1e-11, 1), cfg.e1) < 1e-10);
        }
    }
}

TEST_CASE("phi_transform: direct value, involution, fixed unit circle") {
    CHECK(dist(phi_transform({2.0, 0.0}, {0.0, 0.0}), Vec2{0.5, 0.0}) < 1e-15);
    const Vec2 p{0.0, 0.1};
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const Vec2 y{rng.uniform(-4, 4), rng.uniform(-4, 4)};
        if (dist(y, p) < 1e-2) continue;
        CHECK(dist(phi_transform(phi_transform(y, p), p), y) < 1e-13);
    }
    const Vec2 onunit = p + Vec2{std::cos(1.2), std::sin(1.2)};
    CHECK(dist(phi_transform(onunit, p), onunit) < 1e-15);
    CHECK_THROWS_AS(phi_transform(p, p), std::domain_error);
}

TEST_CASE("transform_chain: eps*, p*, boundary image") {
    SUBCASE("eps* substitution example") {
        const TwoDiskConfig cfg = make_config(0.1);
        const Dipole dip = make_dipole(0.1, {1.0, 0.0});
        const TransformChain ch = transform_chain(cfg, dip);
        CHECK(ch.eps_star == doctest::Approx(1.0 / 0.1125).epsilon(1e-14));
        CHECK(ch.omega_radius == ch.eps_star);
    }
    SUBCASE("p = 0 gives p* = 0") {
        const TwoDiskConfig cfg = make_config(0.05);
        const TransformChain ch = transform_chain(cfg, make_dipole(0.0, {0.0, 1.0}));
        CHECK(ch.p_star.x == 0.0);
        CHECK(ch.p_star.y == 0.0);
    }
    SUBCASE("64 boundary samples of dD_j map onto dOmega_j") {
        for (double eps : {0.1, 0.01}) {
            const TwoDiskConfig cfg = make_config(eps);
            const Dipole dip = make_dipole(std::sqrt(eps), {1.0, 0.0});
            const TransformChain ch = transform_chain(cfg, dip);
            for (int j = 1; j <= 2; ++j) {
                const Vec2 oc = j == 1 ? ch.omega_center1 : ch.omega_center2;
                for (int k = 0; k < 64; ++k) {
                    const double t = 2 * M_PI * k / 64.0;
                    const Vec2 y = cfg.center(j) + Vec2{std::cos(t), std::sin(t)};
                    const double off =
                        std::abs(dist(phi_transform(y, dip.p), oc) - ch.omega_radius);
                    CHECK(off / ch.omega_radius < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("bipolar coordinates") {
    const TwoDiskConfig cfg = make_config(0.1);
    SUBCASE("disk boundaries are the lines tau = +-tau0") {
        for (int k = 0; k < 32; ++k) {
            const double t = 2 * M_PI * (k + 0.4) / 32.0;
            const Vec2 on2 = cfg.center2 + Vec2{std::cos(t), std::sin(t)};
            CHECK(bipolar_coords(on2, cfg).tau == doctest::Approx(cfg.tau0).epsilon(1e-12));
            const Vec2 on1 = cfg.center1 + Vec2{std::cos(t), std::sin(t)};
            CHECK(bipolar_coords(on1, cfg).tau ==
                  doctest::Approx(-cfg.tau0).epsilon(1e-12));
        }
    }
    SUBCASE("the perpendicular bisector is tau = 0, sigma sign follows x2") {
        CHECK(bipolar_coords({0.0, 0.7}, cfg).tau == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(bipolar_coords({0.0, 0.7}, cfg).sigma > 0.0);
        CHECK(bipolar_coords({0.0, -0.7}, cfg).sigma < 0.0);
        CHECK(bipolar_coords({0.0, 1e-9}, cfg).sigma <= M_PI);
    }
    SUBCASE("focus limit: tau blows up") {
        CHECK(bipolar_coords(cfg.e2 + Vec2{1e-8, 0.0}, cfg).tau > 10.0);
        CHECK_THROWS_AS(bipolar_coords(cfg.e2, cfg), std::domain_error);
    }
    SUBCASE("round trip") {
        Rng rng(3);
        for (int i = 0; i < 200; ++i) {
            const Vec2 x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            if (dist(x, cfg.e1) < 1e-3 || dist(x, cfg.e2) < 1e-3) continue;
            const Vec2 back = bipolar_to_point(bipolar_coords(x, cfg), cfg);
            CHECK(dist(back, x) < 1e-12);
        }
    }
}
