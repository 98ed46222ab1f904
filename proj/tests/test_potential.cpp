#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gapfield/potential.hpp>
#include <gapfield/stats.hpp>

#include <cmath>

using namespace gapfield;

TEST_CASE("fundamental solution") {
    CHECK(fundamental_solution({1.0, 0.0}, {0.0, 0.0}) == 0.0);
    CHECK(fundamental_solution({std::exp(1.0), 0.0}, {0.0, 0.0}) ==
          doctest::Approx(1.0 / (2 * M_PI)).epsilon(1e-14));
    for (int k = 0; k < 16; ++k) {
        const double t = 2 * M_PI * k / 16.0;
        CHECK(fundamental_solution({0.3 * std::cos(t), 0.3 * std::sin(t)}, {0, 0}) ==
              doctest::Approx(std::log(0.3) / (2 * M_PI)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(fundamental_solution({0.5, 0.5}, {0.5, 0.5}), std::domain_error);
}

TEST_CASE("dipole field and the exact gradient-magnitude identity") {
    const Dipole dip = make_dipole(0.0, {1.0, 0.0});
    // |grad u0| = 1/(2 pi |x-p|^2) at |x-p| = 1
    CHECK(dipole_gradient({1.0, 0.0}, dip).norm() ==
          doctest::Approx(1.0 / (2 * M_PI)).epsilon(1e-14));
    // a perpendicular to x-p kills the potential
    CHECK(dipole_potential({0.0, 0.4}, dip) == 0.0);
    // |grad u0| = (8/pi) eps^-2 at |x-p| = eps/4
    const double eps = 0.01;
    CHECK(dipole_gradient({eps / 4.0, 0.0}, dip).norm() ==
          doctest::Approx(8.0 / M_PI / (eps * eps)).epsilon(1e-13));

    Rng rng(17);
    for (int i = 0; i < 300; ++i) {
        const Vec2 x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const double r2 = x.norm2();
        if (r2 < 1e-4) continue;
        const double prod = dipole_gradient(x, dip).norm() * 2.0 * M_PI * r2;
        CHECK(std::abs(prod - 1.0) < 1e-14);
    }
}

TEST_CASE("q: boundary constancy, antisymmetry, axis zero") {
    const TwoDiskConfig cfg = make_config(0.1);
    const QFunction qf = make_q(cfg);
    CHECK(qf.qd2 == doctest::Approx(0.050121831715514398).epsilon(1e-14));

    // zero on the symmetry axis
    CHECK(q_value({0.0, 0.3}, qf) == doctest::Approx(0.0).epsilon(1e-16));

    double mean = 0.0, var = 0.0;
    std::vector<double> vals;
    for (int k = 0; k < 64; ++k) {
        const double t = 2 * M_PI * (k + 0.25) / 64.0;
        const double v =
            q_value(cfg.center2 + Vec2{std::cos(t), std::sin(t)}, qf);
        vals.push_back(v);
        mean += v / 64.0;
    }
    for (double v : vals) var += (v - mean) * (v - mean) / 64.0;
    CHECK(std::sqrt(var) < 1e-12);              // constancy
    CHECK(mean == doctest::Approx(qf.qd2).epsilon(1e-13)); // the recorded value

    // q|dD1 = -q|dD2
    for (int k = 0; k < 16; ++k) {
        const double t = 2 * M_PI * k / 16.0;
        const Vec2 on1 = cfg.center1 + Vec2{std::cos(t), std::sin(t)};
        const Vec2 on2 = cfg.center2 + Vec2{std::cos(t), std::sin(t)};
        CHECK(q_value(on1, qf) == doctest::Approx(-q_value(on2, qf)).epsilon(1e-12));
    }

    // q antisymmetric in x1, symmetric in x2
    CHECK(q_value({0.2, 0.4}, qf) == doctest::Approx(-q_value({-0.2, 0.4}, qf)));
    CHECK(q_value({0.2, 0.4}, qf) == doctest::Approx(q_value({0.2, -0.4}, qf)));
}

TEST_CASE("q boundary constancy across the sweep") {
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const TwoDiskConfig cfg = make_config(eps);
        const QFunction qf = make_q(cfg);
        for (int j = 1; j <= 2; ++j) {
            double lo = 1e300, hi = -1e300;
            for (int k = 0; k < 64; ++k) {
                const double t = 2 * M_PI * (k + 0.3) / 64.0;
                const double v =
                    q_value(cfg.center(j) + Vec2{std::cos(t), std::sin(t)}, qf);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            CHECK(hi - lo < 1e-12);
        }
    }
}

TEST_CASE("q_flux returns (-1)^j") {
    const QFunction qf = make_q(make_config(0.1));
    const double f1 = q_flux(qf, 1, 256);
    const double f2 = q_flux(qf, 2, 256);
    CHECK(f1 == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(f2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f1 + f2) < 1e-12);
}

TEST_CASE("green identity for harmonic polynomials") {
    const TwoDiskConfig cfg = make_config(0.1);
    const QFunction qf = make_q(cfg);
    const std::vector<std::function<double(Vec2)>> harmonics = {
        [](Vec2) { return 1.0; },
        [](Vec2 v) { return v.x; },
        [](Vec2 v) { return v.y; },
        [](Vec2 v) { return v.x * v.x - v.y * v.y; },
        [](Vec2 v) { return 2.0 * v.x * v.y; },
    };
    for (int j = 1; j <= 2; ++j)
        for (const auto& h : harmonics) {
            const GreenIdentity gi = green_identity_check(qf, h, j, 256);
            CHECK(std::abs(gi.lhs - gi.rhs) < 1e-12);
        }
    // rhs closed form for v = x1, j = 2 is the x-coordinate of e2
    const GreenIdentity gi =
        green_identity_check(qf, [](Vec2 v) { return v.x; }, 2, 256);
    CHECK(gi.rhs == doctest::Approx(0.32015621187164243).epsilon(1e-14));
    // v = x2 vanishes at the foci
    CHECK(green_identity_check(qf, [](Vec2 v) { return v.y; }, 1, 256).rhs == 0.0);
}

TEST_CASE("green identity error decays spectrally in N") {
    const QFunction qf = make_q(make_config(0.1));
    auto h = [](Vec2 v) { return v.x * v.x - v.y * v.y; };
    const double e64 = std::abs(green_identity_check(qf, h, 2, 64).lhs -
                                green_identity_check(qf, h, 2, 64).rhs);
    const double e256 = std::abs(green_identity_check(qf, h, 2, 256).lhs -
                                 green_identity_check(qf, h, 2, 256).rhs);
    CHECK(e256 <= 1e-6 * std::max(e64, 1e-30) + 1e-15);
}

TEST_CASE("potential gap closed form") {
    const TwoDiskConfig cfg = make_config(0.1);
    SUBCASE("a = (1,0), p = 0") {
        const double gap = potential_gap(cfg, make_dipole(0.0, {1.0, 0.0}));
        CHECK(gap == doctest::Approx(1.0 / (M_PI * cfg.alpha)).epsilon(1e-14));
        CHECK(gap == doctest::Approx(0.99423304743313244).epsilon(1e-14));
    }
    SUBCASE("a = (0,1), p = 0 vanishes by symmetry") {
        CHECK(potential_gap(cfg, make_dipole(0.0, {0.0, 1.0})) == 0.0);
    }
    SUBCASE("magnitude scaling |gap| ~ |a1| sqrt(eps)/(eps + p^2)") {
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            const TwoDiskConfig c = make_config(eps);
            for (double pf : {0.0, 0.5, 1.0}) {
                const double p = pf * std::sqrt(eps);
                const double gap = potential_gap(c, make_dipole(p, {1.0, 0.0}));
                const double ratio = std::abs(gap) * (eps + p * p) / std::sqrt(eps);
                CHECK(ratio > 0.05);
                CHECK(ratio < 5.0);
            }
        }
    }
}

TEST_CASE("coefficient c closed form") {
    const TwoDiskConfig cfg = make_config(0.1);
    CHECK(coefficient_c(cfg, make_dipole(0.0, {1.0, 0.0})).c ==
          doctest::Approx(9.9181635367626017).epsilon(1e-13));
    CHECK(coefficient_c(cfg, make_dipole(0.0, {0.0, 1.0})).c == 0.0);
}

TEST_CASE("grad q magnitude envelope on B_1/2") {
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const TwoDiskConfig cfg = make_config(eps);
        const QFunction qf = make_q(cfg);
        Rng rng(23);
        int checked = 0;
        while (checked < 400) {
            const Vec2 x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
            if (x.norm() >= 0.5 || gap_distance(cfg, x) <= 1e-6) continue;
            if (dist(x, cfg.e1) < 1e-3 || dist(x, cfg.e2) < 1e-3) continue;
            const double ratio =
                q_gradient(x, qf).norm() * (eps + x.y * x.y) / std::sqrt(eps);
            CHECK(ratio >= 1.0 / 20.0);
            CHECK(ratio <= 20.0);
            ++checked;
        }
    }
}

TEST_CASE("mirror image chain shrinks and flattens") {
    const TwoDiskConfig cfg = make_config(0.1);
    const Dipole dip = make_dipole(0.0, {1.0, 0.0});
    const auto imgs = mirror_images(cfg, dip, 1e-11);
    CHECK(imgs.size() > 10);
    CHECK(imgs.back().moment.norm() < 1e-11);
    // emitter + images have nearly constant trace on each circle
    for (int j = 1; j <= 2; ++j) {
        double lo = 1e300, hi = -1e300;
        for (int k = 0; k < 64; ++k) {
            const double t = 2 * M_PI * k / 64.0;
            const Vec2 x = cfg.center(j) + Vec2{std::cos(t), std::sin(t)};
            const double v = dipole_potential(x, dip) + images_potential(imgs, x);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi - lo < 1e-10);
    }
}
