#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "zeno/model.hpp"
#include "zeno/rng.hpp"

using namespace zeno;

namespace {

// Fig.-3-style reference noise used throughout the suites.
NoiseCovariance reference_noise() {
    NoiseCovariance g;
    g.g11 = 0.05;
    g.g22 = 0.1;
    g.g33 = 1.0;
    g.g23 = 0.3;
    return g;
}

ModelParams make_params(double omega, double alpha, NoiseCovariance g = {}) {
    ModelParams p;
    p.omega = omega;
    p.alpha = alpha;
    p.gamma = g;
    return p;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = a + (b - a) * i / double(n - 1);
    xs.back() = b;
    return xs;
}

// Random PSD covariance in a given variant's exactness regime.
NoiseCovariance random_noise(CounterRng& rng, Variant v) {
    NoiseCovariance g;
    if (v == Variant::noiseless) return g;
    g.g11 = 0.5 * rng.uniform01();
    g.g22 = 0.5 * rng.uniform01();
    g.g33 = 0.5 * rng.uniform01();
    if (v == Variant::full || v == Variant::montecarlo) {
        g.g23 = (2.0 * rng.uniform01() - 1.0) * 0.9 * std::sqrt(g.g22 * g.g33);
    }
    if (v == Variant::montecarlo) {
        g.g12 = (2.0 * rng.uniform01() - 1.0) * 0.1 * std::sqrt(g.g11 * g.g22);
    }
    return g;
}

}  // namespace

TEST_CASE("noise covariance validation") {
    CHECK_NOTHROW(validate_noise_covariance(reference_noise()));
    CHECK_NOTHROW(validate_noise_covariance(NoiseCovariance{}));

    NoiseCovariance diag;
    diag.g11 = 0.05;
    diag.g22 = 0.1;
    diag.g33 = 1.0;
    CHECK_NOTHROW(validate_noise_covariance(diag));

    // 2x2 principal minor 0.1 * 1 - 0.9^2 < 0
    NoiseCovariance bad;
    bad.g22 = 0.1;
    bad.g33 = 1.0;
    bad.g23 = 0.9;
    CHECK_THROWS_AS(validate_noise_covariance(bad), NotPositiveSemidefinite);

    NoiseCovariance negative;
    negative.g22 = -0.1;
    CHECK_THROWS_AS(validate_noise_covariance(negative), NotPositiveSemidefinite);

    NoiseCovariance nan_entry;
    nan_entry.g12 = std::nan("");
    CHECK_THROWS_AS(validate_noise_covariance(nan_entry), NonFiniteEntry);
}

TEST_CASE("liouvillian entries") {
    SUBCASE("noiseless omega=1 alpha=10") {
        const Liouvillian liou = build_liouvillian(make_params(1.0, 10.0));
        Eigen::Matrix3d expected;
        expected << -5, 0, 0, 0, -5, -2, 0, 2, 0;
        CHECK((liou.matrix() - expected).cwiseAbs().maxCoeff() == 0.0);
        CHECK(liou.noise.isZero(0.0));
    }
    SUBCASE("all zero") {
        const Liouvillian liou = build_liouvillian(make_params(0.0, 0.0));
        CHECK(liou.matrix().isZero(0.0));
    }
    SUBCASE("reference noise part") {
        const Liouvillian liou = build_liouvillian(make_params(1.0, 0.0, reference_noise()));
        Eigen::Matrix3d expected;
        expected << -2.2, 0.0, 0.0,
                    0.0, -2.1, 0.6,
                    0.0, 0.6, -0.3;
        CHECK((liou.noise - expected).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("eigenvalues have non-positive real part") {
        CounterRng rng(2024, 0);
        for (int i = 0; i < 50; ++i) {
            const auto g = random_noise(rng, Variant::montecarlo);
            const auto liou =
                build_liouvillian(make_params(1.0, 16.0 * rng.uniform01(), g));
            const Eigen::EigenSolver<Eigen::Matrix3d> es(liou.matrix());
            CHECK(es.eigenvalues().real().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("propagation against the ode oracle") {
    SUBCASE("undriven z is frozen") {
        const Liouvillian liou = build_liouvillian(make_params(0.0, 3.7));
        const BlochState out = propagate_bloch(liou, BlochState{}, 2.5);
        CHECK(out.s.x() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(out.s.y() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(out.s.z() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("pure rotation by pi/2") {
        const Liouvillian liou = build_liouvillian(make_params(1.0, 0.0));
        const double t = 3.14159265358979323846 / 4.0;
        const BlochState out = propagate_bloch(liou, BlochState{}, t);
        CHECK(out.s.x() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(out.s.y() == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(std::abs(out.s.z()) < 1e-12);

        const std::vector<double> grid = {t};
        const auto ode = propagate_bloch_ode(liou, BlochState{}, grid, 1e-4);
        CHECK((out.s - ode[0].s).norm() < 1e-8);
    }
    SUBCASE("series fallback at the coalescent spectrum") {
        // alpha = 8 omega: defective Liouvillian, z(1) = 3 exp(-2)
        const Liouvillian liou = build_liouvillian(make_params(1.0, 8.0));
        const BlochState out = propagate_bloch(liou, BlochState{}, 1.0);
        CHECK(out.s.z() == doctest::Approx(3.0 * std::exp(-2.0)).epsilon(1e-10));

        const std::vector<double> grid = {1.0};
        const auto ode = propagate_bloch_ode(liou, BlochState{}, grid, 1e-6);
        CHECK((out.s - ode[0].s).norm() < 1e-8);
    }
    SUBCASE("spectral path accuracy away from exceptional points") {
        CounterRng rng(7, 0);
        int checked = 0;
        while (checked < 20) {
            const double alpha = 12.0 * rng.uniform01();
            const auto g = random_noise(rng, Variant::full);
            const double a_exc =
                8.0 * std::sqrt(1.0 - g.g23 * g.g23) + 4.0 * (g.g22 - g.g33);
            if (std::abs(alpha - a_exc) < 0.75) continue;  // keep clear of the coalescence
            const Liouvillian liou = build_liouvillian(make_params(1.0, alpha, g));
            const double t = 0.2 + 1.8 * rng.uniform01();
            const BlochState fast = propagate_bloch(liou, BlochState{}, t);
            const auto ode =
                propagate_bloch_ode(liou, BlochState{}, std::vector<double>{t}, 1e-4);
            const double rel = (fast.s - ode[0].s).norm() / ode[0].s.norm();
            CHECK(rel < 1e-10);
            ++checked;
        }
    }
}

TEST_CASE("ode oracle behavior") {
    SUBCASE("unitary case conserves the norm") {
        const Liouvillian liou = build_liouvillian(make_params(1.0, 0.0));
        const auto states =
            propagate_bloch_ode(liou, BlochState{}, linspace(0.5, 20.0, 40), 1e-4);
        for (const auto& s : states) CHECK(std::abs(s.s.norm() - 1.0) < 1e-8);
    }
    SUBCASE("reference noise decays toward one half") {
        const Liouvillian liou = build_liouvillian(make_params(1.0, 8.5, reference_noise()));
        const auto states =
            propagate_bloch_ode(liou, BlochState{}, linspace(0.25, 10.0, 40), 1e-4);
        double prev = 1.0;
        for (const auto& s : states) {
            const double p = survival_probability(s);
            CHECK(p <= prev + 1e-12);
            prev = p;
        }
        CHECK(std::abs(prev - 0.5) < 1e-3);
    }
    SUBCASE("step guard") {
        const Liouvillian liou = build_liouvillian(make_params(1.0, 10.0));
        CHECK_THROWS_AS(
            propagate_bloch_ode(liou, BlochState{}, std::vector<double>{1.0}, 0.05),
            StepTooLarge);
    }
    SUBCASE("grid must be increasing and non-negative") {
        const Liouvillian liou = build_liouvillian(make_params(1.0, 1.0));
        CHECK_THROWS_AS(propagate_bloch_ode(liou, BlochState{},
                                            std::vector<double>{1.0, 0.5}, 1e-3),
                        ValidationError);
        CHECK_THROWS_AS(
            propagate_bloch_ode(liou, BlochState{}, std::vector<double>{-1.0}, 1e-3),
            ValidationError);
    }
}

TEST_CASE("survival probability from the state") {
    CHECK(survival_probability(BlochState{{0, 0, 1}}) == 1.0);
    CHECK(survival_probability(BlochState{{0, 0, -1}}) == 0.0);
    CHECK(survival_probability(BlochState{{0.3, -0.2, 0.4}}) == doctest::Approx(0.7));
}

TEST_CASE("closed-form survival probability") {
    SUBCASE("free Rabi oscillation") {
        const ModelParams p = make_params(1.0, 0.0);
        for (double t : {0.1, 0.7, 2.3, 5.0}) {
            CHECK(survival_closed_form(p, t, Variant::noiseless) ==
                  doctest::Approx(std::cos(t) * std::cos(t)).epsilon(1e-12));
        }
    }
    SUBCASE("matches propagation to 1e-10") {
        const ModelParams p = make_params(1.0, 8.5, reference_noise());
        const Liouvillian liou = build_liouvillian(project_params(p, Variant::full));
        for (double t : {0.3, 1.0, 3.0, 7.0}) {
            const double direct =
                survival_probability(propagate_bloch(liou, BlochState{}, t));
            CHECK(std::abs(direct - survival_closed_form(p, t, Variant::full)) < 1e-10);
        }
    }
    SUBCASE("strong-measurement limit of the diagonal variant") {
        ModelParams p = make_params(1.0, 1e6);
        p.gamma.g11 = 0.05;
        p.gamma.g22 = 0.1;
        p.gamma.g33 = 1.0;
        for (double t : linspace(0.0, 5.0, 26)) {
            CHECK(std::abs(survival_closed_form(p, t, Variant::diagonal) -
                           survival_strong_measurement_limit(p, t)) < 1e-3);
        }
    }
    SUBCASE("long-time noise enhancement at alpha = 8.5") {
        const ModelParams p = make_params(1.0, 8.5, reference_noise());
        const double t = 3.0;
        const double full = survival_closed_form(p, t, Variant::full);
        const double none = survival_closed_form(p, t, Variant::noiseless);
        CHECK(full > none);
        // independent route: integrate the master equation
        const auto ode = propagate_bloch_ode(build_liouvillian(project_params(p, Variant::full)),
                                             BlochState{}, std::vector<double>{t}, 1e-4);
        CHECK(std::abs(full - survival_probability(ode[0])) < 1e-8);
    }
    SUBCASE("variant preconditions") {
        const ModelParams p = make_params(1.0, 8.5, reference_noise());
        CHECK_THROWS_AS(survival_closed_form(p, 1.0, Variant::diagonal), VariantMismatch);
        ModelParams crossed = p;
        crossed.gamma.g12 = 0.01;
        CHECK_THROWS_AS(survival_closed_form(crossed, 1.0, Variant::full), VariantMismatch);
        CHECK_THROWS_AS(survival_closed_form(p, 1.0, Variant::montecarlo), VariantMismatch);
        CHECK_NOTHROW(survival_closed_form(crossed, 1.0, Variant::noiseless));
    }
}

TEST_CASE("closed forms agree with the ode oracle on random parameters") {
    CounterRng rng(11, 0);
    const auto grid = linspace(0.5, 20.0, 21);
    for (int i = 0; i < 100; ++i) {
        const Variant v = i % 3 == 0   ? Variant::noiseless
                          : i % 3 == 1 ? Variant::diagonal
                                       : Variant::full;
        const double alpha = 16.0 * rng.uniform01();
        const ModelParams p = make_params(1.0, alpha, random_noise(rng, v));
        const Liouvillian liou = build_liouvillian(p);
        const auto states = propagate_bloch_ode(liou, BlochState{}, grid, 1e-4);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double closed = survival_closed_form(p, grid[k], v);
            CHECK(std::abs(closed - survival_probability(states[k])) < 1e-6);
        }
    }
}

TEST_CASE("g33 renormalizes the measurement strength") {
    CounterRng rng(13, 0);
    for (int i = 0; i < 100; ++i) {
        ModelParams a = make_params(1.0 + rng.uniform01(), 10.0 * rng.uniform01());
        a.gamma.g11 = rng.uniform01();
        a.gamma.g22 = rng.uniform01();
        a.gamma.g33 = rng.uniform01();
        ModelParams b = a;
        b.alpha = a.alpha + 4.0 * a.gamma.g33;
        b.gamma.g33 = 0.0;
        const Eigen::Matrix3d diff =
            build_liouvillian(a).matrix() - build_liouvillian(b).matrix();
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                CHECK(std::abs(diff(r, c)) <=
                      1e-12 * (1.0 + std::abs(build_liouvillian(a).matrix()(r, c))));
            }
        }
    }
}

TEST_CASE("survival tends to one half and the state stays contractive") {
    CounterRng rng(17, 0);
    for (int i = 0; i < 25; ++i) {
        const Variant v = i % 2 ? Variant::diagonal : Variant::full;
        const double alpha = 1.0 + 15.0 * rng.uniform01();
        const ModelParams p = make_params(1.0, alpha, random_noise(rng, v));
        // alpha >= 1 bounds the slowest rate below by 1/4, so this horizon
        // leaves nothing of the transient
        const double t_long = 200.0;
        CHECK(std::abs(survival_closed_form(p, t_long, v) - 0.5) < 1e-6);

        const Liouvillian liou = build_liouvillian(p);
        const auto states =
            propagate_bloch_ode(liou, BlochState{}, linspace(0.5, 10.0, 20), 2e-4);
        for (const auto& s : states) {
            const double prob = survival_probability(s);
            CHECK(prob >= 0.0);
            CHECK(prob <= 1.0);
            CHECK(s.s.norm() <= 1.0 + bloch_norm_tol);
        }
    }
}

TEST_CASE("short-time expansion") {
    SUBCASE("printed coefficients") {
        const auto none = short_time_expansion(make_params(1.0, 10.0), Variant::noiseless);
        CHECK(none.c0 == 1.0);
        CHECK(none.c1 == 0.0);
        CHECK(none.c2 == doctest::Approx(-1.0));
        CHECK(none.c3 == doctest::Approx(10.0 / 6.0));

        const auto fig3 =
            short_time_expansion(make_params(1.0, 8.5, reference_noise()), Variant::full);
        CHECK(fig3.c0 == 1.0);
        CHECK(fig3.c1 == doctest::Approx(-0.15).epsilon(1e-12));
        CHECK(fig3.c2 == doctest::Approx(-0.8875).epsilon(1e-12));
    }
    SUBCASE("zero noise reduces every variant to the noiseless coefficients") {
        const ModelParams p = make_params(1.3, 4.2);
        const auto none = short_time_expansion(p, Variant::noiseless);
        for (Variant v : {Variant::diagonal, Variant::full}) {
            const auto e = short_time_expansion(p, v);
            CHECK(e.c1 == none.c1);
            CHECK(e.c2 == none.c2);
            CHECK(e.c3 == none.c3);
        }
    }
    SUBCASE("residual is quartic: halving t shrinks it ~16x") {
        for (Variant v : {Variant::noiseless, Variant::diagonal, Variant::full}) {
            const ModelParams p = make_params(
                1.0, 6.0, v == Variant::noiseless ? NoiseCovariance{} : reference_noise());
            const ModelParams pp = project_params(p, v);
            const auto e = short_time_expansion(pp, v);
            const double t = 0.02;
            const double err_t = std::abs(survival_closed_form(pp, t, v) - e.eval(t));
            const double err_half =
                std::abs(survival_closed_form(pp, t / 2.0, v) - e.eval(t / 2.0));
            CHECK(err_t / err_half > 12.0);
            CHECK(err_t / err_half < 22.0);
        }
    }
}
