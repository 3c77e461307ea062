#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "foldwave/model.hpp"

using namespace foldwave;

TEST_CASE("phase factor examples") {
    CHECK(phase_factor({1.0, +1}, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(phase_factor({0.0, +1}, kPi / 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(phase_factor({0.5, +1}, kPi / 3) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK_THROWS_AS(phase_factor({1.5, +1}, 0.0), std::domain_error);
    CHECK_THROWS_AS(phase_factor({0.5, 2}, 0.0), std::domain_error);
}

TEST_CASE("cosine multiple reduction examples") {
    CHECK(reduce_cos_multiple({1.0, +1}, 3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(reduce_cos_multiple({0.5, +1}, 3) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(reduce_cos_multiple({0.0, +1}, 2) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK_THROWS_AS(reduce_cos_multiple({0.5, +1}, 4), std::invalid_argument);
    CHECK_THROWS_AS(reduce_cos_multiple({0.5, +1}, 0), std::invalid_argument);
}

TEST_CASE("shifted reduction examples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
    for (int i = 0; i < 200; ++i) {
        const double a = ua(rng);
        const SlowPhase p{std::cos(a), std::sin(a) >= 0.0 ? +1 : -1};
        CHECK(reduce_cos_shifted(p, a, 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(reduce_cos_shifted({1.0, +1}, 0.7, 1) == doctest::Approx(std::cos(0.7)).epsilon(1e-14));
    CHECK(reduce_cos_shifted({0.5, +1}, kPi / 3, 3) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(reduce_cos_shifted({0.5, +1}, 1.0, 5), std::invalid_argument);
}

TEST_CASE("reduction exactness over random phases") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double a_drawn = ua(rng), th = ua(rng);
        const SlowPhase p{std::cos(a_drawn), std::sin(a_drawn) >= 0.0 ? +1 : -1};
        // rounding d = cos(a) loses phase information near multiples of pi
        // (error ~ eps * cot a); the identity under test is against the
        // phase the pair (d, s) actually represents
        const double a = std::atan2(p.s * std::sqrt((1.0 - p.d) * (1.0 + p.d)), p.d);
        for (int n = 1; n <= 3; ++n) {
            worst = std::max(worst, std::abs(reduce_cos_multiple(p, n) - std::cos(n * a)));
            worst = std::max(worst, std::abs(reduce_sin_multiple(p, n) - std::sin(n * a)));
            worst = std::max(worst, std::abs(reduce_cos_shifted(p, th, n) - std::cos(n * (th - a))));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("time coefficients at the reference configuration") {
    BeamFoundationParams p;  // xi 0.02, sigma 120, gamma 150, kappa 1, h0 0.1, omega 0.01
    const auto c = coeffs_time(0.0, p);
    // frozen from an independent hand evaluation of the q coefficient at t = 0
    CHECK(c.J == doctest::Approx(220.797383810642).epsilon(1e-12));
    CHECK(c.G == doctest::Approx(26.4138324732141).epsilon(1e-12));
    CHECK(c.F == doctest::Approx(-12.9682482802443).epsilon(1e-12));
}

TEST_CASE("time coefficients: degenerate wave and periodicity") {
    BeamFoundationParams p;
    p.h0 = 0.0;
    const auto c = coeffs_time(17.3, p);
    CHECK(c.F == 0.0);
    CHECK(c.G == 0.0);
    CHECK(c.J == kPi4 + p.sigma);

    BeamFoundationParams q;
    const double period = 2.0 * kPi / q.omega;
    for (double t : {0.0, 12.5, 333.0}) {
        const auto a = coeffs_time(t, q);
        const auto b = coeffs_time(t + period, q);
        CHECK(a.F == doctest::Approx(b.F).epsilon(1e-12));
        CHECK(a.J == doctest::Approx(b.J).epsilon(1e-12));
        CHECK(a.G == doctest::Approx(b.G).epsilon(1e-12));
    }
}

TEST_CASE("slow coefficients agree with the time route") {
    BeamFoundationParams p;
    // at d = 1 (omega t = 0)
    const auto a = coeffs_slow({1.0, +1}, p);
    const auto b = coeffs_time(0.0, p);
    CHECK(a.F == doctest::Approx(b.F).epsilon(1e-12));
    CHECK(a.J == doctest::Approx(b.J).epsilon(1e-12));
    CHECK(a.G == doctest::Approx(b.G).epsilon(1e-12));

    // cross-evaluation at d = 0.3
    const double t = std::acos(0.3) / p.omega;
    const auto s = coeffs_slow({0.3, +1}, p);
    const auto ct = coeffs_time(t, p);
    CHECK(s.F == doctest::Approx(ct.F).epsilon(1e-9));
    CHECK(s.J == doctest::Approx(ct.J).epsilon(1e-9));
    CHECK(s.G == doctest::Approx(ct.G).epsilon(1e-9));

    BeamFoundationParams h;
    h.h0 = 0.0;
    const auto z = coeffs_slow({-0.4, +1}, h);
    CHECK(z.F == 0.0);
    CHECK(z.G == 0.0);
    CHECK(z.J == kPi4 + h.sigma);
}

TEST_CASE("singular wave numbers are rejected") {
    BeamFoundationParams p;
    p.kappa = kPi;
    CHECK_THROWS_AS(coeffs_time(0.0, p), singular_parameter_error);
    p.kappa = kPi / 3 + 5e-4;
    CHECK_THROWS_AS(coeffs_slow({0.5, +1}, p), singular_parameter_error);
    p.kappa = kPi / 3 + 2e-3;  // outside the default exclusion radius
    CHECK_NOTHROW(coeffs_slow({0.5, +1}, p));
    p.kappa = -1.0;
    CHECK_THROWS_AS(coeffs_time(0.0, p), std::invalid_argument);
}

TEST_CASE("restoring force, stiffness, potential") {
    const SlowFastCoefficients c{2.5, -3.0, 0.0};
    CHECK(restoring_force(0.0, c, 4.0) == 2.5);
    CHECK(restoring_force(1.0, {0.0, -3.0, 0.0}, 4.0) == doctest::Approx(0.0));

    CHECK(effective_stiffness(0.0, {0.0, 7.0, 0.0}, 4.0) == -7.0);
    CHECK(effective_stiffness(1.0 / std::sqrt(3.0), {0.0, -3.0, 0.0}, 4.0) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK(effective_stiffness(-1.0 / std::sqrt(3.0), {0.0, -3.0, 0.0}, 4.0) ==
          doctest::Approx(0.0).epsilon(1e-14));

    CHECK(potential(2.0, {0.0, 1.0, 0.0}, 0.0, false) == 2.0);
    // even symmetry without the quadratic term
    for (double z : {0.3, 1.1, 2.7})
        CHECK(potential(z, {1.0, 2.0, 0.0}, 3.0, false) ==
              doctest::Approx(potential(-z, {1.0, 2.0, 0.0}, 3.0, false)).epsilon(1e-14));
}

TEST_CASE("derivative identities by central differences") {
    BeamFoundationParams p;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uz(-2.0, 2.0), ud(-1.0, 1.0);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const auto c = coeffs_slow({ud(rng), +1}, p);
        const double z = uz(rng);
        const double fd_k = (restoring_force(z + h, c, p.gamma) -
                             restoring_force(z - h, c, p.gamma)) / (2 * h);
        CHECK(fd_k == doctest::Approx(effective_stiffness(z, c, p.gamma)).epsilon(1e-6));
        const double fd_v = (potential(z + h, c, p.gamma, true) -
                             potential(z - h, c, p.gamma, true)) / (2 * h);
        CHECK(fd_v + restoring_force(z, c, p.gamma) ==
              doctest::Approx(0.0).epsilon(1e-6).scale(std::max(1.0, std::abs(fd_v))));
    }
}

TEST_CASE("fast jacobian structure") {
    const auto A = fast_jacobian(0.0, {0.0, 2.0, 0.0}, 0.0, 0.5);
    CHECK(A[0][0] == 0.0);
    CHECK(A[0][1] == 1.0);
    CHECK(A[1][0] == -2.0);
    CHECK(A[1][1] == -0.5);

    BeamFoundationParams p;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uz(-2.0, 2.0), ud(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const auto c = coeffs_slow({ud(rng), +1}, p);
        const double z = uz(rng);
        const auto J = fast_jacobian(z, c, p.gamma, p.xi);
        CHECK(J[0][0] + J[1][1] == -p.xi);  // trace
        const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        CHECK(det == doctest::Approx(-effective_stiffness(z, c, p.gamma)).epsilon(1e-14));
    }
}

TEST_CASE("coefficient parameter derivatives match finite differences") {
    BeamFoundationParams base;
    base.sigma = -40.0;  // softened values exercise sign-sensitive paths too
    base.kappa = 1.7;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ua(0.1, kPi - 0.1);

    auto check_param = [&](ModelParam which, auto apply) {
        for (int i = 0; i < 20; ++i) {
            const double ang = ua(rng);
            const PhasePoint q = phase_point_angle(ang);
            const double h = 1e-6;
            BeamFoundationParams pp = base, pm = base;
            PhasePoint qp = q, qm = q;
            apply(pp, qp, +h);
            apply(pm, qm, -h);
            const auto cp = coeffs_at(qp, pp);
            const auto cm = coeffs_at(qm, pm);
            const auto an = coeffs_partial(q, base, which);
            const double sF = std::max(1.0, std::abs(an.F));
            const double sJ = std::max(1.0, std::abs(an.J));
            const double sG = std::max(1.0, std::abs(an.G));
            CHECK(std::abs((cp.F - cm.F) / (2 * h) - an.F) / sF <= 1e-5);
            CHECK(std::abs((cp.J - cm.J) / (2 * h) - an.J) / sJ <= 1e-5);
            CHECK(std::abs((cp.G - cm.G) / (2 * h) - an.G) / sG <= 1e-5);
        }
    };

    check_param(ModelParam::slow_d, [](BeamFoundationParams&, PhasePoint& q, double h) { q.d += h; });
    check_param(ModelParam::slow_r, [](BeamFoundationParams&, PhasePoint& q, double h) { q.r += h; });
    check_param(ModelParam::sigma, [](BeamFoundationParams& p, PhasePoint&, double h) { p.sigma += h; });
    check_param(ModelParam::gamma, [](BeamFoundationParams& p, PhasePoint&, double h) { p.gamma += h; });
    check_param(ModelParam::kappa, [](BeamFoundationParams& p, PhasePoint&, double h) { p.kappa += h; });
    check_param(ModelParam::h0, [](BeamFoundationParams& p, PhasePoint&, double h) { p.h0 += h; });
}

TEST_CASE("parameter validation") {
    BeamFoundationParams p;
    p.omega = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.xi = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.gamma = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    CHECK_NOTHROW(p.validate());
}
