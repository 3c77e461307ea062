#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "foldwave/integrate.hpp"

using namespace foldwave;

TEST_CASE("harmonic oscillator returns after one period") {
    auto rhs = [](double, const State2& y, State2& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    auto rep = integrate_ode(rhs, {1.0, 0.0}, 0.0, 2.0 * kPi, {1e-9, 1e-9}, 0.0, 1e-2, 0.0,
                             [](double, const State2&) {});
    CHECK(rep.status == IntegrationStatus::completed);
    CHECK(std::hypot(rep.y_final[0] - 1.0, rep.y_final[1]) <= 1e-7);
}

TEST_CASE("linear damped oscillator matches the closed form") {
    const double xi = 0.1;
    auto rhs = [xi](double, const State2& y, State2& dy) {
        dy[0] = y[1];
        dy[1] = -xi * y[1] - y[0];
    };
    const double wd = std::sqrt(1.0 - 0.25 * xi * xi);
    double worst = 0.0;
    auto rep = integrate_ode(rhs, {1.0, 0.0}, 0.0, 50.0, {1e-10, 1e-10}, 0.0, 1e-2, 0.1,
                             [&](double t, const State2& y) {
                                 const double exact = std::exp(-0.5 * xi * t) *
                                                      (std::cos(wd * t) +
                                                       0.5 * xi / wd * std::sin(wd * t));
                                 worst = std::max(worst, std::abs(y[0] - exact));
                             });
    CHECK(rep.status == IntegrationStatus::completed);
    CHECK(worst <= 1e-4);  // envelope decay tolerance; observed far tighter
}

TEST_CASE("fixed-step core shows fifth-order convergence") {
    auto rhs = [](double, const State2& y, State2& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    double prev = 0.0;
    for (long n : {50L, 100L, 200L}) {
        const auto y = integrate_fixed(rhs, {1.0, 0.0}, 0.0, 2.0 * kPi, n);
        const double err = std::hypot(y[0] - 1.0, y[1]);
        if (prev > 0.0) {
            const double order = std::log2(prev / err);
            CHECK(order >= 4.5);
            CHECK(order <= 5.5);
        }
        prev = err;
    }
}

TEST_CASE("beam trajectory sampling invariants") {
    BeamFoundationParams p;
    auto traj = integrate(p, {0.0, 0.0}, 0.0, 100.0, {1e-9, 1e-8}, 0.0, 0.1);
    REQUIRE(traj.status == IntegrationStatus::completed);
    REQUIRE(traj.samples.size() > 100);
    CHECK(traj.samples.front().t == 0.0);
    CHECK(traj.samples.back().t == 100.0);
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        if (i > 0) CHECK(traj.samples[i].t > traj.samples[i - 1].t);
        CHECK(std::abs(traj.samples[i].d - std::cos(p.omega * traj.samples[i].t)) <= 1e-12);
    }
}

TEST_CASE("equilibrium initial condition of the unforced system stays put") {
    BeamFoundationParams p;
    p.h0 = 0.0;
    auto traj = integrate(p, {0.0, 0.0}, 0.0, 50.0);
    for (const auto& s : traj.samples) {
        CHECK(s.z1 == 0.0);
        CHECK(s.z2 == 0.0);
    }
}

TEST_CASE("non-finite right-hand side aborts with status") {
    auto rhs = [](double t, const State2& y, State2& dy) {
        dy[0] = y[1];
        dy[1] = t > 1.0 ? std::numeric_limits<double>::quiet_NaN() : -y[0];
    };
    auto rep = integrate_ode(rhs, {1.0, 0.0}, 0.0, 10.0, {1e-9, 1e-9}, 0.0, 1e-2, 0.0,
                             [](double, const State2&) {});
    CHECK(rep.status == IntegrationStatus::non_finite);
    CHECK(rep.t_reached <= 1.5);
    CHECK(std::isfinite(rep.y_final[0]));  // last good state is kept
}

TEST_CASE("degenerate spans and tolerances are rejected") {
    BeamFoundationParams p;
    CHECK_THROWS_AS(integrate(p, {0.0, 0.0}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, {0.0, 0.0}, 0.0, 1.0, {0.0, 1e-8}), std::invalid_argument);
}

TEST_CASE("identical runs are bit-identical") {
    BeamFoundationParams p;
    auto a = integrate(p, {0.0, 0.0}, 0.0, 30.0);
    auto b = integrate(p, {0.0, 0.0}, 0.0, 30.0);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(std::memcmp(a.samples.data(), b.samples.data(),
                      a.samples.size() * sizeof(TrajectorySample)) == 0);
}

TEST_CASE("max_dt cap is honored") {
    BeamFoundationParams p;
    p.h0 = 0.0;
    auto traj = integrate(p, {1.0, 0.0}, 0.0, 5.0, {1e-6, 1e-6}, 0.01, 0.0);
    // per-step observer: consecutive accepted steps no longer than the cap
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        CHECK(traj.samples[i].t - traj.samples[i - 1].t <= 0.01 + 1e-12);
}
