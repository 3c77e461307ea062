#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "foldwave/bursts.hpp"
#include "foldwave/csv.hpp"

using namespace foldwave;

namespace {

Trajectory synthetic(double t_end, double dt, double (*f)(double)) {
    Trajectory traj;
    traj.params = BeamFoundationParams{};
    for (double t = 0.0; t <= t_end + 1e-12; t += dt)
        traj.samples.push_back({t, f(t), 0.0, std::cos(traj.params.omega * t)});
    return traj;
}

}  // namespace

TEST_CASE("rhs equivalence: degenerate, reference, branch witness") {
    BeamFoundationParams p;
    p.h0 = 0.0;
    CHECK(rhs_equivalence_check(p, 200) == 0.0);

    BeamFoundationParams ref;
    CHECK(rhs_equivalence_check(ref, 1000) <= 1e-9);

    // deliberately flipping the sine branch must break the agreement
    CHECK(rhs_equivalence_check(ref, 1000, 0x5eedf01dULL, true) > 1e-3);
}

TEST_CASE("transformed portrait") {
    BeamFoundationParams p;
    Trajectory traj;
    traj.params = p;
    traj.samples.push_back({0.0, 0.3, 0.0, std::cos(0.0)});
    const double t_half = kPi / p.omega;
    traj.samples.push_back({t_half, -0.2, 0.0, std::cos(p.omega * t_half)});
    const auto portrait = transformed_portrait(traj);
    REQUIRE(portrait.size() == 2);
    CHECK(portrait[0].first == doctest::Approx(1.0));
    CHECK(portrait[0].second == 0.3);
    CHECK(portrait[1].first == doctest::Approx(-1.0));
    for (const auto& [d, z1] : portrait) CHECK(std::abs(d) <= 1.0);
}

TEST_CASE("constant signal gives a single quiescent episode") {
    auto traj = synthetic(100.0, 0.05, [](double) { return 0.7; });
    const auto rep = classify_bursts(traj, 5.0, 0.01);
    REQUIRE(rep.episodes.size() == 1);
    CHECK(rep.episodes[0].phase == BurstPhase::quiescent);
    CHECK(rep.transition_count == 0);
    CHECK(rep.episodes[0].center == doctest::Approx(0.7));
    CHECK(rep.episodes[0].t_start == 0.0);
    CHECK(rep.episodes[0].t_end == doctest::Approx(100.0));
}

TEST_CASE("square-modulated sinusoid recovers the known on/off intervals") {
    // on during [100, 200) and [300, 400): amplitude 1; off: amplitude 0.01
    auto traj = synthetic(500.0, 0.02, [](double t) {
        const bool on = (t >= 100.0 && t < 200.0) || (t >= 300.0 && t < 400.0);
        return (on ? 1.0 : 0.01) * std::sin(2.0 * kPi * t);
    });
    const double window = 5.0;
    const auto rep = classify_bursts(traj, window, 0.5);
    REQUIRE(rep.episodes.size() == 5);
    const double edges[4] = {100.0, 200.0, 300.0, 400.0};
    for (int i = 0; i < 4; ++i) {
        const auto& ep = rep.episodes[static_cast<std::size_t>(i)];
        CHECK(std::abs(ep.t_end - edges[i]) <= window + 1e-9);
        CHECK(ep.phase == (i % 2 == 0 ? BurstPhase::quiescent : BurstPhase::spiking));
    }
    CHECK(rep.transition_count == 4);

    // episodes tile the span without overlap
    CHECK(rep.episodes.front().t_start == 0.0);
    for (std::size_t i = 1; i < rep.episodes.size(); ++i)
        CHECK(rep.episodes[i].t_start == doctest::Approx(rep.episodes[i - 1].t_end));
    CHECK(rep.episodes.back().t_end == doctest::Approx(500.0));
}

TEST_CASE("small sinusoid below threshold stays quiescent") {
    auto traj = synthetic(100.0, 0.05, [](double t) { return 0.05 * std::sin(t); });
    const auto rep = classify_bursts(traj, 8.0, 0.5);
    REQUIRE(rep.episodes.size() == 1);
    CHECK(rep.episodes[0].phase == BurstPhase::quiescent);
}

TEST_CASE("episode peak is the max deviation from the center") {
    auto traj = synthetic(50.0, 0.01, [](double t) { return 2.0 + std::sin(t); });
    const auto rep = classify_bursts(traj, 5.0, 0.1);
    double max_peak = 0.0;
    for (const auto& ep : rep.episodes) max_peak = std::max(max_peak, ep.peak);
    CHECK(max_peak == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("degenerate classifier inputs are rejected") {
    Trajectory empty;
    CHECK_THROWS_AS(classify_bursts(empty, 1.0, 0.1), std::invalid_argument);
    auto traj = synthetic(10.0, 0.1, [](double) { return 0.0; });
    CHECK_THROWS_AS(classify_bursts(traj, 20.0, 0.1), std::invalid_argument);
}

TEST_CASE("default window is five linearized fast periods") {
    BeamFoundationParams p;
    const double expect = 5.0 * 2.0 * kPi / std::sqrt(kPi4 + p.sigma);
    CHECK(default_burst_window(p) == doctest::Approx(expect));
}

TEST_CASE("csv numbers round-trip exactly") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::ldexp(mant(rng), expo(rng));
        CHECK(std::stod(fmt(x)) == x);
    }
    CHECK(std::stod(fmt(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(fmt(0.0) == "0");
}
