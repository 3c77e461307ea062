#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "foldwave/cubic.hpp"
#include "foldwave/model.hpp"

using namespace foldwave;

namespace {

// independent check: sign-change bisection on a dense grid
std::vector<double> scan_roots(double c3, double c2, double c1, double c0, double lo, double hi,
                               int n) {
    auto f = [&](double z) { return ((c3 * z + c2) * z + c1) * z + c0; };
    std::vector<double> out;
    double zp = lo, fp = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double z = lo + (hi - lo) * i / n;
        const double fz = f(z);
        if ((fp <= 0.0) != (fz <= 0.0)) {
            double a = zp, b = z, fa = fp;
            for (int it = 0; it < 100; ++it) {
                const double m = 0.5 * (a + b), fm = f(m);
                if ((fa <= 0.0) == (fm <= 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            out.push_back(0.5 * (a + b));
        }
        zp = z;
        fp = fz;
    }
    return out;
}

}  // namespace

TEST_CASE("equilibrium root examples") {
    auto r = equilibrium_roots({0.0, -3.0, 0.0}, 4.0);  // z (3 - 3 z^2) = 0
    REQUIRE(r.count == 3);
    CHECK(r.z[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.z[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.z[2] == doctest::Approx(1.0).epsilon(1e-12));

    r = equilibrium_roots({0.0, 1.0, 0.0}, 4.0);
    REQUIRE(r.count == 1);
    CHECK(r.z[0] == doctest::Approx(0.0));
}

TEST_CASE("reference configuration roots vs dense bisection") {
    BeamFoundationParams p;
    const auto c = coeffs_slow({0.5, +1}, p);
    const auto r = equilibrium_roots(c, p.gamma);
    const auto oracle = scan_roots(-0.75 * p.gamma, c.G, -c.J, c.F, -3.0, 3.0, 100000);
    REQUIRE(r.count == static_cast<int>(oracle.size()));
    for (int i = 0; i < r.count; ++i)
        CHECK(r.z[static_cast<std::size_t>(i)] ==
              doctest::Approx(oracle[static_cast<std::size_t>(i)]).epsilon(1e-9));
    // each root annihilates the restoring force
    for (int i = 0; i < r.count; ++i)
        CHECK(std::abs(restoring_force(r.z[static_cast<std::size_t>(i)], c, p.gamma)) <= 1e-9);
}

TEST_CASE("multiple roots are reported explicitly") {
    // (z - 1)^2 (z - 3) = z^3 - 5 z^2 + 7 z - 3
    auto r = solve_real_cubic(1.0, -5.0, 7.0, -3.0);
    REQUIRE(r.count == 2);
    CHECK(r.z[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.multiplicity[0] == 2);
    CHECK(r.z[1] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(r.multiplicity[1] == 1);

    // (z - 2)^3
    r = solve_real_cubic(1.0, -6.0, 12.0, -8.0);
    REQUIRE(r.count == 1);
    CHECK(r.z[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.multiplicity[0] == 3);
}

TEST_CASE("degenerate leading coefficients fall back") {
    // gamma = 0: quadratic G z^2 - J z + F
    auto r = equilibrium_roots({-3.0, -1.0, 1.0}, 0.0);  // z^2 + z - 3
    REQUIRE(r.count == 2);
    CHECK(r.z[0] == doctest::Approx(0.5 * (-1.0 - std::sqrt(13.0))).epsilon(1e-12));
    CHECK(r.z[1] == doctest::Approx(0.5 * (-1.0 + std::sqrt(13.0))).epsilon(1e-12));

    // gamma = 0, G = 0: linear
    r = equilibrium_roots({4.0, 2.0, 0.0}, 0.0);
    REQUIRE(r.count == 1);
    CHECK(r.z[0] == doctest::Approx(2.0));

    // everything zero: no isolated roots
    r = equilibrium_roots({0.0, 0.0, 0.0}, 0.0);
    CHECK(r.count == 0);
}

TEST_CASE("random cubics against the scan oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uc(-5.0, 5.0);
    std::uniform_real_distribution<double> ulead(0.2, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double c3 = (rng() & 1 ? 1.0 : -1.0) * ulead(rng);
        const double c2 = uc(rng), c1 = uc(rng), c0 = uc(rng);
        const auto r = solve_real_cubic(c3, c2, c1, c0);
        const double bound = 1.0 + std::max({std::abs(c2), std::abs(c1), std::abs(c0)}) / std::abs(c3);
        const auto oracle = scan_roots(c3, c2, c1, c0, -bound, bound, 20000);
        std::vector<double> odd;
        for (int i = 0; i < r.count; ++i)
            if (r.multiplicity[static_cast<std::size_t>(i)] % 2 == 1)
                odd.push_back(r.z[static_cast<std::size_t>(i)]);
        REQUIRE(odd.size() == oracle.size());
        for (std::size_t i = 0; i < odd.size(); ++i)
            CHECK(odd[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
    }
}

TEST_CASE("polished residuals are tiny") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> uc(-5.0, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double c3 = uc(rng), c2 = uc(rng), c1 = uc(rng), c0 = uc(rng);
        if (std::abs(c3) < 0.1) continue;
        const auto r = solve_real_cubic(c3, c2, c1, c0);
        for (int i = 0; i < r.count; ++i) {
            if (r.multiplicity[static_cast<std::size_t>(i)] > 1) continue;
            const double z = r.z[static_cast<std::size_t>(i)];
            const double f = ((c3 * z + c2) * z + c1) * z + c0;
            const double scale = std::max({std::abs(c3 * z * z * z), std::abs(c2 * z * z),
                                           std::abs(c1 * z), std::abs(c0), 1.0});
            CHECK(std::abs(f) <= 1e-12 * scale);
        }
    }
}
