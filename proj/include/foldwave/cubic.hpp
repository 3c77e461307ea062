#pragma once

// Real roots of a cubic with closed-form (Cardano / trigonometric) branches
// and a Newton polish per simple root.
// http://mathworld.wolfram.com/CubicFormula.html
// https://en.wikipedia.org/wiki/Cubic_function#Reduction_to_a_depressed_cubic

#include <algorithm>
#include <array>
#include <cmath>

#include "foldwave/model.hpp"

namespace foldwave {

struct RealRoots {
    int count = 0;                      // number of distinct real roots, 0..3
    std::array<double, 3> z{};          // ascending
    std::array<int, 3> multiplicity{};  // geometric multiplicity per root
};

namespace detail {

// One or two Newton steps on c3 z^3 + c2 z^2 + c1 z + c0; cheap cleanup of
// the cancellation error left by the closed form.  Simple roots only.
inline double polish_root(double z, double c3, double c2, double c1, double c0) {
    for (int it = 0; it < 2; ++it) {
        double f = ((c3 * z + c2) * z + c1) * z + c0;
        double fp = (3.0 * c3 * z + 2.0 * c2) * z + c1;
        if (fp == 0.0) break;
        double dz = f / fp;
        if (!std::isfinite(dz)) break;
        z -= dz;
        if (std::abs(dz) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

}  // namespace detail

// Distinct real roots of c3 z^3 + c2 z^2 + c1 z + c0 = 0 with multiplicities.
// Degenerate leading coefficients fall back to quadratic / linear solves.
// A discriminant within 1e-12 of zero (relative to its own scale) is reported
// as an explicit multiple root rather than two nearly equal roots, since
// downstream fold refinement needs the degeneracy signal.
inline RealRoots solve_real_cubic(double c3, double c2, double c1, double c0) {
    RealRoots out;
    const double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
    if (scale == 0.0) return out;  // identically zero polynomial: no isolated roots

    if (std::abs(c3) <= 1e-14 * scale) {
        if (std::abs(c2) <= 1e-14 * scale) {
            if (std::abs(c1) <= 1e-14 * scale) return out;  // constant
            out.count = 1;
            out.z[0] = -c0 / c1;
            out.multiplicity[0] = 1;
            return out;
        }
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        const double dscale = std::max(c1 * c1, std::abs(4.0 * c2 * c0));
        if (std::abs(disc) <= 1e-12 * std::max(dscale, 1e-300)) {
            out.count = 1;
            out.z[0] = -c1 / (2.0 * c2);
            out.multiplicity[0] = 2;
            return out;
        }
        if (disc < 0.0) return out;
        // numerically stable quadratic formula
        const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
        double r0 = q / c2;
        double r1 = (q != 0.0) ? c0 / q : -c1 / c2 - r0;
        if (r0 > r1) std::swap(r0, r1);
        out.count = 2;
        out.z = {r0, r1, 0.0};
        out.multiplicity = {1, 1, 0};
        return out;
    }

    // monic reduction z^3 + a z^2 + b z + c
    const double a = c2 / c3, b = c1 / c3, c = c0 / c3;
    const double a2 = a * a;
    const double qq = (a2 - 3.0 * b) / 9.0;
    const double rr = (a * (2.0 * a2 - 9.0 * b) + 27.0 * c) / 54.0;
    const double r2 = rr * rr;
    const double q3 = qq * qq * qq;
    const double disc = r2 - q3;
    const double dscale = std::max({r2, std::abs(q3), 1e-300});

    if (std::abs(disc) <= 1e-12 * dscale) {
        // boundary of the Cardano condition: multiple root
        if (std::abs(qq) <= 1e-12 * std::max(1.0, a2)) {
            out.count = 1;
            out.z[0] = -a / 3.0;
            out.multiplicity[0] = 3;
            return out;
        }
        const double sq = std::sqrt(std::max(qq, 0.0));
        const double sgn = (rr >= 0.0) ? 1.0 : -1.0;
        double zs = -2.0 * sgn * sq - a / 3.0;  // simple root
        double zd = sgn * sq - a / 3.0;         // double root
        out.count = 2;
        if (zs <= zd) {
            out.z = {detail::polish_root(zs, c3, c2, c1, c0), zd, 0.0};
            out.multiplicity = {1, 2, 0};
        } else {
            out.z = {zd, detail::polish_root(zs, c3, c2, c1, c0), 0.0};
            out.multiplicity = {2, 1, 0};
        }
        return out;
    }

    if (disc < 0.0) {
        // three distinct real roots (trigonometric branch)
        double t = rr / std::sqrt(q3);
        t = std::clamp(t, -1.0, 1.0);
        t = std::acos(t);
        const double m = -2.0 * std::sqrt(qq);
        std::array<double, 3> z = {m * std::cos(t / 3.0) - a / 3.0,
                                   m * std::cos((t + 2.0 * kPi) / 3.0) - a / 3.0,
                                   m * std::cos((t - 2.0 * kPi) / 3.0) - a / 3.0};
        for (double& zi : z) zi = detail::polish_root(zi, c3, c2, c1, c0);
        std::sort(z.begin(), z.end());
        out.count = 3;
        out.z = z;
        out.multiplicity = {1, 1, 1};
        return out;
    }

    // one real root (Cardano branch); the copysign picks the cancellation-free
    // cube root and std::cbrt handles its sign
    const double u3 = -(rr + std::copysign(std::sqrt(disc), rr));
    const double u = std::cbrt(u3);
    const double v = (u == 0.0) ? 0.0 : qq / u;
    out.count = 1;
    out.z[0] = detail::polish_root(u + v - a / 3.0, c3, c2, c1, c0);
    out.multiplicity[0] = 1;
    return out;
}

// Equilibria of the fast subsystem: zeros of the restoring force
// F - J z + G z^2 - (3/4) gamma z^3.  gamma > 0 gives a true cubic; the
// degenerate cases fall through to the quadratic / linear branches above.
inline RealRoots equilibrium_roots(const SlowFastCoefficients& c, double gamma) {
    return solve_real_cubic(-0.75 * gamma, c.G, -c.J, c.F);
}

}  // namespace foldwave
