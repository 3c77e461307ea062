#pragma once

// Closed-form model quantities for a single-mode beam on a cubic elastic
// foundation driven through the foundation by a traveling wave
// z(chi,t) = h0*cos(kappa*chi - omega*t).  The modal equation is
//
//   q'' + xi q' + J(t) q - G(t) q^2 + (3/4) gamma q^3 = F(t),
//
// and for slow drive (omega much below the natural frequency) the
// coefficients are re-expressed in the slow variable d = cos(omega t),
// which makes the fast subsystem autonomous.  Both coefficient routes are
// implemented independently (direct trigonometric evaluation vs. de Moivre
// reduction in d) so they can serve as mutual oracles.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace foldwave {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPi2 = kPi * kPi;
inline constexpr double kPi3 = kPi2 * kPi;
inline constexpr double kPi4 = kPi2 * kPi2;

// Wave numbers where the closed-form coefficient denominators vanish.
// The singularities are removable in the underlying projection integrals,
// but no series expansion is attempted here; these kappa are rejected.
inline constexpr double kKappaSingular1 = kPi / 3.0;
inline constexpr double kKappaSingular2 = kPi;

class singular_parameter_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Dimensionless parameter set of the beam-foundation oscillator.
// Defaults are the bursting reference configuration used throughout the
// verification suite.
struct BeamFoundationParams {
    double xi = 0.02;      // damping ratio, >= 0
    double sigma = 120.0;  // linear foundation stiffness k L^4 / (E I)
    double gamma = 150.0;  // cubic foundation stiffness alpha L^6 / (E I), >= 0
    double kappa = 1.0;    // wave number over the beam length, > 0
    double h0 = 0.1;       // wave amplitude / beam length, >= 0
    double omega = 0.01;   // drive frequency, > 0

    // Rejection radius around the singular wave numbers {pi/3, pi}.
    double kappa_exclusion = 1e-3;

    void validate() const {
        if (!(xi >= 0.0)) throw std::invalid_argument("xi must be >= 0");
        if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
        if (!(h0 >= 0.0)) throw std::invalid_argument("h0 must be >= 0");
        if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
        if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
        check_kappa();
    }

    void check_kappa() const {
        if (std::abs(kappa - kKappaSingular1) < kappa_exclusion ||
            std::abs(kappa - kKappaSingular2) < kappa_exclusion)
            throw singular_parameter_error(
                "kappa = " + std::to_string(kappa) +
                " is inside the exclusion radius of a singular wave number (pi/3 or pi)");
    }
};

// Coefficient triple of the modal equation at one instant / slow value.
// Sign convention: the ODE reads  q'' + xi q' + J q - G q^2 + (3/4) gamma q^3 = F.
struct SlowFastCoefficients {
    double F = 0.0;  // external forcing
    double J = 0.0;  // linear coefficient, pi^4 + sigma plus parametric part
    double G = 0.0;  // quadratic coefficient
};

// Slow phase: d = cos(omega t) plus the branch sign s = sign(sin(omega t)).
// d alone is not injective over a drive period; s selects the half-period.
struct SlowPhase {
    double d = 1.0;
    int s = +1;

    void validate() const {
        if (!(std::abs(d) <= 1.0)) throw std::domain_error("slow variable |d| must be <= 1");
        if (s != 1 && s != -1) throw std::domain_error("branch sign s must be +1 or -1");
    }
};

// --- de Moivre reductions -------------------------------------------------

// cos(omega t) + cos(kappa - omega t) expressed in the slow phase:
// d (1 + cos kappa) + s sqrt(1 - d^2) sin kappa.
inline double phase_factor(const SlowPhase& p, double kappa) {
    p.validate();
    double r = p.s * std::sqrt((1.0 - p.d) * (1.0 + p.d));
    return p.d * (1.0 + std::cos(kappa)) + r * std::sin(kappa);
}

// cos(n * omega t) as a Chebyshev polynomial in d, n in {1,2,3}.
inline double reduce_cos_multiple(const SlowPhase& p, int n) {
    p.validate();
    switch (n) {
        case 1: return p.d;
        case 2: return 2.0 * p.d * p.d - 1.0;
        case 3: return (4.0 * p.d * p.d - 3.0) * p.d;
        default: throw std::invalid_argument("reduce_cos_multiple: n must be 1, 2 or 3");
    }
}

// sin(n * omega t) on the s-signed branch, n in {1,2,3}.
inline double reduce_sin_multiple(const SlowPhase& p, int n) {
    p.validate();
    double r = p.s * std::sqrt((1.0 - p.d) * (1.0 + p.d));
    switch (n) {
        case 1: return r;
        case 2: return 2.0 * p.d * r;
        case 3: return r * (4.0 * p.d * p.d - 1.0);
        default: throw std::invalid_argument("reduce_sin_multiple: n must be 1, 2 or 3");
    }
}

// cos(n (theta - omega t)) = cos(n theta) cos(n omega t) + sin(n theta) sin(n omega t),
// with the omega-t factors reduced on the s-signed branch.
inline double reduce_cos_shifted(const SlowPhase& p, double theta, int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("reduce_cos_shifted: n must be 1, 2 or 3");
    return std::cos(n * theta) * reduce_cos_multiple(p, n) +
           std::sin(n * theta) * reduce_sin_multiple(p, n);
}

// --- time-domain coefficients ----------------------------------------------

// Literal time-periodic coefficients of the modal equation.  This is the
// direct trigonometric route; coeffs_at() below must agree with it at
// d = cos(omega t), s = sign(sin(omega t)).
inline SlowFastCoefficients coeffs_time(double t, const BeamFoundationParams& p) {
    p.validate();
    const double k = p.kappa, k2 = k * k;
    const double wt = p.omega * t;
    const double c1 = std::cos(wt) + std::cos(k - wt);

    SlowFastCoefficients out;
    out.J = kPi4 + p.sigma +
            3.0 * p.gamma * p.h0 * p.h0 / (2.0 * k * (kPi2 - k2)) *
                (k * (kPi2 - k2) + kPi2 * std::sin(k) * std::cos(k - 2.0 * wt));
    out.G = 36.0 * kPi3 * p.gamma * p.h0 / (9.0 * kPi4 + 10.0 * kPi2 * k2 + k2 * k2) * c1;
    out.F = -2.0 * kPi * p.sigma * p.h0 / (kPi2 - k2) * c1 +
            kPi * p.gamma * p.h0 * p.h0 * p.h0 /
                (2.0 * (9.0 * k2 * k2 - 10.0 * kPi2 * k2 + kPi4)) *
                (3.0 * (kPi2 - 9.0 * k2) * c1 +
                 (kPi2 - k2) * (std::cos(3.0 * (k - wt)) + std::cos(3.0 * wt)));
    return out;
}

// --- slow-variable coefficients ---------------------------------------------

// Internal phase point: d together with the signed sine r.  For a true slow
// phase r = s sqrt(1 - d^2); the continuation code instead drives the angle
// a with d = cos a, r = sin a, which keeps every derivative polynomial in
// (d, r) and free of the sqrt singularity at |d| = 1.
struct PhasePoint {
    double d = 1.0;
    double r = 0.0;
};

inline PhasePoint phase_point(const SlowPhase& p) {
    p.validate();
    return {p.d, p.s * std::sqrt((1.0 - p.d) * (1.0 + p.d))};
}

inline PhasePoint phase_point_angle(double a) { return {std::cos(a), std::sin(a)}; }

namespace detail {

// Trigonometric building blocks of the slow coefficients and their partials.
struct PhaseBlocks {
    double C, S, C3, S3;            // cos/sin of kappa and 3 kappa
    double f1, f2, t3, f3;          // phase1, cos(k-2wt), cos(3wt), cos(3(k-wt))
    double f1_d, f2_d, t3_d, f3_d;  // d/dd
    double f1_r, f2_r, t3_r, f3_r;  // d/dr
    double f1_k, f2_k, f3_k;        // d/dkappa
};

inline PhaseBlocks phase_blocks(const PhasePoint& q, double kappa) {
    PhaseBlocks b;
    const double d = q.d, r = q.r;
    b.C = std::cos(kappa);
    b.S = std::sin(kappa);
    b.C3 = std::cos(3.0 * kappa);
    b.S3 = std::sin(3.0 * kappa);

    b.f1 = d * (1.0 + b.C) + r * b.S;
    b.f2 = b.C * (2.0 * d * d - 1.0) + 2.0 * d * r * b.S;
    b.t3 = (4.0 * d * d - 3.0) * d;
    b.f3 = b.C3 * b.t3 + b.S3 * r * (4.0 * d * d - 1.0);

    b.f1_d = 1.0 + b.C;
    b.f2_d = 4.0 * d * b.C + 2.0 * r * b.S;
    b.t3_d = 12.0 * d * d - 3.0;
    b.f3_d = b.C3 * b.t3_d + 8.0 * b.S3 * r * d;

    b.f1_r = b.S;
    b.f2_r = 2.0 * d * b.S;
    b.t3_r = 0.0;
    b.f3_r = b.S3 * (4.0 * d * d - 1.0);

    b.f1_k = -d * b.S + r * b.C;
    b.f2_k = -b.S * (2.0 * d * d - 1.0) + 2.0 * d * r * b.C;
    b.f3_k = -3.0 * b.S3 * b.t3 + 3.0 * b.C3 * r * (4.0 * d * d - 1.0);
    return b;
}

}  // namespace detail

// Parameters with respect to which analytic coefficient derivatives are
// available.  slow_d / slow_r are the two components of the phase point.
enum class ModelParam { slow_d, slow_r, sigma, gamma, kappa, h0 };

// Slow-variable coefficients at a phase point, each time-domain cosine
// reduced individually through the de Moivre identities.
inline SlowFastCoefficients coeffs_at(const PhasePoint& q, const BeamFoundationParams& p) {
    p.validate();
    const auto b = detail::phase_blocks(q, p.kappa);
    const double k = p.kappa, k2 = k * k;

    const double q1 = k * (kPi2 - k2);
    const double aj = 3.0 * p.gamma * p.h0 * p.h0 / (2.0 * q1);
    const double ag = 36.0 * kPi3 * p.gamma * p.h0 / (9.0 * kPi4 + 10.0 * kPi2 * k2 + k2 * k2);
    const double af1 = -2.0 * kPi * p.sigma * p.h0 / (kPi2 - k2);
    const double af3 =
        kPi * p.gamma * p.h0 * p.h0 * p.h0 / (2.0 * (9.0 * k2 * k2 - 10.0 * kPi2 * k2 + kPi4));

    SlowFastCoefficients out;
    out.J = kPi4 + p.sigma + aj * (q1 + kPi2 * b.S * b.f2);
    out.G = ag * b.f1;
    out.F = af1 * b.f1 + af3 * (3.0 * (kPi2 - 9.0 * k2) * b.f1 + (kPi2 - k2) * (b.f3 + b.t3));
    return out;
}

inline SlowFastCoefficients coeffs_slow(const SlowPhase& p, const BeamFoundationParams& bp) {
    return coeffs_at(phase_point(p), bp);
}

// Partial derivative of (F, J, G) with respect to one model parameter,
// holding the other phase-point component fixed.  The chain rule for the
// slow angle a (d = cos a, r = sin a) is applied by callers.
inline SlowFastCoefficients coeffs_partial(const PhasePoint& q, const BeamFoundationParams& p,
                                           ModelParam which) {
    p.validate();
    const auto b = detail::phase_blocks(q, p.kappa);
    const double k = p.kappa, k2 = k * k;

    const double q1 = k * (kPi2 - k2);
    const double dg = 9.0 * kPi4 + 10.0 * kPi2 * k2 + k2 * k2;
    const double df1 = kPi2 - k2;
    const double df3 = 9.0 * k2 * k2 - 10.0 * kPi2 * k2 + kPi4;

    const double aj = 3.0 * p.gamma * p.h0 * p.h0 / (2.0 * q1);
    const double ag = 36.0 * kPi3 * p.gamma * p.h0 / dg;
    const double af1 = -2.0 * kPi * p.sigma * p.h0 / df1;
    const double af3 = kPi * p.gamma * p.h0 * p.h0 * p.h0 / (2.0 * df3);

    const double psi = 3.0 * (kPi2 - 9.0 * k2) * b.f1 + df1 * (b.f3 + b.t3);

    SlowFastCoefficients out;
    switch (which) {
        case ModelParam::slow_d:
            out.J = aj * kPi2 * b.S * b.f2_d;
            out.G = ag * b.f1_d;
            out.F = af1 * b.f1_d +
                    af3 * (3.0 * (kPi2 - 9.0 * k2) * b.f1_d + df1 * (b.f3_d + b.t3_d));
            break;
        case ModelParam::slow_r:
            out.J = aj * kPi2 * b.S * b.f2_r;
            out.G = ag * b.f1_r;
            out.F = af1 * b.f1_r + af3 * (3.0 * (kPi2 - 9.0 * k2) * b.f1_r + df1 * b.f3_r);
            break;
        case ModelParam::sigma:
            out.J = 1.0;
            out.G = 0.0;
            out.F = -2.0 * kPi * p.h0 / df1 * b.f1;
            break;
        case ModelParam::gamma:
            out.J = aj / p.gamma * (q1 + kPi2 * b.S * b.f2);
            out.G = ag / p.gamma * b.f1;
            out.F = af3 / p.gamma * psi;
            break;
        case ModelParam::h0: {
            // J ~ h0^2, G ~ h0, F's sigma part ~ h0 and gamma part ~ h0^3.
            out.J = 3.0 * p.gamma * p.h0 / q1 * (q1 + kPi2 * b.S * b.f2);
            out.G = 36.0 * kPi3 * p.gamma / dg * b.f1;
            out.F = -2.0 * kPi * p.sigma / df1 * b.f1 +
                    3.0 * kPi * p.gamma * p.h0 * p.h0 / (2.0 * df3) * psi;
            break;
        }
        case ModelParam::kappa: {
            const double q1_k = kPi2 - 3.0 * k2;
            const double aj_k = -aj * q1_k / q1;
            const double ag_k = -ag * (20.0 * kPi2 * k + 4.0 * k2 * k) / dg;
            const double af1_k = af1 * 2.0 * k / df1;
            const double af3_k = -af3 * (36.0 * k2 * k - 20.0 * kPi2 * k) / df3;
            const double psi_k = -54.0 * k * b.f1 + 3.0 * (kPi2 - 9.0 * k2) * b.f1_k -
                                 2.0 * k * (b.f3 + b.t3) + df1 * b.f3_k;
            out.J = aj_k * (q1 + kPi2 * b.S * b.f2) + aj * (q1_k + kPi2 * (b.C * b.f2 + b.S * b.f2_k));
            out.G = ag_k * b.f1 + ag * b.f1_k;
            out.F = af1_k * b.f1 + af1 * b.f1_k + af3_k * psi + af3 * psi_k;
            break;
        }
    }
    return out;
}

// --- fast-subsystem scalar quantities ---------------------------------------

// Restoring force sigma(z1) = F - J z1 + G z1^2 - (3/4) gamma z1^3.
// Its zeros are the fast-subsystem equilibria.
inline double restoring_force(double z1, const SlowFastCoefficients& c, double gamma) {
    return c.F - c.J * z1 + c.G * z1 * z1 - 0.75 * gamma * z1 * z1 * z1;
}

// Slope of the restoring force, K(z1) = -J + 2 G z1 - (9/4) gamma z1^2.
inline double effective_stiffness(double z1, const SlowFastCoefficients& c, double gamma) {
    return -c.J + 2.0 * c.G * z1 - 2.25 * gamma * z1 * z1;
}

// Constant term of the characteristic polynomial lambda^2 + xi lambda + k_eff.
// Positive k_eff together with xi > 0 gives a stable equilibrium.
inline double k_eff(double z1, const SlowFastCoefficients& c, double gamma) {
    return -effective_stiffness(z1, c, gamma);
}

// Second derivative of the restoring force, 2 G - (9/2) gamma z1.
// Vanishing with the fold conditions marks a cusp candidate.
inline double restoring_force_pp(double z1, const SlowFastCoefficients& c, double gamma) {
    return 2.0 * c.G - 4.5 * gamma * z1;
}

// Potential whose gradient is minus the restoring force.  Without forcing:
// V = J z1^2/2 - G z1^3/3 + (3/16) gamma z1^4; with forcing, minus F z1.
inline double potential(double z1, const SlowFastCoefficients& c, double gamma,
                        bool include_forcing = false) {
    double v = 0.5 * c.J * z1 * z1 - c.G * z1 * z1 * z1 / 3.0 +
               0.1875 * gamma * z1 * z1 * z1 * z1;
    if (include_forcing) v -= c.F * z1;
    return v;
}

// Jacobian of the fast subsystem (z1' = z2, z2' = sigma(z1) - xi z2) at z1:
// [[0, 1], [K(z1), -xi]].  Trace is -xi, determinant is -K(z1) = k_eff.
inline std::array<std::array<double, 2>, 2> fast_jacobian(double z1,
                                                          const SlowFastCoefficients& c,
                                                          double gamma, double xi) {
    return {{{0.0, 1.0}, {effective_stiffness(z1, c, gamma), -xi}}};
}

}  // namespace foldwave
