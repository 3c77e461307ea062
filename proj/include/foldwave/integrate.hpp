#pragma once

// Adaptive Dormand-Prince 5(4) integration of the nonautonomous oscillator.
//
// The embedded pair, error norm, PI step-size controller and the quartic
// dense-output interpolant follow the classic DOPRI5 scheme of
//
//   E. Hairer, S.P. Norsett and G. Wanner, Solving ordinary differential
//   equations I. Nonstiff problems, 2nd edition, Springer (1993).

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "foldwave/model.hpp"

namespace foldwave {

using State2 = std::array<double, 2>;

struct Tolerances {
    double abs = 1e-9;
    double rel = 1e-8;
};

enum class IntegrationStatus { completed, step_underflow, non_finite };

inline const char* to_string(IntegrationStatus s) {
    switch (s) {
        case IntegrationStatus::completed: return "completed";
        case IntegrationStatus::step_underflow: return "step_underflow";
        case IntegrationStatus::non_finite: return "non_finite";
    }
    return "?";
}

struct IntegrationStats {
    long n_accepted = 0;
    long n_rejected = 0;
    long n_rhs = 0;
};

namespace dopri5 {

// Butcher tableau of the Dormand-Prince 5(4) pair (FSAL).
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat, for the embedded 4th-order error estimate
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// One full step from (t, y) with stage-1 slope k1 already evaluated.
// Returns the 5th-order solution, the scaled error estimate stages and the
// FSAL slope k7 = f(t+h, y5).
template <class Rhs>
struct StepResult {
    State2 y5;
    State2 k7;
    double err = 0.0;  // weighted rms error of the embedded pair
};

template <class Rhs>
inline StepResult<Rhs> step(Rhs&& f, double t, const State2& y, const State2& k1, double h,
                            const Tolerances& tol, IntegrationStats& stats, State2* rcont) {
    State2 k2, k3, k4, k5, k6, k7, w, y5;
    auto stage = [&](double c, const State2& arg, State2& out) {
        f(t + c * h, arg, out);
        ++stats.n_rhs;
    };

    for (int i = 0; i < 2; ++i) w[i] = y[i] + h * a21 * k1[i];
    stage(c2, w, k2);
    for (int i = 0; i < 2; ++i) w[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    stage(c3, w, k3);
    for (int i = 0; i < 2; ++i) w[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    stage(c4, w, k4);
    for (int i = 0; i < 2; ++i)
        w[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    stage(c5, w, k5);
    for (int i = 0; i < 2; ++i)
        w[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    stage(1.0, w, k6);
    for (int i = 0; i < 2; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    stage(1.0, y5, k7);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                               e7 * k7[i]);
        const double sk = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(y5[i]));
        err += (ei / sk) * (ei / sk);
    }
    err = std::sqrt(err / 2.0);

    if (rcont) {
        for (int i = 0; i < 2; ++i) {
            const double ydiff = y5[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            rcont[0][i] = y[i];
            rcont[1][i] = ydiff;
            rcont[2][i] = bspl;
            rcont[3][i] = ydiff - h * k7[i] - bspl;
            rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                               d7 * k7[i]);
        }
    }
    return {y5, k7, err};
}

inline double dense_eval(const State2* rcont, int i, double theta) {
    const double th1 = 1.0 - theta;
    return rcont[0][i] +
           theta * (rcont[1][i] + th1 * (rcont[2][i] + theta * (rcont[3][i] + th1 * rcont[4][i])));
}

}  // namespace dopri5

struct OdeRunReport {
    IntegrationStatus status = IntegrationStatus::completed;
    IntegrationStats stats;
    double t_reached = 0.0;
    State2 y_final{};
};

// Integrate y' = f(t, y) over [t0, t1] with adaptive steps and PI control.
// The observer is called at t0 and then at every multiple of sample_dt
// (via the dense interpolant) plus the final time.  sample_dt <= 0 samples
// every accepted step instead.
template <class Rhs, class Observer>
OdeRunReport integrate_ode(Rhs&& f, State2 y0, double t0, double t1, Tolerances tol,
                           double max_dt, double init_dt, double sample_dt, Observer&& observe) {
    constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
    constexpr double fac_shrink = 0.2, fac_grow = 10.0;  // step ratio clamps

    OdeRunReport rep;
    const double span = t1 - t0;
    double t = t0;
    State2 y = y0;
    State2 k1;
    f(t, y, k1);
    ++rep.stats.n_rhs;
    observe(t, y);

    double h = init_dt > 0.0 ? init_dt : 1e-3 * span;
    if (max_dt > 0.0) h = std::min(h, max_dt);
    h = std::min(h, span);
    double facold = 1e-4;
    long sample_idx = 1;  // sample times t0 + k * sample_dt, drift-free
    bool last_rejected = false;
    const double hmin_floor = 1e-14 * std::max(std::abs(t0), std::abs(t1)) + 1e-300;

    State2 rcont[5];
    while (t < t1) {
        if (t + h >= t1) h = t1 - t;

        auto st = dopri5::step(f, t, y, k1, h, tol, rep.stats, rcont);
        if (!std::isfinite(st.err) || !std::isfinite(st.y5[0]) || !std::isfinite(st.y5[1])) {
            rep.status = IntegrationStatus::non_finite;
            break;
        }

        const double fac11 = std::pow(std::max(st.err, 1e-32), expo1);
        if (st.err <= 1.0) {
            // accepted
            facold = std::max(st.err, 1e-4);
            ++rep.stats.n_accepted;
            const double t_new = t + h;
            if (sample_dt > 0.0) {
                double next_sample = t0 + double(sample_idx) * sample_dt;
                while (next_sample <= t_new + 1e-14 * std::abs(t_new) &&
                       next_sample < t1 - 1e-12 * std::abs(t1)) {
                    const double theta = (next_sample - t) / h;
                    if (theta > 1e-12) {  // skip duplicates of the step start
                        State2 ys = {dopri5::dense_eval(rcont, 0, theta),
                                     dopri5::dense_eval(rcont, 1, theta)};
                        observe(next_sample, ys);
                    }
                    ++sample_idx;
                    next_sample = t0 + double(sample_idx) * sample_dt;
                }
            } else {
                if (t_new < t1) observe(t_new, st.y5);
            }
            t = t_new;
            y = st.y5;
            k1 = st.k7;  // FSAL
            if (t >= t1) {
                observe(t1, y);
                break;
            }
            double fac = fac11 / std::pow(facold, beta);
            fac = std::clamp(fac / safe, 1.0 / fac_grow, 1.0 / fac_shrink);
            double h_new = h / fac;
            if (last_rejected) h_new = std::min(h_new, h);
            last_rejected = false;
            h = h_new;
        } else {
            ++rep.stats.n_rejected;
            last_rejected = true;
            h = h / std::min(1.0 / fac_shrink, fac11 / safe);
        }
        if (max_dt > 0.0) h = std::min(h, max_dt);
        if (h <= hmin_floor) {
            rep.status = IntegrationStatus::step_underflow;
            break;
        }
    }

    rep.t_reached = t;
    rep.y_final = y;
    return rep;
}

// Fixed-step driver (no error control); used by the order-verification test.
template <class Rhs>
State2 integrate_fixed(Rhs&& f, State2 y0, double t0, double t1, long n_steps) {
    Tolerances loose{1.0, 1.0};
    IntegrationStats stats;
    const double h = (t1 - t0) / double(n_steps);
    State2 y = y0, k1;
    f(t0, y, k1);
    for (long n = 0; n < n_steps; ++n) {
        const double t = t0 + n * h;
        auto st = dopri5::step(f, t, y, k1, h, loose, stats, nullptr);
        y = st.y5;
        k1 = st.k7;
    }
    return y;
}

// --- beam-model trajectory ---------------------------------------------------

struct FastState {
    double z1 = 0.0;
    double z2 = 0.0;
};

struct TrajectorySample {
    double t;
    double z1, z2;
    double d;  // cos(omega t)
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    BeamFoundationParams params;
    Tolerances tol;
    IntegrationStats stats;
    IntegrationStatus status = IntegrationStatus::completed;
    double t_reached = 0.0;
};

// Right-hand side of the nonautonomous system, evaluated literally from the
// time-domain coefficients.
inline void beam_rhs(double t, const State2& y, State2& dy, const BeamFoundationParams& p) {
    const auto c = coeffs_time(t, p);
    dy[0] = y[1];
    dy[1] = restoring_force(y[0], c, p.gamma) - p.xi * y[1];
}

// Integrate the oscillator and record (t, z1, z2, d) at the sampling stride.
// The first trial step defaults to 5e-3.
inline Trajectory integrate(const BeamFoundationParams& p, FastState ic, double t0, double t1,
                            Tolerances tol = {}, double max_dt = 0.0, double sample_dt = 0.1,
                            double init_dt = 5e-3) {
    p.validate();
    if (!(t1 > t0)) throw std::invalid_argument("integrate: t_span must be non-degenerate");
    if (!(tol.abs > 0.0) || !(tol.rel > 0.0))
        throw std::invalid_argument("integrate: tolerances must be positive");

    Trajectory traj;
    traj.params = p;
    traj.tol = tol;
    auto rhs = [&p](double t, const State2& y, State2& dy) { beam_rhs(t, y, dy, p); };
    auto rep = integrate_ode(
        rhs, {ic.z1, ic.z2}, t0, t1, tol, max_dt, init_dt, sample_dt,
        [&](double t, const State2& y) {
            traj.samples.push_back({t, y[0], y[1], std::cos(p.omega * t)});
        });
    traj.stats = rep.stats;
    traj.status = rep.status;
    traj.t_reached = rep.t_reached;
    return traj;
}

}  // namespace foldwave
