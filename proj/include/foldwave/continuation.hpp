#pragma once

// Pseudo-arclength continuation of fast-subsystem equilibria and fold
// curves, with fold / cusp / Bogdanov-Takens test functions and a
// brute-force grid-scan oracle for cross-validation.
//
// All defining systems are formulated on the scalar restoring force (the
// z2 = 0 nullcline is eliminated analytically), so a continuation run has
// 2 or 3 unknowns and closed-form Jacobians.  When the slow variable d is
// an active parameter it is driven through the angle a (d = cos a), which
// keeps the derivatives polynomial and regular at |d| = 1.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "foldwave/cubic.hpp"
#include "foldwave/equilibria.hpp"
#include "foldwave/model.hpp"

namespace foldwave {

struct ContinuationSettings {
    double step_init = 1e-2;
    double step_min = 1e-8;
    double step_max = 1e-1;
    double newton_tol = 1e-10;
    int newton_max_iter = 20;
    int max_points = 4000;
    double grow = 1.3;
    double shrink = 0.5;

    void validate() const {
        if (!(0.0 < step_min && step_min <= step_init && step_init <= step_max))
            throw std::invalid_argument("continuation: need 0 < step_min <= step_init <= step_max");
        if (!(newton_tol > 0.0)) throw std::invalid_argument("continuation: newton_tol must be > 0");
        if (newton_max_iter < 1 || max_points < 2)
            throw std::invalid_argument("continuation: iteration/point limits too small");
        if (!(grow >= 1.0) || !(shrink > 0.0 && shrink < 1.0))
            throw std::invalid_argument("continuation: bad step adaptation factors");
    }
};

// Scalar parameters that can serve as continuation unknowns.
enum class ParamId { slow_d, sigma, gamma, kappa, h0, xi, sur_J, sur_F, sur_G };

inline const char* to_string(ParamId p) {
    switch (p) {
        case ParamId::slow_d: return "d";
        case ParamId::sigma: return "sigma";
        case ParamId::gamma: return "gamma";
        case ParamId::kappa: return "kappa";
        case ParamId::h0: return "h0";
        case ParamId::xi: return "xi";
        case ParamId::sur_J: return "J";
        case ParamId::sur_F: return "F";
        case ParamId::sur_G: return "G";
    }
    return "?";
}

inline std::optional<ParamId> param_from_string(const std::string& s) {
    if (s == "d") return ParamId::slow_d;
    if (s == "sigma") return ParamId::sigma;
    if (s == "gamma") return ParamId::gamma;
    if (s == "kappa") return ParamId::kappa;
    if (s == "h0") return ParamId::h0;
    if (s == "xi") return ParamId::xi;
    if (s == "J") return ParamId::sur_J;
    if (s == "F") return ParamId::sur_F;
    if (s == "G") return ParamId::sur_G;
    return std::nullopt;
}

// A coefficient family exposed to the continuation engine: evaluation of
// (F, J, G, gamma, xi) and analytic partials with respect to a fixed list
// of active parameters.  Active values are stored in an internal
// representation (the slow variable as its angle); report()/internal()
// convert to and from the external value.
class CoeffFamily {
public:
    struct Eval {
        SlowFastCoefficients c;
        double gamma = 0.0;
        double xi = 0.0;
    };
    struct Deriv {
        SlowFastCoefficients dc;
        double dgamma = 0.0;
    };

    virtual ~CoeffFamily() = default;
    virtual int n_active() const = 0;
    virtual ParamId active(int k) const = 0;
    virtual Eval eval(std::span<const double> u) const = 0;
    virtual Deriv partial(std::span<const double> u, int k) const = 0;
    // strict: the reporting domain (branch terminates outside it);
    // non-strict: values the formulas may be safely evaluated at.
    virtual bool in_domain(std::span<const double> u, bool strict) const = 0;
    virtual double report(int k, double x) const {
        (void)k;
        return x;
    }
    virtual double internal(int k, double x) const {
        (void)k;
        return x;
    }
};

// Beam-foundation model with a chosen set of active parameters.  Inactive
// parameters are frozen at their base values; if slow_d is not active the
// coefficients are evaluated at fixed_d on the s = +1 branch.
class BeamFamily final : public CoeffFamily {
public:
    BeamFamily(BeamFoundationParams base, std::vector<ParamId> actives, double fixed_d = 1.0)
        : base_(base), actives_(std::move(actives)), fixed_d_(fixed_d) {
        for (ParamId a : actives_)
            if (a == ParamId::sur_J || a == ParamId::sur_F || a == ParamId::sur_G)
                throw std::invalid_argument("BeamFamily: surrogate parameter on the beam model");
    }

    int n_active() const override { return static_cast<int>(actives_.size()); }
    ParamId active(int k) const override { return actives_[static_cast<std::size_t>(k)]; }

    double report(int k, double x) const override {
        return active(k) == ParamId::slow_d ? std::cos(x) : x;
    }
    double internal(int k, double x) const override {
        return active(k) == ParamId::slow_d ? std::acos(std::clamp(x, -1.0, 1.0)) : x;
    }

    Eval eval(std::span<const double> u) const override {
        auto [p, q] = assemble(u);
        return {coeffs_at(q, p), p.gamma, p.xi};
    }

    Deriv partial(std::span<const double> u, int k) const override {
        auto [p, q] = assemble(u);
        Deriv d;
        switch (active(k)) {
            case ParamId::slow_d: {
                // chain rule through d = cos a, r = sin a
                const auto cd = coeffs_partial(q, p, ModelParam::slow_d);
                const auto cr = coeffs_partial(q, p, ModelParam::slow_r);
                d.dc.F = -q.r * cd.F + q.d * cr.F;
                d.dc.J = -q.r * cd.J + q.d * cr.J;
                d.dc.G = -q.r * cd.G + q.d * cr.G;
                break;
            }
            case ParamId::sigma: d.dc = coeffs_partial(q, p, ModelParam::sigma); break;
            case ParamId::gamma:
                d.dc = coeffs_partial(q, p, ModelParam::gamma);
                d.dgamma = 1.0;
                break;
            case ParamId::kappa: d.dc = coeffs_partial(q, p, ModelParam::kappa); break;
            case ParamId::h0: d.dc = coeffs_partial(q, p, ModelParam::h0); break;
            case ParamId::xi: break;  // coefficients do not depend on the damping
            default: break;
        }
        return d;
    }

    bool in_domain(std::span<const double> u, bool strict) const override {
        auto [p, q] = assemble_raw(u);
        (void)q;
        const double slack = strict ? 0.0 : 0.5;
        for (int k = 0; k < n_active(); ++k) {
            const double x = u[static_cast<std::size_t>(k)];
            switch (active(k)) {
                case ParamId::slow_d:
                    if (!(x >= -slack && x <= kPi + slack)) return false;
                    break;
                case ParamId::sigma:
                    if (!(std::abs(x) <= 1e6)) return false;
                    break;
                case ParamId::gamma:
                    if (strict ? !(x > 1e-9 && x <= 1e6) : !(x >= 0.0 && x <= 1e6)) return false;
                    break;
                case ParamId::h0:
                    if (strict ? !(x > 0.0 && x <= 10.0) : !(x >= 0.0 && x <= 11.0)) return false;
                    break;
                case ParamId::xi:
                    if (!(x >= 0.0 && x <= 1e3)) return false;
                    break;
                case ParamId::kappa: break;  // handled below on the assembled params
                default: break;
            }
        }
        // the non-strict margin must not be smaller than the exclusion
        // radius itself, or evaluation could throw on a guarded point;
        // the strict margin is wider so branches stop before refinement
        // steps can wander into the excluded zone
        const double margin = strict ? 2.0 * p.kappa_exclusion : p.kappa_exclusion;
        if (!(p.kappa > 1e-6 && p.kappa <= 1e3)) return false;
        if (std::abs(p.kappa - kKappaSingular1) < margin) return false;
        if (std::abs(p.kappa - kKappaSingular2) < margin) return false;
        return true;
    }

    const BeamFoundationParams& base() const { return base_; }
    double fixed_d() const { return fixed_d_; }

private:
    std::pair<BeamFoundationParams, PhasePoint> assemble_raw(std::span<const double> u) const {
        BeamFoundationParams p = base_;
        PhasePoint q{fixed_d_, std::sqrt(std::max(0.0, 1.0 - fixed_d_ * fixed_d_))};
        for (int k = 0; k < n_active(); ++k) {
            const double x = u[static_cast<std::size_t>(k)];
            switch (active(k)) {
                case ParamId::slow_d: q = phase_point_angle(x); break;
                case ParamId::sigma: p.sigma = x; break;
                case ParamId::gamma: p.gamma = x; break;
                case ParamId::kappa: p.kappa = x; break;
                case ParamId::h0: p.h0 = x; break;
                case ParamId::xi: p.xi = x; break;
                default: break;
            }
        }
        return {p, q};
    }
    std::pair<BeamFoundationParams, PhasePoint> assemble(std::span<const double> u) const {
        auto pq = assemble_raw(u);
        pq.first.check_kappa();
        return pq;
    }

    BeamFoundationParams base_;
    std::vector<ParamId> actives_;
    double fixed_d_;
};

// Constant-coefficient surrogate family: (F, J, G) are parameters, with an
// optional linear slow modulation F(d) = F0 + F_slope d.  Gives analytic
// fold and cusp benchmarks (81 gamma F^2 + 16 J^3 = 0 when G = 0).
class SurrogateFamily final : public CoeffFamily {
public:
    SurrogateCoeffs base;
    double xi = 0.02;
    std::vector<ParamId> actives;

    SurrogateFamily(SurrogateCoeffs b, double xi_, std::vector<ParamId> a)
        : base(b), xi(xi_), actives(std::move(a)) {}

    int n_active() const override { return static_cast<int>(actives.size()); }
    ParamId active(int k) const override { return actives[static_cast<std::size_t>(k)]; }

    Eval eval(std::span<const double> u) const override {
        SurrogateCoeffs s = base;
        double xi_v = xi, d = 0.0;
        for (int k = 0; k < n_active(); ++k) {
            const double x = u[static_cast<std::size_t>(k)];
            switch (active(k)) {
                case ParamId::sur_J: s.J0 = x; break;
                case ParamId::sur_F: s.F0 = x; break;
                case ParamId::sur_G: s.G0 = x; break;
                case ParamId::gamma: s.gamma = x; break;
                case ParamId::slow_d: d = x; break;
                case ParamId::xi: xi_v = x; break;
                default: throw std::invalid_argument("SurrogateFamily: unsupported active parameter");
            }
        }
        return {s.coeffs(d), s.gamma, xi_v};
    }

    Deriv partial(std::span<const double> u, int k) const override {
        (void)u;
        Deriv d;
        switch (active(k)) {
            case ParamId::sur_J: d.dc.J = 1.0; break;
            case ParamId::sur_F: d.dc.F = 1.0; break;
            case ParamId::sur_G: d.dc.G = 1.0; break;
            case ParamId::gamma: d.dgamma = 1.0; break;
            case ParamId::slow_d: d.dc.F = base.F_slope; break;
            case ParamId::xi: break;
            default: break;
        }
        return d;
    }

    bool in_domain(std::span<const double> u, bool strict) const override {
        for (int k = 0; k < n_active(); ++k) {
            const double x = u[static_cast<std::size_t>(k)];
            switch (active(k)) {
                case ParamId::slow_d:
                    if (!(std::abs(x) <= (strict ? 1.0 : 1.5))) return false;
                    break;
                case ParamId::gamma:
                    if (strict ? !(x > 1e-9 && x <= 1e6) : !(x >= 0.0 && x <= 1e6)) return false;
                    break;
                case ParamId::xi:
                    if (!(x >= 0.0 && x <= 1e3)) return false;
                    break;
                default:
                    if (!(std::abs(x) <= 1e6)) return false;
                    break;
            }
        }
        return true;
    }
};

// --- small dense linear algebra ----------------------------------------------

namespace detail {

// Gaussian elimination with partial pivoting; A is n x n row-major.
inline bool linsolve(int n, double* A, double* b) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (std::abs(A[piv * n + col]) < 1e-300) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        const double inv = 1.0 / A[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] * inv;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A[r * n + c] * b[c];
        b[r] = s / A[r * n + r];
    }
    return true;
}

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

// --- defining systems ----------------------------------------------------------

// Augmented defining system on the unknown vector u = (z1, active params...).
// n_eq selects how many rows are active:
//   1: restoring force (equilibrium branch)
//   2: + k_eff           (fold curve / fold point solve)
//   3: + sigma'' or trace (cusp / BT point solve)
class DefiningSystem {
public:
    enum class ThirdRow { none, cusp, bt };

    DefiningSystem(const CoeffFamily& fam, int n_eq, ThirdRow third = ThirdRow::none)
        : fam_(fam), n_eq_(n_eq), third_(third) {
        if (n_eq < 1 || n_eq > 3) throw std::invalid_argument("DefiningSystem: n_eq in 1..3");
        if (n_eq == 3 && third == ThirdRow::none)
            throw std::invalid_argument("DefiningSystem: third row kind required");
    }

    int dim() const { return 1 + fam_.n_active(); }
    int n_eq() const { return n_eq_; }
    const CoeffFamily& family() const { return fam_; }

    void residual(std::span<const double> u, double* r, double* scale = nullptr) const {
        const double z = u[0];
        const auto ev = fam_.eval(u.subspan(1));
        r[0] = restoring_force(z, ev.c, ev.gamma);
        if (scale) scale[0] = coeff_scale(ev.c, ev.gamma, z);
        if (n_eq_ >= 2) {
            r[1] = k_eff(z, ev.c, ev.gamma);
            if (scale)
                scale[1] = std::max({1.0, std::abs(ev.c.J), std::abs(2.0 * ev.c.G * z),
                                     std::abs(2.25 * ev.gamma * z * z)});
        }
        if (n_eq_ == 3) {
            if (third_ == ThirdRow::cusp) {
                r[2] = restoring_force_pp(z, ev.c, ev.gamma);
                if (scale)
                    scale[2] = std::max({1.0, std::abs(2.0 * ev.c.G), std::abs(4.5 * ev.gamma * z)});
            } else {
                r[2] = -ev.xi;  // trace of the fast Jacobian
                if (scale) scale[2] = 1.0;
            }
        }
    }

    // rows: equations, columns: (z1, active params); row-major, n_eq x dim
    void jacobian(std::span<const double> u, double* Jm) const {
        const double z = u[0];
        const int d = dim();
        const auto ev = fam_.eval(u.subspan(1));

        Jm[0 * d + 0] = effective_stiffness(z, ev.c, ev.gamma);
        // d(keff)/dz1 = -(2 G - (9/2) gamma z1)
        if (n_eq_ >= 2) Jm[1 * d + 0] = -(2.0 * ev.c.G - 4.5 * ev.gamma * z);
        if (n_eq_ == 3) Jm[2 * d + 0] = (third_ == ThirdRow::cusp) ? -4.5 * ev.gamma : 0.0;

        for (int k = 0; k < fam_.n_active(); ++k) {
            const auto pd = fam_.partial(u.subspan(1), k);
            Jm[0 * d + 1 + k] =
                pd.dc.F - z * pd.dc.J + z * z * pd.dc.G - 0.75 * pd.dgamma * z * z * z;
            if (n_eq_ >= 2)
                Jm[1 * d + 1 + k] = pd.dc.J - 2.0 * z * pd.dc.G + 2.25 * pd.dgamma * z * z;
            if (n_eq_ == 3) {
                if (third_ == ThirdRow::cusp)
                    Jm[2 * d + 1 + k] = 2.0 * pd.dc.G - 4.5 * pd.dgamma * z;
                else
                    Jm[2 * d + 1 + k] = (fam_.active(k) == ParamId::xi) ? -1.0 : 0.0;
            }
        }
    }

private:
    const CoeffFamily& fam_;
    int n_eq_;
    ThirdRow third_;
};

namespace detail {

// Newton iteration on the square augmented system {g(u) = 0, tan.(u - u_ref) = c}.
// Residuals are tested against per-equation scales.  One extra polish step
// is taken after the tolerance is first met, which drives the defining
// residuals to rounding level (the fold eigenstructure check needs that).
// Returns the iteration count on success, -1 on failure.
inline int newton_arclength(const DefiningSystem& sys, std::vector<double>& u,
                            std::span<const double> tan, std::span<const double> u_ref,
                            double arc_target, const ContinuationSettings& cs) {
    const int d = sys.dim();
    const int ne = sys.n_eq();
    std::vector<double> r(static_cast<std::size_t>(d)), scale(static_cast<std::size_t>(d), 1.0);
    std::vector<double> M(static_cast<std::size_t>(d * d));
    bool polished = false;
    std::vector<double> u_ok;

    for (int it = 0; it <= cs.newton_max_iter; ++it) {
        if (!sys.family().in_domain(std::span<const double>(u).subspan(1), false)) {
            if (polished) { u = u_ok; return it; }
            return -1;
        }
        sys.residual(u, r.data(), scale.data());
        double arc = -arc_target;
        for (int i = 0; i < d; ++i) arc += tan[static_cast<std::size_t>(i)] *
                                           (u[static_cast<std::size_t>(i)] - u_ref[static_cast<std::size_t>(i)]);
        bool ok = std::abs(arc) <= cs.newton_tol * (1.0 + std::abs(arc_target));
        for (int i = 0; i < ne; ++i)
            ok = ok && std::abs(r[static_cast<std::size_t>(i)]) <=
                           cs.newton_tol * scale[static_cast<std::size_t>(i)];
        if (ok) {
            if (polished) return it;
            polished = true;
            u_ok = u;
        }
        if (it == cs.newton_max_iter) break;

        sys.jacobian(u, M.data());
        // shift the jacobian rows into the full square matrix layout
        std::vector<double> A(static_cast<std::size_t>(d * d));
        for (int i = 0; i < ne; ++i)
            for (int c = 0; c < d; ++c) A[static_cast<std::size_t>(i * d + c)] = M[static_cast<std::size_t>(i * d + c)];
        for (int c = 0; c < d; ++c) A[static_cast<std::size_t>(ne * d + c)] = tan[static_cast<std::size_t>(c)];
        std::vector<double> rhs(static_cast<std::size_t>(d));
        for (int i = 0; i < ne; ++i) rhs[static_cast<std::size_t>(i)] = -r[static_cast<std::size_t>(i)];
        rhs[static_cast<std::size_t>(ne)] = -arc;
        if (!linsolve(d, A.data(), rhs.data())) {
            if (polished) { u = u_ok; return it; }
            return -1;
        }
        double step = 0.0;
        for (int i = 0; i < d; ++i) {
            u[static_cast<std::size_t>(i)] += rhs[static_cast<std::size_t>(i)];
            step = std::max(step, std::abs(rhs[static_cast<std::size_t>(i)]));
        }
        if (!std::isfinite(step) || step > 1e6) {
            if (polished) { u = u_ok; return cs.newton_max_iter; }
            return -1;
        }
    }
    if (polished) { u = u_ok; return cs.newton_max_iter; }
    return -1;
}

// Unit tangent of {g = 0} at u: solve [Jg; prev^T] t = e_last and normalize,
// oriented along prev.
inline bool curve_tangent(const DefiningSystem& sys, std::span<const double> u,
                          std::span<const double> prev, std::vector<double>& t) {
    const int d = sys.dim();
    const int ne = sys.n_eq();
    std::vector<double> A(static_cast<std::size_t>(d * d));
    std::vector<double> Jm(static_cast<std::size_t>(ne * d));
    sys.jacobian(u, Jm.data());
    for (int i = 0; i < ne; ++i)
        for (int c = 0; c < d; ++c) A[static_cast<std::size_t>(i * d + c)] = Jm[static_cast<std::size_t>(i * d + c)];
    for (int c = 0; c < d; ++c) A[static_cast<std::size_t>(ne * d + c)] = prev[static_cast<std::size_t>(c)];
    t.assign(static_cast<std::size_t>(d), 0.0);
    t[static_cast<std::size_t>(ne)] = 1.0;
    if (!linsolve(d, A.data(), t.data())) return false;
    const double n = norm2(t);
    if (!(n > 0.0) || !std::isfinite(n)) return false;
    for (double& x : t) x /= n;
    return true;
}

}  // namespace detail

// --- continuation results ----------------------------------------------------

enum class Termination { domain_boundary, max_points, no_convergence, closed_loop, not_run };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::domain_boundary: return "domain_boundary";
        case Termination::max_points: return "max_points";
        case Termination::no_convergence: return "no_convergence";
        case Termination::closed_loop: return "closed_loop";
        case Termination::not_run: return "not_run";
    }
    return "?";
}

enum class BifKind { fold, cusp, bt };

inline const char* to_string(BifKind k) {
    switch (k) {
        case BifKind::fold: return "fold";
        case BifKind::cusp: return "cusp";
        case BifKind::bt: return "bt";
    }
    return "?";
}

struct BifurcationPoint {
    BifKind kind = BifKind::fold;
    double z1 = 0.0;
    std::vector<ParamId> param_ids;   // active parameters of the solve
    std::vector<double> params;       // external values, aligned with param_ids
    double keff = 0.0;
    double sigma_pp = 0.0;
    double trace = 0.0;
    bool reduced_precision = false;
};

struct CurvePoint {
    std::vector<double> u;  // internal: (z1, active params...)
    std::vector<double> p;  // external active parameter values
    double z1 = 0.0;
    double test_fold = 0.0;  // k_eff
    double test_cusp = 0.0;  // sigma''
    double test_bt = 0.0;    // trace
};

struct ContinuedCurve {
    std::vector<CurvePoint> points;
    std::size_t seed_index = 0;
    Termination term_backward = Termination::not_run;
    Termination term_forward = Termination::not_run;
    std::vector<BifurcationPoint> folds;  // refined folds (equilibrium branches)
    std::vector<BifurcationPoint> cusps;  // refined cusps (fold curves)
    std::vector<BifurcationPoint> bts;    // BT points
    std::string diagnostics;
};

namespace detail {

inline CurvePoint make_point(const DefiningSystem& sys, const std::vector<double>& u) {
    CurvePoint cp;
    cp.u = u;
    cp.z1 = u[0];
    const auto& fam = sys.family();
    const auto ev = fam.eval(std::span<const double>(u).subspan(1));
    for (int k = 0; k < fam.n_active(); ++k)
        cp.p.push_back(fam.report(k, u[static_cast<std::size_t>(k + 1)]));
    cp.test_fold = k_eff(u[0], ev.c, ev.gamma);
    cp.test_cusp = restoring_force_pp(u[0], ev.c, ev.gamma);
    cp.test_bt = -ev.xi;
    return cp;
}

// March one direction from the seed; appends points after the seed point.
inline Termination march(const DefiningSystem& sys, std::vector<double> u,
                         std::vector<double> tan, const ContinuationSettings& cs,
                         std::vector<CurvePoint>& out, const std::vector<double>& loop_ref) {
    const int d = sys.dim();
    const std::vector<double> tan0 = tan;  // loop closure needs the direction too
    double h = cs.step_init;
    int points = 0;

    while (points < cs.max_points) {
        std::vector<double> u_pred(u);
        for (int i = 0; i < d; ++i) u_pred[static_cast<std::size_t>(i)] += h * tan[static_cast<std::size_t>(i)];
        std::vector<double> u_new(u_pred);
        const int iters = detail::newton_arclength(sys, u_new, tan, u_pred, 0.0, cs);

        bool accept = iters >= 0;
        std::vector<double> tan_new;
        if (accept) {
            accept = detail::curve_tangent(sys, u_new, tan, tan_new);
            if (accept && detail::dot(tan_new, tan) <= 0.0) accept = false;  // direction reversal
        }

        if (!accept) {
            h *= cs.shrink;
            if (h < cs.step_min) return Termination::no_convergence;
            continue;
        }

        if (!sys.family().in_domain(std::span<const double>(u_new).subspan(1), true)) {
            // bisect the step down to the domain boundary, keep the last
            // converged in-domain point, then stop
            double lo = 0.0, hi = h;
            std::vector<double> best;
            for (int it = 0; it < 60 && hi - lo > 1e-14 * (1.0 + h); ++it) {
                const double mid = 0.5 * (lo + hi);
                std::vector<double> up(u);
                for (int i = 0; i < d; ++i) up[static_cast<std::size_t>(i)] += mid * tan[static_cast<std::size_t>(i)];
                std::vector<double> uc(up);
                if (detail::newton_arclength(sys, uc, tan, up, 0.0, cs) >= 0 &&
                    sys.family().in_domain(std::span<const double>(uc).subspan(1), true)) {
                    lo = mid;
                    best = uc;
                } else {
                    hi = mid;
                }
            }
            if (!best.empty()) out.push_back(make_point(sys, best));
            return Termination::domain_boundary;
        }

        out.push_back(make_point(sys, u_new));
        ++points;

        // closed-loop detection: back at the seed moving the same way
        // (the direction test keeps a second sheet passing nearby, e.g.
        // near a cusp pinch, from truncating the curve)
        if (points > 10) {
            double dist = 0.0;
            for (int i = 0; i < d; ++i) {
                const double dx = u_new[static_cast<std::size_t>(i)] - loop_ref[static_cast<std::size_t>(i)];
                dist += dx * dx;
            }
            if (std::sqrt(dist) < 0.75 * h && detail::dot(tan_new, tan0) > 0.9)
                return Termination::closed_loop;
        }

        u = std::move(u_new);
        tan = std::move(tan_new);
        if (iters <= 4) h = std::min(h * cs.grow, cs.step_max);
    }
    return Termination::max_points;
}

}  // namespace detail

// Trace the solution curve of the defining system through a seed, marching
// in both arclength directions and concatenating.  The seed must satisfy
// the defining equations to Newton tolerance (it is re-corrected first
// along the least-sensitive direction).
inline ContinuedCurve trace_curve(const DefiningSystem& sys, std::vector<double> u_seed,
                                  const ContinuationSettings& cs) {
    cs.validate();
    const int d = sys.dim();
    if (static_cast<int>(u_seed.size()) != d)
        throw std::invalid_argument("trace_curve: seed dimension mismatch");

    // initial tangent: try unit directions as the previous-tangent surrogate
    std::vector<double> tan;
    bool have_tan = false;
    for (int trial = d - 1; trial >= 0 && !have_tan; --trial) {
        std::vector<double> prev(static_cast<std::size_t>(d), 0.0);
        prev[static_cast<std::size_t>(trial)] = 1.0;
        have_tan = detail::curve_tangent(sys, u_seed, prev, tan);
    }
    if (!have_tan) throw std::runtime_error("trace_curve: singular defining system at the seed");

    // correct the seed itself (projection orthogonal to the tangent)
    {
        std::vector<double> u0(u_seed);
        if (detail::newton_arclength(sys, u_seed, tan, u0, 0.0, cs) < 0)
            throw std::runtime_error("trace_curve: seed does not satisfy the defining system");
    }

    ContinuedCurve curve;
    std::vector<CurvePoint> fwd, bwd;
    curve.term_forward = detail::march(sys, u_seed, tan, cs, fwd, u_seed);
    std::vector<double> tneg(tan);
    for (double& x : tneg) x = -x;
    curve.term_backward = detail::march(sys, u_seed, tneg, cs, bwd, u_seed);

    curve.points.reserve(bwd.size() + 1 + fwd.size());
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) curve.points.push_back(*it);
    curve.seed_index = curve.points.size();
    curve.points.push_back(detail::make_point(sys, u_seed));
    for (auto& p : fwd) curve.points.push_back(std::move(p));
    return curve;
}

// --- bifurcation point refinement ---------------------------------------------

namespace detail {

inline BifurcationPoint finish_point(const CoeffFamily& fam, BifKind kind,
                                     const std::vector<double>& u, bool reduced) {
    BifurcationPoint bp;
    bp.kind = kind;
    bp.z1 = u[0];
    bp.reduced_precision = reduced;
    const auto ev = fam.eval(std::span<const double>(u).subspan(1));
    bp.keff = k_eff(u[0], ev.c, ev.gamma);
    bp.sigma_pp = restoring_force_pp(u[0], ev.c, ev.gamma);
    bp.trace = -ev.xi;
    for (int k = 0; k < fam.n_active(); ++k) {
        bp.param_ids.push_back(fam.active(k));
        bp.params.push_back(fam.report(k, u[static_cast<std::size_t>(k + 1)]));
    }
    return bp;
}

// Square Newton on a point-defining system with as many equations as
// unknowns (fold: 2, cusp/BT: 3).  As in the arclength corrector, one
// extra step is taken after the tolerance is met.
inline bool newton_point(const DefiningSystem& sys, std::vector<double>& u, double tol,
                         int max_iter) {
    const int d = sys.dim();
    const int ne = sys.n_eq();
    if (ne != d) throw std::invalid_argument("newton_point: system is not square");
    std::vector<double> r(static_cast<std::size_t>(ne)), scale(static_cast<std::size_t>(ne), 1.0);
    std::vector<double> A(static_cast<std::size_t>(ne * d));
    bool polished = false;
    std::vector<double> u_ok;
    for (int it = 0; it <= max_iter; ++it) {
        if (!sys.family().in_domain(std::span<const double>(u).subspan(1), false)) {
            if (polished) u = u_ok;
            return polished;
        }
        sys.residual(u, r.data(), scale.data());
        bool ok = true;
        for (int i = 0; i < ne; ++i)
            ok = ok && std::abs(r[static_cast<std::size_t>(i)]) <= tol * scale[static_cast<std::size_t>(i)];
        if (ok) {
            if (polished) return true;
            polished = true;
            u_ok = u;
        }
        if (it == max_iter) break;
        sys.jacobian(u, A.data());
        std::vector<double> rhs(static_cast<std::size_t>(ne));
        for (int i = 0; i < ne; ++i) rhs[static_cast<std::size_t>(i)] = -r[static_cast<std::size_t>(i)];
        std::vector<double> Asq(A);
        if (!linsolve(ne, Asq.data(), rhs.data())) {
            if (polished) u = u_ok;
            return polished;
        }
        double step = 0.0;
        for (int i = 0; i < ne; ++i) {
            u[static_cast<std::size_t>(i)] += rhs[static_cast<std::size_t>(i)];
            step = std::max(step, std::abs(rhs[static_cast<std::size_t>(i)]));
        }
        if (!std::isfinite(step) || step > 1e6) {
            if (polished) u = u_ok;
            return polished;
        }
    }
    if (polished) u = u_ok;
    return polished;
}

}  // namespace detail

// Refine a fold bracketed by two equilibrium-branch points (family with one
// active parameter).  Newton on {f = 0, k_eff = 0} in (z1, p); a Newton
// failure falls back to bisection along the branch, flagged as reduced
// precision.
inline std::optional<BifurcationPoint> locate_fold(const CoeffFamily& fam,
                                                   const CurvePoint& a, const CurvePoint& b,
                                                   const ContinuationSettings& cs) {
    if (fam.n_active() != 1) throw std::invalid_argument("locate_fold: need exactly one active parameter");
    DefiningSystem fold_sys(fam, 2);

    // secant seed on the test function
    const double ta = a.test_fold, tb = b.test_fold;
    const double w = (ta - tb != 0.0) ? ta / (ta - tb) : 0.5;
    std::vector<double> u(2);
    for (int i = 0; i < 2; ++i)
        u[static_cast<std::size_t>(i)] = (1.0 - w) * a.u[static_cast<std::size_t>(i)] +
                                         w * b.u[static_cast<std::size_t>(i)];

    if (detail::newton_point(fold_sys, u, cs.newton_tol, cs.newton_max_iter))
        return detail::finish_point(fam, BifKind::fold, u, false);

    // bisection fallback: corrector-projected midpoints along the segment
    DefiningSystem eq_sys(fam, 1);
    std::vector<double> ua(a.u), ub(b.u);
    double fa = ta;
    std::vector<double> tan(2);
    for (int i = 0; i < 2; ++i) tan[static_cast<std::size_t>(i)] = ub[static_cast<std::size_t>(i)] - ua[static_cast<std::size_t>(i)];
    const double tn = detail::norm2(tan);
    if (!(tn > 0.0)) return std::nullopt;
    for (double& x : tan) x /= tn;

    for (int it = 0; it < 80; ++it) {
        std::vector<double> um(2);
        for (int i = 0; i < 2; ++i) um[static_cast<std::size_t>(i)] = 0.5 * (ua[static_cast<std::size_t>(i)] + ub[static_cast<std::size_t>(i)]);
        if (detail::newton_arclength(eq_sys, um, tan, um, 0.0, cs) < 0) return std::nullopt;
        const auto ev = fam.eval(std::span<const double>(um).subspan(1));
        const double fm = k_eff(um[0], ev.c, ev.gamma);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            ua = um;
            fa = fm;
        } else {
            ub = um;
        }
    }
    std::vector<double> um(2);
    for (int i = 0; i < 2; ++i) um[static_cast<std::size_t>(i)] = 0.5 * (ua[static_cast<std::size_t>(i)] + ub[static_cast<std::size_t>(i)]);
    return detail::finish_point(fam, BifKind::fold, um, true);
}

// Equilibrium-branch continuation in one free parameter with fold detection.
inline ContinuedCurve continue_equilibrium(const CoeffFamily& fam, double z1_start,
                                           double p_start_internal,
                                           const ContinuationSettings& cs) {
    if (fam.n_active() != 1)
        throw std::invalid_argument("continue_equilibrium: need exactly one active parameter");
    DefiningSystem sys(fam, 1);
    auto curve = trace_curve(sys, {z1_start, p_start_internal}, cs);
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const auto& a = curve.points[i];
        const auto& b = curve.points[i + 1];
        if (a.test_fold == 0.0) continue;
        if ((a.test_fold < 0.0) != (b.test_fold < 0.0)) {
            if (auto f = locate_fold(fam, a, b, cs)) curve.folds.push_back(*f);
        }
    }
    return curve;
}

// Beam-model wrapper: free is one of {slow_d, sigma, gamma, kappa, h0}.
// When slow_d is not the free parameter the slow variable stays at start_d.
inline ContinuedCurve continue_equilibrium(const BeamFoundationParams& params, ParamId free,
                                           double z1_start, double start_value, double start_d,
                                           const ContinuationSettings& cs) {
    BeamFamily fam(params, {free}, start_d);
    return continue_equilibrium(fam, z1_start, fam.internal(0, start_value), cs);
}

// Start from a classified equilibrium; the free parameter begins at its
// value in params (or at the record's slow value when d itself is free).
inline ContinuedCurve continue_equilibrium(const BeamFoundationParams& params, ParamId free,
                                           const EquilibriumRecord& start,
                                           const ContinuationSettings& cs) {
    double start_value = 0.0;
    switch (free) {
        case ParamId::slow_d: start_value = start.d; break;
        case ParamId::sigma: start_value = params.sigma; break;
        case ParamId::gamma: start_value = params.gamma; break;
        case ParamId::kappa: start_value = params.kappa; break;
        case ParamId::h0: start_value = params.h0; break;
        default: throw std::invalid_argument("continue_equilibrium: not a beam parameter");
    }
    return continue_equilibrium(params, free, start.z1_star, start_value, start.d, cs);
}

// --- fold curves, cusps, BT -----------------------------------------------------

// Normal-form data of the cusp test at one point of a fold curve: the
// inflection x0 of the restoring force, the Taylor data (A, B, D) there and
// the bifurcation-set residual 27 A^2 D + 4 B^3 (zero on the cusp set).
struct CuspResidual {
    double x0 = 0.0;
    double A = 0.0, B = 0.0, D = 0.0;
    double residual = 0.0;
};

inline CuspResidual cusp_normal_form(const CoeffFamily& fam, const CurvePoint& pt) {
    CuspResidual out;
    const auto ev = fam.eval(std::span<const double>(pt.u).subspan(1));
    if (ev.gamma == 0.0) {
        out.x0 = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.x0 = 4.0 * ev.c.G / (9.0 * ev.gamma);
    out.A = restoring_force(out.x0, ev.c, ev.gamma);
    out.B = effective_stiffness(out.x0, ev.c, ev.gamma);
    out.D = -0.75 * ev.gamma;  // sigma''' / 6
    out.residual = 27.0 * out.A * out.A * out.D + 4.0 * out.B * out.B * out.B;
    return out;
}

// Fold-curve continuation in two free parameters.  The curve carries the
// cusp and BT test functions; sign changes of the cusp test are refined by
// detect_cusp below.
inline ContinuedCurve continue_fold_curve(const CoeffFamily& fam, double z1_seed,
                                          double p1_seed_internal, double p2_seed_internal,
                                          const ContinuationSettings& cs) {
    if (fam.n_active() != 2)
        throw std::invalid_argument("continue_fold_curve: need exactly two active parameters");
    DefiningSystem sys(fam, 2);
    return trace_curve(sys, {z1_seed, p1_seed_internal, p2_seed_internal}, cs);
}

// Refine every sign change of the cusp test function sigma'' along a fold
// curve.  Each refined cusp is checked for the third-derivative
// nondegeneracy sigma''' = -(9/2) gamma != 0; a degenerate candidate
// (gamma = 0) is flagged reduced_precision instead of silently dropped.
inline std::vector<BifurcationPoint> detect_cusp(const CoeffFamily& fam, ContinuedCurve& curve,
                                                 const ContinuationSettings& cs) {
    std::vector<BifurcationPoint> cusps;
    if (fam.n_active() != 2) throw std::invalid_argument("detect_cusp: need a two-parameter family");
    DefiningSystem sys(fam, 3, DefiningSystem::ThirdRow::cusp);
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const auto& a = curve.points[i];
        const auto& b = curve.points[i + 1];
        if ((a.test_cusp < 0.0) == (b.test_cusp < 0.0)) continue;
        const double ta = a.test_cusp, tb = b.test_cusp;
        const double w = (ta - tb != 0.0) ? ta / (ta - tb) : 0.5;
        std::vector<double> u(3);
        for (int j = 0; j < 3; ++j)
            u[static_cast<std::size_t>(j)] = (1.0 - w) * a.u[static_cast<std::size_t>(j)] +
                                             w * b.u[static_cast<std::size_t>(j)];
        if (!detail::newton_point(sys, u, cs.newton_tol, cs.newton_max_iter)) continue;
        const auto ev = fam.eval(std::span<const double>(u).subspan(1));
        const bool degenerate = std::abs(4.5 * ev.gamma) < 1e-12;
        auto bp = detail::finish_point(fam, BifKind::cusp, u, degenerate);
        cusps.push_back(bp);
        curve.cusps.push_back(bp);
    }
    return cusps;
}

enum class BtMode { fixed, freed };

struct BtResult {
    std::vector<BifurcationPoint> points;
    std::string diagnostics;
};

// BT detection along a fold curve.  The fast-subsystem trace is identically
// -xi, so with fixed damping the test can only fire at xi <= tol; the freed
// mode instead continues the fold in (z1, p1, xi) from the curve seed (the
// fold conditions do not involve xi, so the continuation walks xi down) and
// refines the trace zero crossing.
inline BtResult detect_bt(const CoeffFamily& fam, const ContinuedCurve& curve, BtMode mode,
                          const ContinuationSettings& cs, double trace_tol = 1e-8) {
    BtResult out;
    if (curve.points.empty()) return out;

    if (mode == BtMode::fixed) {
        for (const auto& pt : curve.points) {
            if (std::abs(pt.test_bt) <= trace_tol) {
                std::vector<double> u(pt.u);
                out.points.push_back(detail::finish_point(fam, BifKind::bt, u, false));
            }
        }
        if (out.points.empty())
            out.diagnostics =
                "no BT at fixed damping: the fast-subsystem trace is identically -xi = " +
                std::to_string(curve.points[curve.seed_index].test_bt) +
                ", so a double-zero eigenvalue requires freeing xi";
        else if (out.points.size() == curve.points.size())
            out.diagnostics =
                "xi = 0: every fold point carries a double-zero eigenvalue (trace and "
                "determinant both vanish); the whole curve is a BT continuum";
        return out;
    }

    // freed mode: actives (p1, xi), second original parameter frozen at the seed
    const auto& seed = curve.points[curve.seed_index];
    const auto ev = fam.eval(std::span<const double>(seed.u).subspan(1));
    if (std::abs(ev.xi) <= trace_tol) {
        std::vector<double> u(seed.u);
        out.points.push_back(detail::finish_point(fam, BifKind::bt, u, false));
        out.diagnostics = "seed fold already has trace 0";
        return out;
    }

    std::unique_ptr<CoeffFamily> xfam;
    if (auto* bf = dynamic_cast<const BeamFamily*>(&fam)) {
        BeamFoundationParams p = bf->base();
        // freeze p2 at the seed's external value
        double fixed_d = bf->fixed_d();
        switch (fam.active(1)) {
            case ParamId::slow_d: fixed_d = seed.p[1]; break;
            case ParamId::sigma: p.sigma = seed.p[1]; break;
            case ParamId::gamma: p.gamma = seed.p[1]; break;
            case ParamId::kappa: p.kappa = seed.p[1]; break;
            case ParamId::h0: p.h0 = seed.p[1]; break;
            default: break;
        }
        xfam = std::make_unique<BeamFamily>(p, std::vector<ParamId>{fam.active(0), ParamId::xi},
                                            fixed_d);
    } else if (auto* sf = dynamic_cast<const SurrogateFamily*>(&fam)) {
        SurrogateCoeffs s = sf->base;
        switch (fam.active(1)) {
            case ParamId::sur_J: s.J0 = seed.p[1]; break;
            case ParamId::sur_F: s.F0 = seed.p[1]; break;
            case ParamId::sur_G: s.G0 = seed.p[1]; break;
            case ParamId::gamma: s.gamma = seed.p[1]; break;
            default: break;
        }
        xfam = std::make_unique<SurrogateFamily>(
            s, sf->xi, std::vector<ParamId>{fam.active(0), ParamId::xi});
    } else {
        out.diagnostics = "freed-xi BT continuation is not available for this family";
        return out;
    }

    DefiningSystem sys(*xfam, 2);
    std::vector<double> u_seed = {seed.u[0], seed.u[1], ev.xi};
    auto xi_curve = trace_curve(sys, u_seed, cs);

    const int xi_col = 2;
    for (std::size_t i = 0; i + 1 < xi_curve.points.size(); ++i) {
        const auto& a = xi_curve.points[i];
        const auto& b = xi_curve.points[i + 1];
        const double ta = a.test_bt, tb = b.test_bt;
        const bool crosses = (ta < 0.0) != (tb < 0.0) || std::abs(tb) <= trace_tol;
        if (!crosses || std::abs(ta) <= trace_tol) continue;
        DefiningSystem bt_sys(*xfam, 3, DefiningSystem::ThirdRow::bt);
        std::vector<double> u(a.u);
        u[static_cast<std::size_t>(xi_col)] = 0.0;  // trace = -xi vanishes exactly at xi = 0
        if (detail::newton_point(bt_sys, u, cs.newton_tol, cs.newton_max_iter))
            out.points.push_back(detail::finish_point(*xfam, BifKind::bt, u, false));
    }
    // domain-boundary endpoint at xi = 0 also qualifies
    if (out.points.empty() && !xi_curve.points.empty()) {
        for (const auto& endpt : {xi_curve.points.front(), xi_curve.points.back()}) {
            if (std::abs(endpt.test_bt) <= 1e-6) {
                DefiningSystem bt_sys(*xfam, 3, DefiningSystem::ThirdRow::bt);
                std::vector<double> u(endpt.u);
                u[static_cast<std::size_t>(xi_col)] = 0.0;
                if (detail::newton_point(bt_sys, u, cs.newton_tol, cs.newton_max_iter)) {
                    out.points.push_back(detail::finish_point(*xfam, BifKind::bt, u, false));
                    break;
                }
            }
        }
    }
    if (out.points.empty())
        out.diagnostics = "freed-xi continuation did not reach trace = 0 within its domain";
    return out;
}

// --- grid-scan oracle -----------------------------------------------------------

// Brute-force equilibrium root count over a rectangular grid of two active
// parameters (external values).  Cells whose corner counts disagree are
// fold brackets; every continuation result is cross-validated against them.
struct GridScan {
    std::vector<double> p1, p2;  // node coordinates
    std::vector<int> counts;     // row-major: counts[i2 * n1 + i1]
    int n1 = 0, n2 = 0;

    int count_at(int i1, int i2) const { return counts[static_cast<std::size_t>(i2 * n1 + i1)]; }

    // cells touching an out-of-domain node (count -1) are not brackets
    bool cell_is_bracket(int i1, int i2) const {
        const int c00 = count_at(i1, i2), c10 = count_at(i1 + 1, i2);
        const int c01 = count_at(i1, i2 + 1), c11 = count_at(i1 + 1, i2 + 1);
        if (c00 < 0 || c10 < 0 || c01 < 0 || c11 < 0) return false;
        return !(c00 == c10 && c00 == c01 && c00 == c11);
    }

    // index of the cell containing (x1, x2), clamped to the grid
    std::pair<int, int> cell_of(double x1, double x2) const {
        auto find = [](const std::vector<double>& g, double x) {
            auto it = std::upper_bound(g.begin(), g.end(), x);
            int i = static_cast<int>(it - g.begin()) - 1;
            return std::clamp(i, 0, static_cast<int>(g.size()) - 2);
        };
        return {find(p1, x1), find(p2, x2)};
    }

    std::vector<std::pair<int, int>> bracket_cells() const {
        std::vector<std::pair<int, int>> out;
        for (int i2 = 0; i2 + 1 < n2; ++i2)
            for (int i1 = 0; i1 + 1 < n1; ++i1)
                if (cell_is_bracket(i1, i2)) out.emplace_back(i1, i2);
        return out;
    }
};

inline GridScan grid_scan_oracle(const CoeffFamily& fam, double lo1, double hi1, int n1,
                                 double lo2, double hi2, int n2) {
    if (fam.n_active() != 2) throw std::invalid_argument("grid_scan_oracle: need a two-parameter family");
    if (n1 < 2 || n2 < 2 || !(hi1 > lo1) || !(hi2 > lo2))
        throw std::invalid_argument("grid_scan_oracle: degenerate grid");
    GridScan scan;
    scan.n1 = n1;
    scan.n2 = n2;
    scan.p1 = uniform_grid(lo1, hi1, n1);
    scan.p2 = uniform_grid(lo2, hi2, n2);
    scan.counts.resize(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2), -1);
    std::vector<double> u(2);
    for (int i2 = 0; i2 < n2; ++i2) {
        for (int i1 = 0; i1 < n1; ++i1) {
            u[0] = fam.internal(0, scan.p1[static_cast<std::size_t>(i1)]);
            u[1] = fam.internal(1, scan.p2[static_cast<std::size_t>(i2)]);
            int cnt = -1;  // out of domain
            if (fam.in_domain(u, false)) {
                const auto ev = fam.eval(u);
                const auto roots = equilibrium_roots(ev.c, ev.gamma);
                cnt = 0;
                for (int r = 0; r < roots.count; ++r)
                    cnt += roots.multiplicity[static_cast<std::size_t>(r)];
            }
            scan.counts[static_cast<std::size_t>(i2 * n1 + i1)] = cnt;
        }
    }
    return scan;
}

// Root-count change inside one cell at sub-grid resolution m x m.  The
// 4-corner test can miss a change when a tongue of the count locus
// narrower than the cell crosses it (near cusps); this stays a pure
// count oracle, just better resolved.
inline bool cell_has_root_count_change(const CoeffFamily& fam, const GridScan& scan, int i1,
                                       int i2, int m = 7) {
    const double a1 = scan.p1[static_cast<std::size_t>(i1)];
    const double b1 = scan.p1[static_cast<std::size_t>(i1 + 1)];
    const double a2 = scan.p2[static_cast<std::size_t>(i2)];
    const double b2 = scan.p2[static_cast<std::size_t>(i2 + 1)];
    int first = -2;
    std::vector<double> u(2);
    for (int j2 = 0; j2 < m; ++j2) {
        for (int j1 = 0; j1 < m; ++j1) {
            u[0] = fam.internal(0, a1 + (b1 - a1) * j1 / (m - 1));
            u[1] = fam.internal(1, a2 + (b2 - a2) * j2 / (m - 1));
            int cnt = -1;
            if (fam.in_domain(u, false)) {
                const auto ev = fam.eval(u);
                const auto roots = equilibrium_roots(ev.c, ev.gamma);
                cnt = 0;
                for (int r = 0; r < roots.count; ++r)
                    cnt += roots.multiplicity[static_cast<std::size_t>(r)];
            }
            if (first == -2) first = cnt;
            else if (cnt != first) return true;
        }
    }
    return false;
}

// Locate a fold seed inside a bracket cell: bisect the root-count change
// along one grid line of the cell, take the colliding root pair at the
// change point, and polish with the square fold solve.
inline std::optional<std::array<double, 3>> seed_fold_in_cell(const CoeffFamily& fam,
                                                              const GridScan& scan, int i1, int i2,
                                                              const ContinuationSettings& cs) {
    auto count_roots = [&](double x1, double x2, RealRoots* roots_out = nullptr) {
        std::vector<double> u = {fam.internal(0, x1), fam.internal(1, x2)};
        if (!fam.in_domain(u, false)) return -1;
        const auto ev = fam.eval(u);
        const auto roots = equilibrium_roots(ev.c, ev.gamma);
        if (roots_out) *roots_out = roots;
        int cnt = 0;
        for (int r = 0; r < roots.count; ++r) cnt += roots.multiplicity[static_cast<std::size_t>(r)];
        return cnt;
    };

    const double x1a = scan.p1[static_cast<std::size_t>(i1)], x1b = scan.p1[static_cast<std::size_t>(i1 + 1)];
    const double x2a = scan.p2[static_cast<std::size_t>(i2)], x2b = scan.p2[static_cast<std::size_t>(i2 + 1)];

    // axis-aligned slices: the two mid-lines plus the four edges (a bracket
    // cell always has at least one edge whose endpoint counts differ, which
    // covers corner-clipping loci the mid-lines miss)
    struct Slice {
        bool along_p1;
        double fixed;
        double lo, hi;
    };
    const double mid1 = 0.5 * (x1a + x1b), mid2 = 0.5 * (x2a + x2b);
    for (const Slice s : {Slice{true, mid2, x1a, x1b}, Slice{false, mid1, x2a, x2b},
                          Slice{true, x2a, x1a, x1b}, Slice{true, x2b, x1a, x1b},
                          Slice{false, x1a, x2a, x2b}, Slice{false, x1b, x2a, x2b}}) {
        double lo = s.lo, hi = s.hi;
        auto at = [&](double x) { return s.along_p1 ? count_roots(x, s.fixed) : count_roots(s.fixed, x); };
        int clo = at(lo), chi = at(hi);
        if (clo < 0 || chi < 0 || clo == chi) continue;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const int cm = at(mid);
            if (cm == clo) lo = mid;
            else hi = mid;
        }
        // colliding pair on the richer side
        RealRoots ra, rb;
        (void)(s.along_p1 ? count_roots(lo, s.fixed, &ra) : count_roots(s.fixed, lo, &ra));
        (void)(s.along_p1 ? count_roots(hi, s.fixed, &rb) : count_roots(s.fixed, hi, &rb));
        const RealRoots& rich = (ra.count >= rb.count) ? ra : rb;
        double z_seed = rich.z[0];
        bool have_double = false;
        // the root pair being born at the fold either shows up as an
        // explicit multiple root or as the closest pair
        for (int r = 0; r < rich.count; ++r) {
            if (rich.multiplicity[static_cast<std::size_t>(r)] >= 2) {
                z_seed = rich.z[static_cast<std::size_t>(r)];
                have_double = true;
            }
        }
        if (!have_double && rich.count >= 2) {
            double best_gap = std::numeric_limits<double>::infinity();
            for (int r = 0; r + 1 < rich.count; ++r) {
                const double gap = rich.z[static_cast<std::size_t>(r + 1)] - rich.z[static_cast<std::size_t>(r)];
                if (gap < best_gap) {
                    best_gap = gap;
                    z_seed = 0.5 * (rich.z[static_cast<std::size_t>(r + 1)] + rich.z[static_cast<std::size_t>(r)]);
                }
            }
        }
        const double xs1 = s.along_p1 ? 0.5 * (lo + hi) : s.fixed;
        const double xs2 = s.along_p1 ? s.fixed : 0.5 * (lo + hi);
        std::vector<double> u = {z_seed, fam.internal(0, xs1), fam.internal(1, xs2)};
        DefiningSystem fold_sys(fam, 2);
        // square solve in (z1, the sliced parameter), holding the other fixed:
        // use the full 3-unknown Newton with an arclength row pinned to the
        // fixed parameter direction instead
        ContinuationSettings local = cs;
        std::vector<double> pin(3, 0.0);
        pin[s.along_p1 ? 2 : 1] = 1.0;
        std::vector<double> uref(u);
        if (detail::newton_arclength(fold_sys, u, pin, uref, 0.0, local) < 0) continue;
        // reject a polish that left the cell neighborhood (near |d| = 1 the
        // angle column of the Jacobian is small and Newton can overshoot to
        // the mirrored fold)
        if (std::abs(fam.report(0, u[1]) - xs1) > 2.0 * (x1b - x1a) ||
            std::abs(fam.report(1, u[2]) - xs2) > 2.0 * (x2b - x2a))
            continue;
        return std::array<double, 3>{u[0], u[1], u[2]};
    }
    return std::nullopt;
}

}  // namespace foldwave
