#pragma once

// Equilibrium classification and the critical manifold: all fast-subsystem
// equilibria swept over the slow variable d, threaded into branches, with
// root-count changes flagged as fold brackets.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "foldwave/cubic.hpp"
#include "foldwave/model.hpp"

namespace foldwave {

enum class Stability { stable_focus, stable_node, saddle, center, degenerate };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable_focus: return "stable-focus";
        case Stability::stable_node: return "stable-node";
        case Stability::saddle: return "saddle";
        case Stability::center: return "center";
        case Stability::degenerate: return "degenerate";
    }
    return "?";
}

// One classified equilibrium of the fast subsystem at slow value d.
struct EquilibriumRecord {
    double d = 0.0;
    double z1_star = 0.0;
    double keff = 0.0;  // constant term of lambda^2 + xi lambda + keff
    std::complex<double> lambda1, lambda2;
    Stability stability = Stability::degenerate;
    int multiplicity = 1;
};

inline double coeff_scale(const SlowFastCoefficients& c, double gamma, double z1) {
    return std::max({1.0, std::abs(c.F), std::abs(c.J * z1), std::abs(c.G * z1 * z1),
                     std::abs(0.75 * gamma * z1 * z1 * z1)});
}

// Eigenvalues and stability class of an equilibrium.  z1_star must satisfy
// the equilibrium condition to within residual_tol * scale.
inline EquilibriumRecord classify(double z1_star, const SlowFastCoefficients& c, double gamma,
                                  double xi, double d = 0.0, double residual_tol = 1e-8) {
    const double res = restoring_force(z1_star, c, gamma);
    const double scale = coeff_scale(c, gamma, z1_star);
    if (std::abs(res) > residual_tol * scale)
        throw std::invalid_argument("classify: z1 is not an equilibrium (residual " +
                                    std::to_string(res) + ")");

    EquilibriumRecord rec;
    rec.d = d;
    rec.z1_star = z1_star;
    rec.keff = k_eff(z1_star, c, gamma);

    const double disc = xi * xi - 4.0 * rec.keff;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        rec.lambda1 = std::complex<double>(0.5 * (-xi + s), 0.0);
        rec.lambda2 = std::complex<double>(0.5 * (-xi - s), 0.0);
    } else {
        const double w = 0.5 * std::sqrt(-disc);
        rec.lambda1 = std::complex<double>(-0.5 * xi, w);
        rec.lambda2 = std::complex<double>(-0.5 * xi, -w);
    }

    const double kscale = std::max({1.0, std::abs(c.J), std::abs(c.G * z1_star),
                                    std::abs(2.25 * gamma * z1_star * z1_star)});
    if (std::abs(rec.keff) <= 1e-9 * kscale) {
        rec.stability = Stability::degenerate;  // fold candidate
    } else if (rec.keff < 0.0) {
        rec.stability = Stability::saddle;
    } else if (xi == 0.0) {
        rec.stability = Stability::center;
    } else if (xi * xi < 4.0 * rec.keff) {
        rec.stability = Stability::stable_focus;
    } else {
        rec.stability = Stability::stable_node;
    }
    return rec;
}

// One connected piece of the critical manifold.
struct ManifoldBranch {
    int id = 0;
    std::vector<EquilibriumRecord> points;
};

// Grid cell [d_lo, d_hi] across which the equilibrium count changes.
struct FoldBracket {
    double d_lo = 0.0, d_hi = 0.0;
    int count_lo = 0, count_hi = 0;
};

struct ManifoldResult {
    std::vector<ManifoldBranch> branches;
    std::vector<FoldBracket> fold_brackets;
};

// Coefficients as a function of the slow value; lets the sweep run either on
// the beam model or on an injected surrogate family.
struct CoeffsOfD {
    virtual ~CoeffsOfD() = default;
    virtual SlowFastCoefficients coeffs(double d) const = 0;
    virtual double cubic_gamma() const = 0;
};

struct BeamCoeffsOfD final : CoeffsOfD {
    BeamFoundationParams p;
    int branch_sign = +1;
    explicit BeamCoeffsOfD(const BeamFoundationParams& bp, int s = +1) : p(bp), branch_sign(s) {}
    SlowFastCoefficients coeffs(double d) const override {
        return coeffs_slow({d, branch_sign}, p);
    }
    double cubic_gamma() const override { return p.gamma; }
};

// Constant-coefficient family with an optional linear slow modulation of the
// forcing; used by tests and the surrogate CLI mode.
struct SurrogateCoeffs final : CoeffsOfD {
    double J0 = -3.0, F0 = 0.0, G0 = 0.0, gamma = 4.0;
    double F_slope = 0.0;  // F(d) = F0 + F_slope * d
    SlowFastCoefficients coeffs(double d) const override { return {F0 + F_slope * d, J0, G0}; }
    double cubic_gamma() const override { return gamma; }
};

inline std::vector<double> uniform_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / double(n - 1);
    return g;
}

// Sweep the equilibria over a monotone d-grid and thread them into branches
// by nearest-neighbor matching in z1.  A match is rejected when the jump
// exceeds 10x the median inter-root spacing at that grid point (there is no
// published recipe for assembling the branches, so the guard is explicit).
inline ManifoldResult critical_manifold(const CoeffsOfD& model, std::span<const double> d_grid,
                                        double xi) {
    if (d_grid.size() < 2) throw std::invalid_argument("critical_manifold: need at least 2 grid points");
    for (std::size_t i = 0; i + 1 < d_grid.size(); ++i)
        if (!(d_grid[i] < d_grid[i + 1]))
            throw std::invalid_argument("critical_manifold: d grid must be strictly increasing");
    if (!(std::abs(d_grid.front()) <= 1.0 && std::abs(d_grid.back()) <= 1.0))
        throw std::domain_error("critical_manifold: d grid must lie in [-1, 1]");

    ManifoldResult out;
    std::vector<int> open;  // branch index per currently tracked root
    int next_id = 0;
    int prev_count = -1;
    double prev_d = 0.0;

    for (double d : d_grid) {
        const auto c = model.coeffs(d);
        const double gamma = model.cubic_gamma();
        const auto roots = equilibrium_roots(c, gamma);

        std::vector<EquilibriumRecord> recs;
        for (int i = 0; i < roots.count; ++i) {
            auto rec = classify(roots.z[static_cast<std::size_t>(i)], c, gamma, xi, d);
            rec.multiplicity = roots.multiplicity[static_cast<std::size_t>(i)];
            recs.push_back(rec);
        }

        if (prev_count >= 0 && roots.count != prev_count)
            out.fold_brackets.push_back({prev_d, d, prev_count, roots.count});

        // jump guard from the local root spacing
        double guard = std::numeric_limits<double>::infinity();
        if (roots.count >= 2) {
            std::vector<double> gaps;
            for (int i = 0; i + 1 < roots.count; ++i)
                gaps.push_back(roots.z[static_cast<std::size_t>(i + 1)] -
                               roots.z[static_cast<std::size_t>(i)]);
            std::sort(gaps.begin(), gaps.end());
            guard = 10.0 * gaps[gaps.size() / 2];
        }

        std::vector<int> assign(recs.size(), -1);
        std::vector<bool> used(open.size(), false);
        for (std::size_t i = 0; i < recs.size(); ++i) {
            int best = -1;
            double best_gap = guard;
            for (std::size_t jb = 0; jb < open.size(); ++jb) {
                if (used[jb]) continue;
                const auto& bp = out.branches[static_cast<std::size_t>(open[jb])].points.back();
                const double gap = std::abs(bp.z1_star - recs[i].z1_star);
                if (gap <= best_gap) {
                    best_gap = gap;
                    best = static_cast<int>(jb);
                }
            }
            if (best >= 0) {
                used[static_cast<std::size_t>(best)] = true;
                assign[i] = open[static_cast<std::size_t>(best)];
            }
        }

        std::vector<int> still_open;
        for (std::size_t i = 0; i < recs.size(); ++i) {
            int id = assign[i];
            if (id < 0) {
                id = next_id++;
                out.branches.push_back({id, {}});
            }
            out.branches[static_cast<std::size_t>(id)].points.push_back(recs[i]);
            still_open.push_back(id);
        }
        open = std::move(still_open);
        prev_count = roots.count;
        prev_d = d;
    }
    return out;
}

inline ManifoldResult critical_manifold(const BeamFoundationParams& p,
                                        std::span<const double> d_grid) {
    return critical_manifold(BeamCoeffsOfD(p), d_grid, p.xi);
}

// Number of local minima of the full potential (forcing included) over a
// z1 range that brackets every critical point.  Critical points of the full
// potential are exactly the equilibrium roots; a root is a minimum when its
// k_eff is positive.
inline int well_count(const SlowFastCoefficients& c, double gamma, double z_lo, double z_hi) {
    const auto roots = equilibrium_roots(c, gamma);
    int wells = 0;
    for (int i = 0; i < roots.count; ++i) {
        const double z = roots.z[static_cast<std::size_t>(i)];
        if (!(z >= z_lo && z <= z_hi))
            throw std::invalid_argument("well_count: z1 range does not bracket all critical points");
        if (k_eff(z, c, gamma) > 0.0) ++wells;
    }
    return wells;
}

}  // namespace foldwave
