#pragma once

// Trajectory post-processing: quiescent/spiking episode detection via a
// moving-window peak-to-peak amplitude, the transformed (d, z1) portrait,
// and the cross-check between the nonautonomous and the slow-variable
// right-hand sides.

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "foldwave/integrate.hpp"
#include "foldwave/model.hpp"

namespace foldwave {

enum class BurstPhase { quiescent, spiking };

inline const char* to_string(BurstPhase p) {
    return p == BurstPhase::quiescent ? "quiescent" : "spiking";
}

struct BurstEpisode {
    double t_start = 0.0;
    double t_end = 0.0;
    BurstPhase phase = BurstPhase::quiescent;
    double center = 0.0;  // mean z1 over the episode
    double peak = 0.0;    // max |z1 - center| over the episode
};

struct BurstReport {
    std::vector<BurstEpisode> episodes;
    int transition_count = 0;
    double window = 0.0;
    double amp_threshold = 0.0;
};

// Window default: five linearized fast periods 2 pi / sqrt(pi^4 + sigma).
inline double default_burst_window(const BeamFoundationParams& p) {
    return 5.0 * 2.0 * kPi / std::sqrt(kPi4 + std::max(p.sigma, -kPi4 * 0.99));
}

// Partition the trajectory into consecutive windows, classify each by its
// z1 peak-to-peak amplitude against the threshold, and merge adjacent
// same-phase windows into episodes.  Defaults: window from the linearized
// fast period, threshold 10% of the trajectory's global peak-to-peak.
inline BurstReport classify_bursts(const Trajectory& traj, double window = 0.0,
                                   double amp_threshold = 0.0) {
    if (traj.samples.empty()) throw std::invalid_argument("classify_bursts: empty trajectory");
    const double t0 = traj.samples.front().t;
    const double t1 = traj.samples.back().t;
    if (window <= 0.0) window = default_burst_window(traj.params);
    if (!(window < t1 - t0))
        throw std::invalid_argument("classify_bursts: window must be shorter than the trajectory");

    if (amp_threshold <= 0.0) {
        double lo = traj.samples.front().z1, hi = lo;
        for (const auto& s : traj.samples) {
            lo = std::min(lo, s.z1);
            hi = std::max(hi, s.z1);
        }
        amp_threshold = 0.10 * (hi - lo);
    }

    BurstReport rep;
    rep.window = window;
    rep.amp_threshold = amp_threshold;

    const std::size_t n_win =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((t1 - t0) / window - 1e-12)));
    auto window_of = [&](double t) {
        auto w = static_cast<std::size_t>((t - t0) / window);
        return std::min(w, n_win - 1);
    };

    // peak-to-peak amplitude per window
    std::vector<double> wlo(n_win, 0.0), whi(n_win, 0.0);
    std::vector<bool> seen(n_win, false);
    for (const auto& s : traj.samples) {
        const std::size_t w = window_of(s.t);
        if (!seen[w]) {
            wlo[w] = whi[w] = s.z1;
            seen[w] = true;
        } else {
            wlo[w] = std::min(wlo[w], s.z1);
            whi[w] = std::max(whi[w], s.z1);
        }
    }
    std::vector<BurstPhase> phase(n_win);
    for (std::size_t w = 0; w < n_win; ++w)
        phase[w] = (seen[w] && whi[w] - wlo[w] > amp_threshold) ? BurstPhase::spiking
                                                                : BurstPhase::quiescent;

    // merge adjacent same-phase windows into episodes (they tile [t0, t1])
    std::vector<std::size_t> episode_of(n_win);
    for (std::size_t w = 0; w < n_win;) {
        std::size_t e = w;
        while (e + 1 < n_win && phase[e + 1] == phase[w]) ++e;
        BurstEpisode ep;
        ep.t_start = t0 + double(w) * window;
        ep.t_end = (e + 1 == n_win) ? t1 : t0 + double(e + 1) * window;
        ep.phase = phase[w];
        for (std::size_t j = w; j <= e; ++j) episode_of[j] = rep.episodes.size();
        rep.episodes.push_back(ep);
        w = e + 1;
    }

    // episode statistics
    std::vector<double> sum(rep.episodes.size(), 0.0);
    std::vector<std::size_t> cnt(rep.episodes.size(), 0);
    for (const auto& s : traj.samples) {
        const std::size_t e = episode_of[window_of(s.t)];
        sum[e] += s.z1;
        ++cnt[e];
    }
    for (std::size_t e = 0; e < rep.episodes.size(); ++e)
        rep.episodes[e].center = cnt[e] ? sum[e] / double(cnt[e]) : 0.0;
    for (const auto& s : traj.samples) {
        auto& ep = rep.episodes[episode_of[window_of(s.t)]];
        ep.peak = std::max(ep.peak, std::abs(s.z1 - ep.center));
    }

    rep.transition_count = static_cast<int>(rep.episodes.size()) - 1;
    return rep;
}

// Map each sample to the (cos(omega t), z1) plane for overlay against the
// critical manifold.
inline std::vector<std::pair<double, double>> transformed_portrait(const Trajectory& traj) {
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) out.emplace_back(s.d, s.z1);
    return out;
}

// Maximum componentwise deviation between the nonautonomous right-hand side
// and its slow-variable autonomized form over random (t, z1, z2).  The two
// coefficient routes are coded independently, so this is a mutual oracle.
// flip_branch deliberately breaks the sine-branch sign; used to confirm the
// check actually bites.
inline double rhs_equivalence_check(const BeamFoundationParams& p, int n_samples,
                                    std::uint64_t seed = 0x5eedf01dULL,
                                    bool flip_branch = false) {
    p.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi / p.omega);
    std::uniform_real_distribution<double> uz(-2.0, 2.0);

    double worst = 0.0;
    for (int n = 0; n < n_samples; ++n) {
        const double t = ut(rng);
        const double z1 = uz(rng), z2 = uz(rng);

        State2 dy_time;
        beam_rhs(t, {z1, z2}, dy_time, p);

        const double wt = p.omega * t;
        int s = std::sin(wt) >= 0.0 ? +1 : -1;
        if (flip_branch) s = -s;
        const auto c = coeffs_slow({std::cos(wt), s}, p);
        const double dz2 = restoring_force(z1, c, p.gamma) - p.xi * z2;

        worst = std::max(worst, std::abs(dz2 - dy_time[1]));  // first component is identical
    }
    return worst;
}

}  // namespace foldwave
