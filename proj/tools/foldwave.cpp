// foldwave — slow-fast analysis of a beam on a nonlinear elastic foundation
// under traveling-wave base excitation: time-domain bursting simulation,
// critical-manifold construction, fold-curve continuation with cusp and
// Bogdanov-Takens test functions, and a one-shot verification suite.
//
// usage: foldwave <simulate|manifold|fold-curve|cusp-scan|coeffs|verify>
//                 [--config <path>] [--key value ...]
//
// exit codes: 0 success, 1 verification failure, 2 invalid config,
//             3 numerical failure, 4 singular parameter, 5 empty result set

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "foldwave/bursts.hpp"
#include "foldwave/config.hpp"
#include "foldwave/continuation.hpp"
#include "foldwave/csv.hpp"
#include "foldwave/equilibria.hpp"
#include "foldwave/galerkin.hpp"
#include "foldwave/integrate.hpp"
#include "foldwave/verify.hpp"

namespace fs = std::filesystem;
using namespace foldwave;

namespace {

enum ExitCode {
    exit_ok = 0,
    exit_verify_failed = 1,
    exit_invalid_config = 2,
    exit_numerical = 3,
    exit_singular = 4,
    exit_empty = 5,
};

void usage() {
    std::cout <<
        "usage: foldwave <simulate|manifold|fold-curve|cusp-scan|coeffs|verify>\n"
        "                [--config <path>] [--key value ...]\n"
        "\n"
        "  simulate    integrate the oscillator; writes trajectory.csv, bursts.csv,\n"
        "              portrait.csv\n"
        "  manifold    sweep the critical manifold over d; writes manifold.csv,\n"
        "              potential.csv\n"
        "  fold-curve  two-parameter fold continuation seeded from a grid scan;\n"
        "              writes foldcurve.csv with cusp/bt annotations\n"
        "  cusp-scan   fold-curve pipeline focused on cusp points; also writes\n"
        "              cusps.csv\n"
        "  coeffs      coefficient functions; writes coeffs_slow.csv, coeffs_time.csv\n"
        "  verify      run the full property suite; writes compat_report.txt,\n"
        "              galerkin_compat.csv\n"
        "\n"
        "  keys mirror the model/solver field names (xi, sigma, gamma, kappa, h0,\n"
        "  omega, t_end, abs_tol, rel_tol, d_points, free1, free2, p1_min, ...).\n"
        "  The FOLDWAVE_OUT environment variable overrides out_dir.\n";
}

void write_meta(const RunConfig& cfg, const std::string& cmd,
                const std::vector<std::string>& lines) {
    std::string meta;
    meta += "command: " + cmd + "\n";
    meta += "xi = " + fmt(cfg.params.xi) + "\n";
    meta += "sigma = " + fmt(cfg.params.sigma) + "\n";
    meta += "gamma = " + fmt(cfg.params.gamma) + "\n";
    meta += "kappa = " + fmt(cfg.params.kappa) + "\n";
    meta += "h0 = " + fmt(cfg.params.h0) + "\n";
    meta += "omega = " + fmt(cfg.params.omega) + "\n";
    meta += "abs_tol = " + fmt(cfg.tol.abs) + ", rel_tol = " + fmt(cfg.tol.rel) + "\n";
    for (const auto& l : lines) meta += l + "\n";
    CsvWriter::atomic_write(fs::path(cfg.out_dir) / "run_meta.txt", meta);
}

std::unique_ptr<CoeffFamily> make_family(const RunConfig& cfg, std::vector<ParamId> actives) {
    if (cfg.surrogate) {
        SurrogateCoeffs sc;
        sc.J0 = cfg.surrogate_J;
        sc.F0 = cfg.surrogate_F;
        sc.G0 = cfg.surrogate_G;
        sc.gamma = cfg.surrogate_gamma;
        sc.F_slope = cfg.surrogate_Fd;
        return std::make_unique<SurrogateFamily>(sc, cfg.params.xi, std::move(actives));
    }
    return std::make_unique<BeamFamily>(cfg.params, std::move(actives), cfg.d_fixed);
}

int cmd_simulate(const RunConfig& cfg) {
    auto traj = integrate(cfg.params, {cfg.z1_0, cfg.z2_0}, cfg.t_start, cfg.t_end, cfg.tol,
                          cfg.max_dt, cfg.sample_dt, cfg.init_dt);

    CsvWriter tcsv("t,z1,z2,d");
    for (const auto& s : traj.samples) tcsv.row(s.t, s.z1, s.z2, s.d);
    tcsv.write(fs::path(cfg.out_dir) / "trajectory.csv");

    CsvWriter pcsv("d,z1");
    for (const auto& [d, z1] : transformed_portrait(traj)) pcsv.row(d, z1);
    pcsv.write(fs::path(cfg.out_dir) / "portrait.csv");

    BurstReport bursts;
    if (traj.status == IntegrationStatus::completed)
        bursts = classify_bursts(traj, cfg.window, cfg.amp_threshold);
    CsvWriter bcsv("t_start,t_end,phase,center,peak");
    for (const auto& ep : bursts.episodes)
        bcsv.row(ep.t_start, ep.t_end, to_string(ep.phase), ep.center, ep.peak);
    bcsv.write(fs::path(cfg.out_dir) / "bursts.csv");

    const std::string plot =
        "set datafile separator ','\n"
        "set key off\n"
        "set terminal pngcairo size 1200,500\n"
        "set output 'trajectory.png'\n"
        "plot 'trajectory.csv' using 1:2 with lines\n"
        "set output 'portrait.png'\n"
        "plot 'portrait.csv' using 1:2 with dots\n";
    CsvWriter::atomic_write(fs::path(cfg.out_dir) / "plot.gp", plot);

    write_meta(cfg, "simulate",
               {"status: " + std::string(to_string(traj.status)),
                "samples: " + std::to_string(traj.samples.size()),
                "accepted_steps: " + std::to_string(traj.stats.n_accepted),
                "rejected_steps: " + std::to_string(traj.stats.n_rejected),
                "episodes: " + std::to_string(bursts.episodes.size()),
                "transitions: " + std::to_string(bursts.transition_count)});

    if (traj.status != IntegrationStatus::completed) {
        std::cerr << "foldwave: integration " << to_string(traj.status) << " at t = "
                  << traj.t_reached << " (last good state kept in trajectory.csv)\n";
        return exit_numerical;
    }
    std::cout << "simulate: " << traj.samples.size() << " samples, "
              << bursts.episodes.size() << " episodes -> " << cfg.out_dir << "\n";
    return exit_ok;
}

int cmd_manifold(const RunConfig& cfg) {
    const auto grid = uniform_grid(-1.0, 1.0, cfg.d_points);

    std::unique_ptr<CoeffsOfD> model;
    if (cfg.surrogate) {
        auto sur = std::make_unique<SurrogateCoeffs>();
        sur->J0 = cfg.surrogate_J;
        sur->F0 = cfg.surrogate_F;
        sur->G0 = cfg.surrogate_G;
        sur->gamma = cfg.surrogate_gamma;
        sur->F_slope = cfg.surrogate_Fd;
        model = std::move(sur);
    } else {
        model = std::make_unique<BeamCoeffsOfD>(cfg.params);
    }
    const auto result = critical_manifold(*model, grid, cfg.params.xi);

    CsvWriter mcsv("d,z1,k_eff,re_l1,im_l1,re_l2,im_l2,stability,branch_id");
    for (const auto& br : result.branches)
        for (const auto& r : br.points)
            mcsv.row(r.d, r.z1_star, r.keff, r.lambda1.real(), r.lambda1.imag(),
                     r.lambda2.real(), r.lambda2.imag(), to_string(r.stability), br.id);
    mcsv.write(fs::path(cfg.out_dir) / "manifold.csv");

    CsvWriter wcsv("d,well_count");
    for (double d : grid) {
        const auto c = model->coeffs(d);
        wcsv.row(d, well_count(c, model->cubic_gamma(), cfg.z_min, cfg.z_max));
    }
    wcsv.write(fs::path(cfg.out_dir) / "potential.csv");

    std::vector<std::string> meta = {"branches: " + std::to_string(result.branches.size()),
                                     "fold_brackets: " + std::to_string(result.fold_brackets.size())};
    for (const auto& fb : result.fold_brackets)
        meta.push_back("fold_bracket: d in [" + fmt(fb.d_lo) + ", " + fmt(fb.d_hi) + "], count " +
                       std::to_string(fb.count_lo) + " -> " + std::to_string(fb.count_hi));
    write_meta(cfg, "manifold", meta);

    std::cout << "manifold: " << result.branches.size() << " branches, "
              << result.fold_brackets.size() << " fold brackets -> " << cfg.out_dir << "\n";
    return exit_ok;
}

// shared by fold-curve and cusp-scan
struct FoldCurveRun {
    std::vector<ContinuedCurve> curves;
    std::vector<BifurcationPoint> cusps;
    std::vector<BifurcationPoint> bts;
    std::string bt_diag;
    int n_brackets = 0;
};

FoldCurveRun run_fold_curves(const RunConfig& cfg, const CoeffFamily& fam) {
    FoldCurveRun run;
    auto scan = grid_scan_oracle(fam, cfg.p1_min, cfg.p1_max, cfg.scan_n1, cfg.p2_min, cfg.p2_max,
                                 cfg.scan_n2);
    const auto brackets = scan.bracket_cells();
    run.n_brackets = static_cast<int>(brackets.size());

    const double w1 = (cfg.p1_max - cfg.p1_min) / (cfg.scan_n1 - 1);
    const double w2 = (cfg.p2_max - cfg.p2_min) / (cfg.scan_n2 - 1);
    const double near_dist = 2.0 * std::hypot(w1, w2);
    std::vector<std::pair<double, double>> cloud;
    auto covered = [&](double x1, double x2) {
        for (const auto& c : cloud)
            if (std::hypot(c.first - x1, c.second - x2) <= near_dist) return true;
        return false;
    };

    for (const auto& cell : brackets) {
        if (run.curves.size() >= 8) break;
        const double cx1 = 0.5 * (scan.p1[static_cast<std::size_t>(cell.first)] +
                                  scan.p1[static_cast<std::size_t>(cell.first + 1)]);
        const double cx2 = 0.5 * (scan.p2[static_cast<std::size_t>(cell.second)] +
                                  scan.p2[static_cast<std::size_t>(cell.second + 1)]);
        if (covered(cx1, cx2)) continue;
        auto seed = seed_fold_in_cell(fam, scan, cell.first, cell.second, cfg.cont);
        if (!seed) continue;
        auto curve = continue_fold_curve(fam, (*seed)[0], (*seed)[1], (*seed)[2], cfg.cont);
        for (const auto& pt : curve.points) cloud.emplace_back(pt.p[0], pt.p[1]);
        auto cusps = detect_cusp(fam, curve, cfg.cont);
        run.cusps.insert(run.cusps.end(), cusps.begin(), cusps.end());
        auto bt = detect_bt(fam, curve, cfg.bt_mode == "fixed" ? BtMode::fixed : BtMode::freed,
                            cfg.cont);
        run.bts.insert(run.bts.end(), bt.points.begin(), bt.points.end());
        if (!bt.diagnostics.empty()) run.bt_diag = bt.diagnostics;
        run.curves.push_back(std::move(curve));
    }
    return run;
}

void write_fold_curve_csv(const RunConfig& cfg, const CoeffFamily& fam, const FoldCurveRun& run) {
    const std::string n1 = to_string(fam.active(0)), n2 = to_string(fam.active(1));
    CsvWriter csv("p1_name,p1,p2_name,p2,z1,test_cusp,test_bt,kind");
    for (const auto& curve : run.curves) {
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            const auto& pt = curve.points[i];
            csv.row(n1, pt.p[0], n2, pt.p[1], pt.z1, pt.test_cusp, pt.test_bt,
                    i == curve.seed_index ? "fold_seed" : "regular");
        }
    }
    for (const auto& cp : run.cusps)
        csv.row(n1, cp.params[0], n2, cp.params[1], cp.z1, cp.sigma_pp, cp.trace, "cusp");
    for (const auto& bp : run.bts) {
        // freed-xi BT points carry (p1, xi); p2 is frozen at the seed value
        const bool has_xi = bp.param_ids.size() == 2 && bp.param_ids[1] == ParamId::xi;
        csv.row(to_string(bp.param_ids[0]), bp.params[0],
                has_xi ? "xi" : n2.c_str(), bp.params[1], bp.z1, bp.sigma_pp, bp.trace, "bt");
    }
    csv.write(fs::path(cfg.out_dir) / "foldcurve.csv");
}

int cmd_fold_curve(const RunConfig& cfg, bool cusp_focus) {
    const auto id1 = param_from_string(cfg.free1);
    const auto id2 = param_from_string(cfg.free2);
    if (!id1 || !id2 || *id1 == *id2) {
        std::cerr << "foldwave: invalid free parameter pair '" << cfg.free1 << "', '" << cfg.free2
                  << "'\n";
        return exit_invalid_config;
    }
    auto fam = make_family(cfg, {*id1, *id2});
    auto run = run_fold_curves(cfg, *fam);

    write_fold_curve_csv(cfg, *fam, run);
    if (cusp_focus) {
        CsvWriter ccsv("p1_name,p1,p2_name,p2,z1,sigma_pp,keff,normal_form_residual");
        for (const auto& cp : run.cusps) {
            // normal-form residual at the refined cusp (zero in exact arithmetic)
            CurvePoint pt;
            pt.u = {cp.z1, fam->internal(0, cp.params[0]), fam->internal(1, cp.params[1])};
            const auto nf = cusp_normal_form(*fam, pt);
            ccsv.row(to_string(*id1), cp.params[0], to_string(*id2), cp.params[1], cp.z1,
                     cp.sigma_pp, cp.keff, nf.residual);
        }
        ccsv.write(fs::path(cfg.out_dir) / "cusps.csv");
    }

    std::size_t n_points = 0;
    for (const auto& c : run.curves) n_points += c.points.size();
    std::vector<std::string> meta = {
        "free pair: (" + cfg.free1 + ", " + cfg.free2 + ")",
        "scan brackets: " + std::to_string(run.n_brackets),
        "curves: " + std::to_string(run.curves.size()),
        "curve points: " + std::to_string(n_points),
        "cusps: " + std::to_string(run.cusps.size()),
        "bt points: " + std::to_string(run.bts.size()) + " (mode " + cfg.bt_mode + ")"};
    if (!run.bt_diag.empty()) meta.push_back("bt note: " + run.bt_diag);
    write_meta(cfg, cusp_focus ? "cusp-scan" : "fold-curve", meta);

    std::cout << (cusp_focus ? "cusp-scan" : "fold-curve") << ": " << run.curves.size()
              << " curves (" << n_points << " points), " << run.cusps.size() << " cusps, "
              << run.bts.size() << " bt -> " << cfg.out_dir << "\n";
    if (!run.bt_diag.empty()) std::cout << "note: " << run.bt_diag << "\n";

    if (run.curves.empty()) {
        std::cerr << "foldwave: no fold found in the scanned range (" << run.n_brackets
                  << " bracket cells)\n";
        return exit_empty;
    }
    if (cusp_focus && run.cusps.empty()) {
        std::cerr << "foldwave: fold curves exist but carry no cusp in the scanned range\n";
        return exit_empty;
    }
    return exit_ok;
}

int cmd_coeffs(const RunConfig& cfg) {
    CsvWriter scsv("d,F,J,G");
    for (double d : uniform_grid(-1.0, 1.0, cfg.d_points)) {
        const auto c = coeffs_slow({d, +1}, cfg.params);
        scsv.row(d, c.F, c.J, c.G);
    }
    scsv.write(fs::path(cfg.out_dir) / "coeffs_slow.csv");

    CsvWriter tcsv("t,F,J,G");
    const double period = 2.0 * kPi / cfg.params.omega;
    for (int i = 0; i <= 720; ++i) {
        const double t = period * i / 720.0;
        const auto c = coeffs_time(t, cfg.params);
        tcsv.row(t, c.F, c.J, c.G);
    }
    tcsv.write(fs::path(cfg.out_dir) / "coeffs_time.csv");

    write_meta(cfg, "coeffs", {});
    std::cout << "coeffs -> " << cfg.out_dir << "\n";
    return exit_ok;
}

int cmd_verify(const RunConfig& cfg) {
    auto run = run_verification(cfg);
    for (const auto& r : run.results) {
        std::cout << "[" << to_string(r.status) << "] " << r.name;
        if (r.criterion > 0) std::cout << " (criterion " << r.criterion << ")";
        std::cout << "\n    " << r.detail << "\n";
    }
    std::cout << "total: " << run.total_seconds << " s, overall "
              << (run.all_ok ? "OK" : "FAILED") << "\n";

    CsvWriter::atomic_write(fs::path(cfg.out_dir) / "compat_report.txt", render_report(run));
    CsvWriter::atomic_write(fs::path(cfg.out_dir) / "galerkin_compat.csv",
                            galerkin_compat_csv(run.artifacts.galerkin));
    return run.all_ok ? exit_ok : exit_verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage();
        return exit_invalid_config;
    }
    const std::string cmd = argv[1];
    if (cmd == "-h" || cmd == "--help" || cmd == "help") {
        usage();
        return exit_ok;
    }

    RunConfig cfg;
    try {
        // --config first, then key overrides in order
        for (int i = 2; i + 1 < argc; i += 2) {
            if (std::strcmp(argv[i], "--config") == 0) cfg.load_file(argv[i + 1]);
        }
        for (int i = 2; i < argc; i += 2) {
            if (std::strncmp(argv[i], "--", 2) != 0 || i + 1 >= argc)
                throw config_error(std::string("expected --key value, got '") + argv[i] + "'");
            if (std::strcmp(argv[i], "--config") == 0) continue;
            cfg.set(argv[i] + 2, argv[i + 1]);
        }
        cfg.apply_env();
        cfg.validate();
        fs::create_directories(cfg.out_dir);
    } catch (const singular_parameter_error& e) {
        std::cerr << "foldwave: " << e.what() << "\n";
        return exit_singular;
    } catch (const std::exception& e) {
        std::cerr << "foldwave: " << e.what() << "\n";
        return exit_invalid_config;
    }

    try {
        if (cmd == "simulate") return cmd_simulate(cfg);
        if (cmd == "manifold") return cmd_manifold(cfg);
        if (cmd == "fold-curve") return cmd_fold_curve(cfg, false);
        if (cmd == "cusp-scan") return cmd_fold_curve(cfg, true);
        if (cmd == "coeffs") return cmd_coeffs(cfg);
        if (cmd == "verify") return cmd_verify(cfg);
        std::cerr << "foldwave: unknown subcommand '" << cmd << "'\n";
        usage();
        return exit_invalid_config;
    } catch (const singular_parameter_error& e) {
        std::cerr << "foldwave: " << e.what() << "\n";
        return exit_singular;
    } catch (const config_error& e) {
        std::cerr << "foldwave: " << e.what() << "\n";
        return exit_invalid_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "foldwave: " << e.what() << "\n";
        return exit_invalid_config;
    } catch (const std::exception& e) {
        std::cerr << "foldwave: " << e.what() << "\n";
        return exit_numerical;
    }
}
