#pragma once

// Run configuration: a flat key = value text file with --key value command
// line overrides.  Keys mirror the model and solver field names.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "foldwave/continuation.hpp"
#include "foldwave/integrate.hpp"
#include "foldwave/model.hpp"

namespace foldwave {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    BeamFoundationParams params;  // defaults: the bursting reference case

    // simulation
    double t_start = 0.0;
    double t_end = 2000.0;
    double z1_0 = 0.0, z2_0 = 0.0;
    Tolerances tol;
    double max_dt = 0.0;     // 0: uncapped
    double init_dt = 5e-3;   // first trial step
    double sample_dt = 0.1;  // trajectory output stride
    double window = 0.0;     // burst window; 0: scale-aware default
    double amp_threshold = 0.0;

    // manifold
    int d_points = 2001;
    double z_min = -3.0, z_max = 3.0;

    // continuation / scans
    ContinuationSettings cont;
    std::string free1 = "d";
    std::string free2 = "kappa";
    double p1_min = -1.0, p1_max = 1.0;
    double p2_min = 0.2, p2_max = 3.0;
    int scan_n1 = 500, scan_n2 = 500;
    double d_fixed = 1.0;      // slow value when d is not an active parameter
    std::string bt_mode = "freed";

    // surrogate mode (built-in constant-coefficient test family)
    bool surrogate = false;
    double surrogate_J = -3.0;
    double surrogate_F = 0.0;
    double surrogate_G = 0.0;
    double surrogate_gamma = 4.0;
    double surrogate_Fd = 0.0;

    // galerkin
    int gl_nodes = 64;

    std::string out_dir = "out";

    void validate() const {
        params.validate();
        if (!(t_end > t_start)) throw config_error("t_end must exceed t_start");
        if (!(tol.abs > 0.0 && tol.rel > 0.0)) throw config_error("tolerances must be positive");
        if (!(sample_dt > 0.0)) throw config_error("sample_dt must be positive");
        if (d_points < 2) throw config_error("d_points must be at least 2");
        if (!(z_max > z_min)) throw config_error("z range is degenerate");
        if (scan_n1 < 2 || scan_n2 < 2) throw config_error("scan grid too small");
        if (!(p1_max > p1_min) || !(p2_max > p2_min)) throw config_error("scan range degenerate");
        if (!param_from_string(free1) || !param_from_string(free2))
            throw config_error("unknown free parameter id: " + free1 + " / " + free2);
        if (bt_mode != "fixed" && bt_mode != "freed")
            throw config_error("bt_mode must be 'fixed' or 'freed'");
        if (gl_nodes < 8) throw config_error("gl_nodes must be >= 8");
        try {
            cont.validate();
        } catch (const std::exception& e) {
            throw config_error(e.what());
        }
    }

    void set(const std::string& key, const std::string& value) {
        auto num = [&]() -> double {
            try {
                std::size_t pos = 0;
                const double v = std::stod(value, &pos);
                if (pos != value.size()) throw std::invalid_argument(value);
                return v;
            } catch (const std::exception&) {
                throw config_error("bad numeric value for " + key + ": '" + value + "'");
            }
        };
        auto integer = [&]() { return static_cast<int>(num()); };

        if (key == "xi") params.xi = num();
        else if (key == "sigma") params.sigma = num();
        else if (key == "gamma") params.gamma = num();
        else if (key == "kappa") params.kappa = num();
        else if (key == "h0") params.h0 = num();
        else if (key == "omega") params.omega = num();
        else if (key == "kappa_exclusion") params.kappa_exclusion = num();
        else if (key == "t_start") t_start = num();
        else if (key == "t_end") t_end = num();
        else if (key == "z1_0") z1_0 = num();
        else if (key == "z2_0") z2_0 = num();
        else if (key == "abs_tol") tol.abs = num();
        else if (key == "rel_tol") tol.rel = num();
        else if (key == "max_dt") max_dt = num();
        else if (key == "init_dt") init_dt = num();
        else if (key == "sample_dt") sample_dt = num();
        else if (key == "window") window = num();
        else if (key == "amp_threshold") amp_threshold = num();
        else if (key == "d_points") d_points = integer();
        else if (key == "z_min") z_min = num();
        else if (key == "z_max") z_max = num();
        else if (key == "step_init") cont.step_init = num();
        else if (key == "step_min") cont.step_min = num();
        else if (key == "step_max") cont.step_max = num();
        else if (key == "newton_tol") cont.newton_tol = num();
        else if (key == "newton_max_iter") cont.newton_max_iter = integer();
        else if (key == "max_points") cont.max_points = integer();
        else if (key == "grow") cont.grow = num();
        else if (key == "shrink") cont.shrink = num();
        else if (key == "free1") free1 = value;
        else if (key == "free2") free2 = value;
        else if (key == "p1_min") p1_min = num();
        else if (key == "p1_max") p1_max = num();
        else if (key == "p2_min") p2_min = num();
        else if (key == "p2_max") p2_max = num();
        else if (key == "scan_n1") scan_n1 = integer();
        else if (key == "scan_n2") scan_n2 = integer();
        else if (key == "d_fixed") d_fixed = num();
        else if (key == "bt_mode") bt_mode = value;
        else if (key == "surrogate") surrogate = num() != 0.0;
        else if (key == "surrogate_J") surrogate_J = num();
        else if (key == "surrogate_F") surrogate_F = num();
        else if (key == "surrogate_G") surrogate_G = num();
        else if (key == "surrogate_gamma") surrogate_gamma = num();
        else if (key == "surrogate_Fd") surrogate_Fd = num();
        else if (key == "gl_nodes") gl_nodes = integer();
        else if (key == "out_dir") out_dir = value;
        else throw config_error("unknown configuration key: " + key);
    }

    // key = value lines; '#' starts a comment; blank lines ignored
    void load_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config file " + path.string());
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw config_error(path.string() + ":" + std::to_string(lineno) +
                                       ": expected key = value");
                continue;
            }
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }

    // environment override of the output directory
    void apply_env() {
        if (const char* dir = std::getenv("FOLDWAVE_OUT"); dir && *dir) out_dir = dir;
    }
};

}  // namespace foldwave
