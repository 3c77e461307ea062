// End-to-end checks of the command-line surface: exit codes, file schemas,
// determinism of emitted data.  Drives the real binary via std::system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(FOLDWAVE_BIN) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("foldwave_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("reference simulation produces a dense trajectory table") {
    TempDir dir("simref");
    CHECK(run("simulate --out_dir " + dir.str()) == 0);
    CHECK(lines_of(dir.path / "trajectory.csv").size() > 10000);
}

TEST_CASE("simulate emits the documented files") {
    TempDir dir("sim");
    const int rc = run("simulate --t_end 50 --out_dir " + dir.str());
    CHECK(rc == 0);

    const auto traj = lines_of(dir.path / "trajectory.csv");
    REQUIRE(traj.size() > 100);
    CHECK(traj[0] == "t,z1,z2,d");

    const auto bursts = lines_of(dir.path / "bursts.csv");
    REQUIRE(!bursts.empty());
    CHECK(bursts[0] == "t_start,t_end,phase,center,peak");

    const auto portrait = lines_of(dir.path / "portrait.csv");
    CHECK(portrait[0] == "d,z1");
    // d stays in [-1, 1]
    for (std::size_t i = 1; i < portrait.size(); ++i) {
        const double d = std::stod(portrait[i]);
        CHECK(d >= -1.0);
        CHECK(d <= 1.0);
    }
    CHECK(fs::exists(dir.path / "run_meta.txt"));
    CHECK(fs::exists(dir.path / "plot.gp"));
}

TEST_CASE("simulate: zero-measure span is an invalid config") {
    TempDir dir("sim2");
    CHECK(run("simulate --t_end 0 --t_start 0 --out_dir " + dir.str()) == 2);
}

TEST_CASE("simulate: unforced system from rest stays at zero") {
    TempDir dir("sim3");
    CHECK(run("simulate --h0 0 --t_end 20 --out_dir " + dir.str()) == 0);
    for (std::size_t i = 1; i < lines_of(dir.path / "trajectory.csv").size(); ++i) {
        const auto row = lines_of(dir.path / "trajectory.csv")[i];
        const auto c1 = row.find(','), c2 = row.find(',', c1 + 1);
        CHECK(std::stod(row.substr(c1 + 1, c2 - c1 - 1)) == 0.0);
    }
}

TEST_CASE("identical configurations give byte-identical data files") {
    TempDir a("det_a"), b("det_b");
    CHECK(run("simulate --t_end 30 --out_dir " + a.str()) == 0);
    CHECK(run("simulate --t_end 30 --out_dir " + b.str()) == 0);
    CHECK(slurp(a.path / "trajectory.csv") == slurp(b.path / "trajectory.csv"));
    CHECK(slurp(a.path / "bursts.csv") == slurp(b.path / "bursts.csv"));
}

TEST_CASE("manifold schema and exit codes") {
    TempDir dir("man");
    CHECK(run("manifold --d_points 201 --out_dir " + dir.str()) == 0);
    const auto rows = lines_of(dir.path / "manifold.csv");
    REQUIRE(rows.size() == 202);  // single branch over the grid
    CHECK(rows[0] == "d,z1,k_eff,re_l1,im_l1,re_l2,im_l2,stability,branch_id");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        bool known = false;
        for (const char* s : {"stable-focus", "stable-node", "saddle", "center", "degenerate"})
            if (rows[i].find(s) != std::string::npos) known = true;
        CHECK(known);
    }
    const auto wells = lines_of(dir.path / "potential.csv");
    CHECK(wells[0] == "d,well_count");
    REQUIRE(wells.size() == 202);

    // singular wave number
    CHECK(run("manifold --kappa 3.14159265 --out_dir " + dir.str()) == 4);
}

TEST_CASE("fold-curve: no folds without forcing") {
    TempDir dir("fc0");
    CHECK(run("fold-curve --h0 0 --free1 d --free2 sigma --p1_min -1 --p1_max 1 --p2_min 10 "
              "--p2_max 200 --scan_n1 80 --scan_n2 80 --out_dir " +
              dir.str()) == 5);
}

TEST_CASE("fold-curve: the published low-stiffness family has no folds in (d,kappa)") {
    // the printed coefficients admit no folds at sigma=12, gamma=1.5, h0=0.1;
    // the empty result is reported, not silent (see the compatibility report)
    TempDir dir("fclow");
    CHECK(run("fold-curve --sigma 12 --gamma 1.5 --free1 d --free2 kappa --p1_min -1 --p1_max 1 "
              "--p2_min 0.2 --p2_max 3 --scan_n1 100 --scan_n2 100 --out_dir " +
              dir.str()) == 5);
}

TEST_CASE("fold-curve on the softened beam family") {
    TempDir dir("fcsoft");
    const int rc = run(
        "fold-curve --sigma -150 --free1 d --free2 sigma --p1_min -1 --p1_max 1 "
        "--p2_min -200 --p2_max -50 --scan_n1 150 --scan_n2 150 --out_dir " +
        dir.str());
    CHECK(rc == 0);
    const auto rows = lines_of(dir.path / "foldcurve.csv");
    REQUIRE(rows.size() > 100);
    bool has_cusp = false;
    for (const auto& r : rows)
        if (r.find(",cusp") != std::string::npos) has_cusp = true;
    CHECK(has_cusp);
}

TEST_CASE("simulate: runaway system exits with the numerical-failure code") {
    // gamma = 0 removes the confining cubic; negative total stiffness then
    // grows the state past overflow
    TempDir dir("blowup");
    CHECK(run("simulate --gamma 0 --sigma -150 --z1_0 0.1 --t_end 300 --out_dir " + dir.str()) ==
          3);
    // the last good state is still written
    CHECK(lines_of(dir.path / "trajectory.csv").size() > 2);
}

TEST_CASE("fold-curve on the surrogate family") {
    TempDir dir("fc1");
    const int rc = run(
        "fold-curve --surrogate 1 --surrogate_gamma 4 --free1 J --free2 F "
        "--p1_min -5 --p1_max 0.5 --p2_min -3 --p2_max 3 --scan_n1 120 --scan_n2 120 "
        "--max_points 600 --out_dir " +
        dir.str());
    CHECK(rc == 0);
    const auto rows = lines_of(dir.path / "foldcurve.csv");
    REQUIRE(rows.size() > 50);
    CHECK(rows[0] == "p1_name,p1,p2_name,p2,z1,test_cusp,test_bt,kind");
    bool has_seed = false, has_cusp = false, has_bt = false;
    for (const auto& r : rows) {
        if (r.find(",fold_seed") != std::string::npos) has_seed = true;
        if (r.find(",cusp") != std::string::npos) has_cusp = true;
        if (r.find(",bt") != std::string::npos) has_bt = true;
    }
    CHECK(has_seed);
    CHECK(has_cusp);
    CHECK(has_bt);  // freed-xi mode is the default
}

TEST_CASE("cusp-scan emits refined cusps") {
    TempDir dir("cs");
    const int rc = run(
        "cusp-scan --surrogate 1 --surrogate_gamma 4 --free1 J --free2 F "
        "--p1_min -5 --p1_max 0.5 --p2_min -3 --p2_max 3 --scan_n1 120 --scan_n2 120 "
        "--max_points 600 --out_dir " +
        dir.str());
    CHECK(rc == 0);
    const auto rows = lines_of(dir.path / "cusps.csv");
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0] == "p1_name,p1,p2_name,p2,z1,sigma_pp,keff,normal_form_residual");
    // the symmetric surrogate cusp sits at the origin of (J, F)
    std::stringstream ss(rows[1]);
    std::string tok;
    std::getline(ss, tok, ',');  // p1_name
    std::getline(ss, tok, ',');
    CHECK(std::abs(std::stod(tok)) <= 1e-6);
    std::getline(ss, tok, ',');  // p2_name
    std::getline(ss, tok, ',');
    CHECK(std::abs(std::stod(tok)) <= 1e-6);
}

TEST_CASE("coeffs tables") {
    TempDir dir("cf");
    CHECK(run("coeffs --d_points 101 --out_dir " + dir.str()) == 0);
    const auto slow = lines_of(dir.path / "coeffs_slow.csv");
    CHECK(slow[0] == "d,F,J,G");
    CHECK(slow.size() == 102);
    const auto time = lines_of(dir.path / "coeffs_time.csv");
    CHECK(time[0] == "t,F,J,G");
    CHECK(time.size() == 722);
}

TEST_CASE("config file, overrides, and environment") {
    TempDir dir("cfg");
    {
        std::ofstream cfg(dir.path / "run.cfg");
        cfg << "# comment\n"
            << "t_end = 25\n"
            << "sigma = 100\n";
    }
    const std::string out1 = (dir.path / "o1").string();
    CHECK(run("simulate --config " + (dir.path / "run.cfg").string() + " --out_dir " + out1) == 0);
    CHECK(fs::exists(fs::path(out1) / "trajectory.csv"));

    // override wins over the file
    const std::string out2 = (dir.path / "o2").string();
    CHECK(run("simulate --config " + (dir.path / "run.cfg").string() +
              " --t_end 10 --out_dir " + out2) == 0);
    const auto rows = lines_of(fs::path(out2) / "trajectory.csv");
    const auto& last = rows.back();
    CHECK(std::stod(last.substr(0, last.find(','))) == 10.0);

    // environment variable overrides out_dir
    const std::string out3 = (dir.path / "o3").string();
    const std::string cmd = std::string("FOLDWAVE_OUT=") + out3 + " " + FOLDWAVE_BIN +
                            " simulate --t_end 5 >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(fs::path(out3) / "trajectory.csv"));

    // unknown keys are invalid configs
    CHECK(run("simulate --no_such_key 1") == 2);
    CHECK(run("bogus-subcommand") == 2);
    CHECK(run("simulate --t_end") == 2);
}

TEST_CASE("verify runs clean on defaults") {
    TempDir dir("ver");
    CHECK(run("verify --out_dir " + dir.str()) == 0);
    CHECK(fs::exists(dir.path / "compat_report.txt"));
    const auto csv = lines_of(dir.path / "galerkin_compat.csv");
    CHECK(csv[0] == "t,coef,closed_form,quadrature,abs_diff,rel_diff");
}
