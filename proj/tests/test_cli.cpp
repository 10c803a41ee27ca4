// Drives the built phasedir binary through std::system.

#include "phasedir/csv.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

const fs::path kWork = fs::temp_directory_path() / "phasedir_test_cli";

int run_cli(const std::string& args, const std::string& stdout_file = "stdout.txt") {
    fs::create_directories(kWork);
    const std::string cmd = std::string("\"") + PHASEDIR_CLI + "\" " + args + " > \"" + (kWork / stdout_file).string() +
                            "\" 2> \"" + (kWork / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string out_dir(const std::string& name) { return "--out-dir \"" + (kWork / name).string() + "\""; }

std::string config(const std::string& name) { return std::string(PHASEDIR_SOURCE_DIR) + "/configs/" + name; }

}  // namespace

TEST_CASE("run writes trajectory and summary", "[cli]") {
    REQUIRE(run_cli("--preset fig1a --n-sites 20 --t-max 1 " + out_dir("run") + " run") == 0);
    const auto traj = lines(slurp(kWork / "run" / "fig1a_trajectory.csv"));
    const auto summary = lines(slurp(kWork / "run" / "fig1a_summary.csv"));
    REQUIRE(traj.size() == 1 + 11);  // stride 20 at dt 0.005 over t = 0..1
    CHECK(traj[0].starts_with("t,M,P_L,P_R,phi,rho_1,"));
    CHECK(traj[1].starts_with("0,10.5,0.5,0.5,-1,"));
    REQUIRE(summary.size() == 2);
    CHECK(summary[1].starts_with("1,"));
}

TEST_CASE("t_max = 0 gives the initial row only", "[cli]") {
    REQUIRE(run_cli("--preset fig1c --t-max 0 " + out_dir("zero") + " run") == 0);
    const auto traj = lines(slurp(kWork / "zero" / "fig1c_trajectory.csv"));
    REQUIRE(traj.size() == 2);
    CHECK(traj[1].starts_with("0,30.5,0.5,0.5,0,"));
}

TEST_CASE("runs are byte-for-byte reproducible", "[cli]") {
    const std::string args = "--config \"" + config("dephased_run.ini") + "\" --n-sites 16 --t-max 2 ";
    REQUIRE(run_cli(args + out_dir("repro1") + " run") == 0);
    REQUIRE(run_cli(args + out_dir("repro2") + " run") == 0);
    const std::string a = slurp(kWork / "repro1" / "dephased_trajectory.csv");
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(kWork / "repro2" / "dephased_trajectory.csv"));
    CHECK(a.find('\r') == std::string::npos);
}

TEST_CASE("custom profile config resolves relative paths", "[cli]") {
    REQUIRE(run_cli("--config \"" + config("custom_profile.ini") + "\" " + out_dir("custom") + " run") == 0);
    CHECK(fs::exists(kWork / "custom" / "trajectory.csv"));
}

TEST_CASE("sweep output is independent of --jobs", "[cli]") {
    const std::string args = "--config \"" + config("theta_sweep.ini") + "\" --n-sites 20 --t-max 2 ";
    REQUIRE(run_cli(args + "--jobs 1 " + out_dir("sweep1") + " sweep") == 0);
    REQUIRE(run_cli(args + "--jobs 3 " + out_dir("sweep3") + " sweep") == 0);
    const std::string serial = slurp(kWork / "sweep1" / "theta_sweep.csv");
    CHECK(serial == slurp(kWork / "sweep3" / "theta_sweep.csv"));
    const auto rows = lines(serial);
    REQUIRE(rows.size() == 20);
    CHECK(rows[0] == "theta,P_L,M,p_k_positive_limit,long_time_mean");

    REQUIRE(run_cli("--preset fig1a --n-sites 12 --t-max 1 " + out_dir("sweepv") +
                    " sweep --parameter gamma --values 0,0.2 --output g.csv") == 0);
    const auto g = lines(slurp(kWork / "sweepv" / "g.csv"));
    REQUIRE(g.size() == 3);
    CHECK(g[0].starts_with("gamma,"));
    CHECK(g[1].ends_with(",unbounded"));
}

TEST_CASE("analytic prints the closed-form report", "[cli]") {
    REQUIRE(run_cli("--preset fig1f analytic --mean-at 0,1e6", "analytic.txt") == 0);
    const std::string text = slurp(kWork / "analytic.txt");
    CHECK_THAT(text, ContainsSubstring("p_k_positive_limit,0.81830988618379"));
    CHECK_THAT(text, ContainsSubstring("long_time_mean,27.1666666666667"));
    CHECK_THAT(text, ContainsSubstring("M(0),30.5"));
    CHECK_THAT(text, ContainsSubstring("M(1000000),27.1666666666667"));

    REQUIRE(run_cli("--preset fig1c analytic", "flat.txt") == 0);
    const std::string flat = slurp(kWork / "flat.txt");
    CHECK_THAT(flat, ContainsSubstring("v_initial,0\n"));
    CHECK_THAT(flat, ContainsSubstring("phi0,0\n"));

    REQUIRE(run_cli("--preset fig1a --n-sites 7 analytic", "odd.txt") == 0);
    CHECK_THAT(slurp(kWork / "stderr.txt"), ContainsSubstring("warning"));
    const std::string odd = slurp(kWork / "odd.txt");
    CHECK_THAT(odd, !ContainsSubstring("p_k_positive_finite"));
    CHECK_THAT(odd, ContainsSubstring("mean_m0,3.5"));
}

TEST_CASE("couplings dumps one bond per line", "[cli]") {
    REQUIRE(run_cli("--n-sites 8 couplings --focusing", "bonds.txt") == 0);
    const auto bonds = lines(slurp(kWork / "bonds.txt"));
    REQUIRE(bonds.size() == 7);
    CHECK(bonds[1] == "1");
    CHECK(bonds[0] == bonds[6]);

    REQUIRE(run_cli("--preset fig1a --n-sites 4 couplings", "uniform.txt") == 0);
    CHECK(slurp(kWork / "uniform.txt") == "1\n1\n1\n");
}

TEST_CASE("config errors exit with status 2", "[cli]") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("bogus") == 2);
    CHECK(run_cli("--preset fig9 run") == 2);
    CHECK(run_cli("--config /nonexistent.ini run") == 2);
    CHECK(run_cli("--preset fig1a --coherence 0.9 run") == 2);
    CHECK(run_cli("--preset fig1a --dt 0.5 run") == 2);
    CHECK(run_cli("--preset fig1a --theta banana analytic") == 2);
    CHECK(run_cli("--preset fig1a sweep") == 2);
    CHECK(run_cli("--preset fig1a sweep --parameter gamma --values 0.1,-1") == 2);
    CHECK(run_cli("--n-sites 7 couplings --focusing") == 2);

    fs::create_directories(kWork);
    {
        std::ofstream bad(kWork / "bad.ini");
        bad << "[chain]\nn_sites = 10\n\nepsilon = oops\n";
    }
    CHECK(run_cli("--config \"" + (kWork / "bad.ini").string() + "\" run") == 2);
    CHECK_THAT(slurp(kWork / "stderr.txt"), ContainsSubstring("bad.ini:4"));

    CHECK(run_cli("--help") == 0);
}
