#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ratfe/errors.hpp"
#include "ratfe/experiments.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ratfe;
namespace fs = std::filesystem;

namespace {

struct Run {
    int rc;
    std::string out;
};

// Runs the CLI with stderr discarded and returns exit status and stdout.
Run cli(const std::string& args) {
    const std::string cmd = std::string(RATFE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    const fs::path d = fs::temp_directory_path() / ("ratfe_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("config validation") {
    ExperimentConfig ok;
    CHECK_NOTHROW(ok.validate());
    auto bad = [](auto mutate) {
        ExperimentConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), ConfigError);
    };
    bad([](ExperimentConfig& c) { c.domain = "circle"; });
    bad([](ExperimentConfig& c) { c.levels = 0; });
    bad([](ExperimentConfig& c) { c.theta = 0.0; });
    bad([](ExperimentConfig& c) { c.theta = 1.5; });
    bad([](ExperimentConfig& c) { c.n_min = 5, c.n_max = 4; });
    bad([](ExperimentConfig& c) { c.n_min = 0; });
    bad([](ExperimentConfig& c) { c.elements = 100; });
    bad([](ExperimentConfig& c) { c.ndof_budget = 1; });
    bad([](ExperimentConfig& c) { c.eig_tol = 0.0; });

    const auto lines = ok.describe();
    bool theta = false;
    for (const auto& l : lines) theta |= l.rfind("theta=", 0) == 0;
    CHECK(theta);
}

TEST_CASE("format and slope helpers") {
    CHECK(format_double(0.5) == "5.0000000000000000e-01");
    CHECK(loglog_slope({1, 10, 100}, {1, 1e-2, 1e-4}) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(loglog_slope({2, 4, 8, 16}, {3, 3, 3, 3}) == doctest::Approx(0.0));
}

TEST_CASE("eigen study rows") {
    ExperimentConfig cfg;
    cfg.levels = 2;
    cfg.n_min = 2;
    cfg.n_max = 4;
    const auto rows = run_exp1_square(cfg);
    REQUIRE(rows.size() == 2 * 4);
    for (const auto& r : rows) {
        if (r.n == "exact") {
            CHECK(r.rel_gap == 0.0);
            CHECK(r.lambda == r.lambda_bar);
        } else {
            CHECK(r.rel_gap == doctest::Approx(std::abs(r.lambda - r.lambda_bar) / r.lambda));
        }
    }
    std::ostringstream a, b;
    write_eig_csv(a, rows);
    write_eig_csv(b, run_exp1_square(cfg));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("n,level,ndof,lambda,lambda_bar,rel_gap\n", 0) == 0);

    std::ostringstream h;
    write_csv_header(h, "exp1", cfg.describe());
    CHECK(h.str().rfind(std::string("# ratfe exp1 version=") + kVersion + "\n", 0) == 0);
}

TEST_CASE("stokes rows") {
    const Triangulation t = square_with_elements(32);
    CHECK(t.num_elements() == 32);
    const StokesRow ex = run_stokes_case(t, Variant::Full, {});
    CHECK(ex.n == "exact");
    CHECK(ex.grad_err <= 1e-10);
    std::ostringstream os;
    write_stokes_csv(os, {ex});
    CHECK(os.str().rfind("n,grad_err,div_err,pressure_err\n", 0) == 0);
    CHECK_THROWS_AS(square_with_elements(48), ConfigError);
}

TEST_CASE("svg output") {
    const std::string one = emit_svg({{"only", {1.0}, {2.0}, false}}, {true, true, "x", "y", "single"});
    CHECK(one.rfind("<svg", 0) == 0);
    CHECK(one.find("</svg>") != std::string::npos);

    const std::string two =
        emit_svg({{"n=2", {10, 100}, {1e-2, 1e-3}, false}, {"guide", {10, 100}, {1, 0.1}, true}}, {true, true, "ndof", "gap", ""});
    CHECK(two.find("class=\"legend\"") != std::string::npos);
    CHECK(two.find("n=2") != std::string::npos);
    CHECK(two.find("stroke-dasharray") != std::string::npos);

    CHECK_THROWS_AS(emit_svg({{"bad", {1, 2}, {0.0, 1.0}, false}}, {true, true, "", "", ""}), ConfigError);
    CHECK_THROWS_AS(emit_svg({}, {false, false, "", "", ""}), EmptySeries);
    CHECK_THROWS_AS(emit_svg({{"empty", {}, {}, false}}, {false, false, "", "", ""}), EmptySeries);
    CHECK_NOTHROW(emit_svg({{"lin", {0, 1}, {-1, 1}, false}}, {false, false, "", "", ""}));
}

TEST_CASE("command line: quad") {
    const Run r = cli("quad --alpha 1,0,0 --beta 0,0,0");
    CHECK(r.rc == 0);
    CHECK(r.out.find("1/3") != std::string::npos);
    CHECK(r.out.find("3.3333333333333331e-01") != std::string::npos);
    CHECK(cli("quad --alpha 0,0,0 --beta 0,0,2").out.find("inf") != std::string::npos);

    const fs::path dir = scratch_dir();
    const fs::path table = dir / "q.csv";
    CHECK(cli("quad --table --amax 1 --bmax 1 --out " + table.string()).rc == 0);
    const std::string csv = slurp(table);
    CHECK(csv.rfind("a0,a1,a2,b0,b1,b2,q0_num,q0_den,q1_num,q1_den\n", 0) == 0);
    // (0,0,0),(1,1,1) is finite and carries a pi^2 part.
    CHECK(csv.find("\n0,0,0,1,1,1,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("command line: outputs are byte-identical across runs") {
    const fs::path dir = scratch_dir();
    const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
    const std::string args = "exp1 --levels 2 --n-min 2 --n-max 3 --svg " + (dir / "a.svg").string() + " --out ";
    REQUIRE(cli(args + a).rc == 0);
    REQUIRE(cli("exp1 --levels 2 --n-min 2 --n-max 3 --svg " + (dir / "b.svg").string() + " --out " + b).rc == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(dir / "a.svg") == slurp(dir / "b.svg"));
    CHECK(slurp(a).find("# theta=") != std::string::npos);

    const Run s1 = cli("stokes --elements 32 --taylor-hood-ref 4.410009e-05");
    const Run s2 = cli("stokes --elements 32 --taylor-hood-ref 4.410009e-05");
    CHECK(s1.rc == 0);
    CHECK(s1.out == s2.out);
    CHECK(s1.out.find("taylor") != std::string::npos);

    CHECK(cli("dump-tables " + (dir / "tables").string()).rc == 0);
    CHECK(fs::exists(dir / "tables" / "zienkiewicz_A.csv"));
    CHECK(fs::exists(dir / "tables" / "guzman_neilan_R.csv"));

    const std::string mesh = (dir / "l.mesh").string();
    CHECK(cli("mesh dump --domain lshape --level 1 --out " + mesh).rc == 0);
    const Run load = cli("mesh load " + mesh);
    CHECK(load.rc == 0);
    CHECK(load.out.find("24") != std::string::npos);  // 6 * 4 elements
    fs::remove_all(dir);
}

TEST_CASE("command line: exit codes") {
    CHECK(cli("").rc == 2);
    CHECK(cli("no-such-command").rc == 2);
    CHECK(cli("stokes --elements 33").rc == 2);
    CHECK(cli("stokes --domain lshape").rc == 2);
    CHECK(cli("biharmonic-eig --quadrature simpson").rc == 2);
    CHECK(cli("exp2 --theta 0").rc == 2);
    CHECK(cli("quad --alpha 1,x,0").rc == 2);
    // One Gauss point per axis cannot see the bubbles: singular stiffness.
    CHECK(cli("biharmonic-eig --levels 2 --quadrature gauss:1").rc == 3);
    const fs::path dir = scratch_dir();
    std::ofstream(dir / "bad.mesh") << "nodes 3 elements 1 edges 0\n0 0 1\n";
    CHECK(cli("mesh load " + (dir / "bad.mesh").string()).rc == 1);
    fs::remove_all(dir);
}
