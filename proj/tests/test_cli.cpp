#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"
#include "fracwdw/errors.hpp"

using namespace fracwdw;
using namespace fracwdw::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("fracwdw_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

const char* kZeroCfg =
    "# zero data\n"
    "K = 3\n"
    "n_r = 9\n"
    "n_t = 4\n"
    "phi = catalog:zero\n"
    "f = catalog:zero\n";

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("config parsing and errors") {
        RunConfig c = parse_config("beta2 = 0.9  # comment\nK=5\nzeros = exact\nrule = published\nphi = catalog:zero\n");
        CHECK(c.problem.beta2 == 0.9);
        CHECK(c.problem.K == 5);
        CHECK(c.problem.zeros == ZeroMode::ExactRoot);
        CHECK(c.problem.rule == TransmissionRule::AsPublished);
        CHECK_THROWS_WITH_AS(parse_config("bogus = 1\n"), doctest::Contains("unknown key 'bogus'"), ConfigError);
        CHECK_THROWS_AS(parse_config("K = 2.5\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("T1 = abc\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("zeros = fuzzy\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("just text\n"), ConfigError);
        CHECK_THROWS_AS(parse_config("f = catalog:zero\npsi = catalog:zero\n"), ConfigError);
        CHECK_THROWS_AS(load_config("/nonexistent/cfg.txt"), IoError);
    }

    TEST_CASE("effective config round trip") {
        RunConfig c = parse_config(
            "alpha1 = 0.7\nbeta1 = 1.25\ngamma1 = 0.3333333333333333\ndelta = 0.1\nT1 = 0.25\nT2 = 0.6\nT = 2\n"
            "xi = 0.4\nK = 11\nzeros = exact\nrule = published\nstrict_uniqueness = false\nabs_tol = 1e-11\n"
            "det_tol = 1e-9\nn_r = 20\nn_t = 7\nnoise_ceiling = 1e6\nseed = 42\nphi = catalog:poly_smooth(s=4)\n"
            "psi = csv:data.csv\npsi_noise = 0.01\n");
        std::string once = dump_config(c);
        RunConfig back = parse_config(once);
        CHECK(dump_config(back) == once);
        CHECK(back.problem.gamma1 == c.problem.gamma1);
        CHECK(back.problem.xi == c.problem.xi);
        CHECK(back.problem.det_tol == c.problem.det_tol);
        CHECK(back.psi == c.psi);
        RunConfig d = parse_config("");
        CHECK(dump_config(parse_config(dump_config(d))) == dump_config(d));
        CHECK_FALSE(parse_config(dump_config(d)).problem.xi.has_value());
    }

    TEST_CASE("specfun prints e") {
        std::ostringstream out, err;
        CHECK(cmd_specfun("prabhakar", {1, 1, 1, 1.0}, 11, out, err) == 0);
        CHECK(out.str() == "2.7182818285\n");
        std::ostringstream o2, e2;
        CHECK(cmd_specfun("prabhakar", {1, 1}, 11, o2, e2) == 2);
        CHECK(cmd_specfun("nope", {1}, 11, o2, e2) == 2);
    }

    TEST_CASE("forward with zero data writes a zero grid") {
        fs::path dir = scratch("zero");
        write(dir / "cfg.txt", kZeroCfg);
        CliOptions o;
        o.out = (dir / "out").string();
        std::ostringstream out, err;
        REQUIRE(cmd_forward((dir / "cfg.txt").string(), o, out, err) == 0);
        auto rows = read_csv(dir / "out" / "u_grid.csv");
        CHECK(rows.size() == 10u * 9u);
        for (const auto& r : rows) CHECK(r[2] == 0.0);
        for (const char* f : {"f_coeffs.csv", "f_radial.csv", "convergence.csv", "verify_report.txt", "verify_report.csv",
                              "modes.csv", "psi.csv", "psi_catalog.txt", "summary.txt", "effective_config.txt"})
            CHECK_MESSAGE(fs::exists(dir / "out" / f), f);
    }

    TEST_CASE("exit codes") {
        fs::path dir = scratch("codes");
        write(dir / "bad.txt", "T1 = 0.9\nf = catalog:zero\n");
        write(dir / "singular.txt", "K = 2\ndet_tol = 1e10\nphi = catalog:one_minus_r2\nf = catalog:zero\n");
        CliOptions o;
        o.out = (dir / "out").string();
        o.skip_verify = true;
        std::ostringstream out, err;
        CHECK(cmd_forward((dir / "bad.txt").string(), o, out, err) == 2);
        CHECK(err.str().find("0 < T1 < T2 < T") != std::string::npos);
        CHECK(cmd_forward((dir / "missing.txt").string(), o, out, err) == 2);
        CHECK(cmd_forward((dir / "singular.txt").string(), o, out, err) == 3);
        CHECK(cmd_inverse((dir / "singular.txt").string(), o, out, err) == 2);
    }

    TEST_CASE("dump-effective-config prints and stops") {
        fs::path dir = scratch("dump");
        write(dir / "cfg.txt", kZeroCfg);
        CliOptions o;
        o.out = (dir / "out").string();
        o.dump_effective_config = true;
        o.k_max = 7;
        std::ostringstream out, err;
        CHECK(cmd_forward((dir / "cfg.txt").string(), o, out, err) == 0);
        CHECK_FALSE(fs::exists(dir / "out"));
        RunConfig back = parse_config(out.str());
        CHECK(back.problem.K == 7);
        CHECK(dump_config(back) == out.str());
    }

    TEST_CASE("shipped manufactured inverse example matches the bundled reference") {
        fs::path data = fs::path(FRACWDW_SOURCE_DIR) / "data" / "manufactured";
        fs::path dir = scratch("manufactured");
        CliOptions o;
        o.out = dir.string();
        o.skip_verify = true;
        std::ostringstream out, err;
        REQUIRE(cmd_inverse((data / "inverse.cfg").string(), o, out, err) == 0);
        auto got = read_csv(dir / "f_radial.csv");
        auto ref = read_csv(data / "reference_f_radial.csv");
        REQUIRE(got.size() == ref.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i][0] == ref[i][0]);
            worst = std::max(worst, std::abs(got[i][1] - ref[i][1]));
        }
        CHECK(worst < 1e-6);
    }

    TEST_CASE("csv inputs resolve next to the config and outputs ignore the locale") {
        fs::path dir = scratch("csv");
        write(dir / "phi.csv", "r,phi\n0,1\n0.5,0.75\n1,0\n");
        write(dir / "cfg.txt", "K = 2\nn_r = 5\nn_t = 3\nphi = csv:phi.csv\nf = catalog:zero\n");
        std::locale prev = std::locale::global(std::locale::classic());
        try {
            std::locale::global(std::locale("de_DE.UTF-8"));
        } catch (const std::runtime_error&) {
        }
        CliOptions o;
        o.out = (dir / "out").string();
        o.skip_verify = true;
        std::ostringstream out, err;
        int rc = cmd_forward((dir / "cfg.txt").string(), o, out, err);
        std::locale::global(prev);
        REQUIRE(rc == 0);
        std::string grid = slurp(dir / "out" / "u_grid.csv");
        CHECK(grid.find('\r') == std::string::npos);
        std::istringstream lines(grid);
        std::string line;
        while (std::getline(lines, line)) CHECK(std::count(line.begin(), line.end(), ',') == 2);
    }

    TEST_CASE("seeded psi noise is reproducible") {
        RunConfig c = parse_config("psi = catalog:one_minus_r2\npsi_noise = 0.01\nseed = 3\n");
        RadialFunction a = load_psi(c), b = load_psi(c);
        for (double r = 0.0; r <= 1.0; r += 0.1) CHECK(a(r) == b(r));
        c.problem.seed = 4;
        RadialFunction d = load_psi(c);
        CHECK(d(0.3) != a(0.3));
    }
}
