#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phi4/sweep.hpp"

using namespace phi4;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SweepConfig tiny_config(const std::string& out_dir) {
    SweepConfig cfg;
    cfg.lambda_list = {0.01};
    cfg.n_max = 9;
    cfg.nu_max = 3;
    cfg.starts = {"max"};
    cfg.out_dir = out_dir;
    cfg.write_svg = false;
    return cfg;
}

}  // namespace

TEST_CASE("real formatting is canonical and round-trips") {
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
    for (double v : {1.0 / 3.0, 0.001, 17.684234, -2.5e-13, 1e300}) {
        const std::string s = format_real(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("csv writer emits the fixed header and sorted rows") {
    const fs::path dir = fs::temp_directory_path() / "phi4_sweep_csv";
    fs::create_directories(dir);
    const std::string path = (dir / "rows.csv").string();

    SUBCASE("zero rows give a header-only file") {
        emit_csv({}, path);
        CHECK(read_file(path) == "lambda,n,nu,start,delta,h_sign,h_log10_abs,status\n");
    }

    SUBCASE("rows are sorted by coupling, start, iteration, order") {
        std::vector<SweepRow> rows;
        SweepRow r;
        r.lambda = 0.01;
        r.start = "min";
        r.nu = 1;
        r.n = 9;
        r.delta = 0.25;
        r.h_sign = 1;
        r.h_log10_abs = -2.0;
        r.status = "ok";
        rows.push_back(r);
        r.n = 7;
        rows.push_back(r);
        r.start = "max";
        rows.push_back(r);
        emit_csv(rows, path);

        const std::string body = read_file(path);
        std::istringstream lines(body);
        std::string line;
        std::getline(lines, line);
        CHECK(line == "lambda,n,nu,start,delta,h_sign,h_log10_abs,status");
        std::getline(lines, line);
        CHECK(line == "0.01,7,1,max,0.25,1,-2,ok");
        std::getline(lines, line);
        CHECK(line == "0.01,7,1,min,0.25,1,-2,ok");
        std::getline(lines, line);
        CHECK(line == "0.01,9,1,min,0.25,1,-2,ok");
    }
}

TEST_CASE("a small sweep produces one row per grid cell") {
    const fs::path dir = fs::temp_directory_path() / "phi4_sweep_small";
    fs::remove_all(dir);
    const SweepConfig cfg = tiny_config((dir / "a").string());
    const SweepResult res = run_sweep(cfg);

    // orders 7 and 9, iterations 0..3, one coupling, one start
    CHECK(res.rows.size() == 8);
    CHECK_FALSE(res.any_divergence);

    std::set<std::pair<int, int>> seen;
    for (const SweepRow& r : res.rows) {
        CHECK(r.lambda == 0.01);
        CHECK(r.start == "max");
        CHECK(r.status == "ok");  // far from convergence after three steps
        CHECK(r.h_sign == (r.n == 9 ? 1 : -1));
        seen.insert({r.nu, r.n});
    }
    CHECK(seen.size() == 8);

    CHECK(res.files_written.size() == 1);
    CHECK(fs::exists(dir / "a" / "sweep.csv"));
}

TEST_CASE("identical configurations give byte-identical artifacts") {
    const fs::path dir = fs::temp_directory_path() / "phi4_sweep_repeat";
    fs::remove_all(dir);
    run_sweep(tiny_config((dir / "a").string()));
    run_sweep(tiny_config((dir / "b").string()));
    CHECK(read_file(dir / "a" / "sweep.csv") ==
          read_file(dir / "b" / "sweep.csv"));
}

TEST_CASE("a forced divergence labels the event row and stops the trace") {
    const fs::path dir = fs::temp_directory_path() / "phi4_sweep_div";
    fs::remove_all(dir);
    SweepConfig cfg = tiny_config((dir / "a").string());
    cfg.div_threshold = 1e-6;  // any state trips the detector
    const SweepResult res = run_sweep(cfg);

    CHECK(res.any_divergence);
    int diverged_rows = 0;
    for (const SweepRow& r : res.rows) {
        CHECK(r.nu <= 1);
        if (r.nu == 1) {
            CHECK(r.status == "diverged");
            ++diverged_rows;
        } else {
            CHECK(r.status == "ok");
        }
    }
    CHECK(diverged_rows == 2);
}

TEST_CASE("figure sets render only couplings with data") {
    const fs::path dir = fs::temp_directory_path() / "phi4_sweep_svg";
    fs::remove_all(dir);
    fs::create_directories(dir);

    SweepConfig cfg = tiny_config((dir / "run").string());
    cfg.lambda_list = {0.001, 0.01};
    cfg.nu_max = 6;
    cfg.n_max = 25;
    cfg.starts = {"max", "min"};
    const SweepResult res = run_sweep(cfg);

    const std::string prefix = (dir / "fig_").string();
    const std::vector<std::string> set1 = emit_svg(res.rows, 1, prefix);
    REQUIRE(set1.size() == 2);  // only 0.001 and 0.01 have data
    CHECK(set1[0] == prefix + "set1_lambda0.001.svg");
    CHECK(set1[1] == prefix + "set1_lambda0.01.svg");
    for (const std::string& f : set1) {
        const std::string body = read_file(f);
        CHECK(body.rfind("<?xml", 0) == 0);
        CHECK(body.find("<svg") != std::string::npos);
        CHECK(body.find("</svg>") != std::string::npos);
        CHECK(body.find("n=7") != std::string::npos);
    }

    const std::vector<std::string> set3 = emit_svg(res.rows, 3, prefix);
    REQUIRE(set3.size() == 2);
    CHECK(set3[0] == prefix + "set3_summary0.001_0.01.svg");

    CHECK_THROWS_AS(emit_svg(res.rows, 4, prefix), std::invalid_argument);
}

TEST_CASE("invalid configurations are rejected up front") {
    SweepConfig cfg;
    cfg.lambda_list = {};
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);

    cfg = SweepConfig{};
    cfg.lambda_list = {-0.5};
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);

    cfg = SweepConfig{};
    cfg.n_max = 10;
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);

    cfg = SweepConfig{};
    cfg.nu_max = 0;
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);

    cfg = SweepConfig{};
    cfg.starts = {"sideways"};
    CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
}
