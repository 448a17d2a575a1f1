#include "solitonlab/lie_oracle.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = SOLITONLAB_CLI;
const fs::path kSpecs = SOLITONLAB_SPECS;
const fs::path kData = SOLITONLAB_DATA;

fs::path scratch(const std::string& name) {
    static std::atomic<int> counter{0};
    const auto p = fs::temp_directory_path() /
                   ("solitonlab_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Result cli(const std::string& args) {
    const auto dir = scratch("io");
    const std::string cmd =
        "'" + kCli + "' " + args + " >'" + (dir / "out").string() + "' 2>'" + (dir / "err").string() + "'";
    const int status = std::system(cmd.c_str());
    Result r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "out"), slurp(dir / "err")};
    fs::remove_all(dir);
    return r;
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

fs::path write_config(const fs::path& dir, const json& j) {
    const auto p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("solve a shipped complete spec") {
    const auto out = scratch("solve");
    const auto r = cli("solve --config " + q(kSpecs / "complete_two_summands.json") + " --out " + q(out / "run"));
    CHECK(r.code == 0);
    for (const char* f : {"trajectory.csv", "report.json", "manifest.json"}) CHECK(fs::exists(out / "run" / f));
    const auto manifest = read_json(out / "run" / "manifest.json");
    CHECK(manifest["verdict"] == "numerically_complete");
    CHECK(manifest.contains("run_id"));
    CHECK(manifest.contains("version"));
    const auto header = slurp(out / "run" / "trajectory.csv").substr(0, 40);
    CHECK(header.rfind("t,f_f1,f_f2,df_f1,df_f2,u,du,udd", 0) == 0);
    fs::remove_all(out);
}

TEST_CASE("bad configurations") {
    const auto dir = scratch("bad");
    auto j = read_json(kSpecs / "complete_two_summands.json");
    j["initial"] = json::array({-1.0});
    auto r = cli("solve --config " + q(write_config(dir, j)) + " --out " + q(dir / "run"));
    CHECK(r.code == 64);
    CHECK(r.err.find("initial") != std::string::npos);

    j = read_json(kSpecs / "complete_two_summands.json");
    j["C"] = 1.0;
    r = cli("solve --config " + q(write_config(dir, j)) + " --out " + q(dir / "run"));
    CHECK(r.code == 64);
    CHECK(r.err.find("C") != std::string::npos);

    r = cli("solve --config " + q(dir / "missing.json") + " --out " + q(dir / "run"));
    CHECK(r.code == 64);
    r = cli("solve --out " + q(dir / "run"));
    CHECK(r.code == 64);
    fs::remove_all(dir);
}

TEST_CASE("an expected invariant exit counts as success") {
    const auto out = scratch("exit");
    auto r = cli("solve --config " + q(kSpecs / "exit_two_summands.json") + " --out " + q(out / "a"));
    CHECK(r.code == 0);
    CHECK(read_json(out / "a" / "manifest.json")["verdict"] == "invariant_set_exit");

    auto j = read_json(kSpecs / "exit_two_summands.json");
    j.erase("expect");
    r = cli("solve --config " + q(write_config(out, j)) + " --out " + q(out / "b"));
    CHECK(r.code == 2);

    j["expect"] = "numerically_complete";
    r = cli("solve --config " + q(write_config(out, j)) + " --out " + q(out / "c"));
    CHECK(r.code == 2);
    fs::remove_all(out);
}

TEST_CASE("run directories") {
    const auto out = scratch("dirs");
    const auto spec = kSpecs / "complete_dancer_wang_m1.json";
    REQUIRE(cli("solve --config " + q(spec) + " --out " + q(out / "a")).code == 0);
    REQUIRE(cli("solve --config " + q(spec) + " --out " + q(out / "b")).code == 0);
    CHECK(slurp(out / "a" / "trajectory.csv") == slurp(out / "b" / "trajectory.csv"));
    // same inputs may reuse the directory
    CHECK(cli("solve --config " + q(spec) + " --out " + q(out / "a")).code == 0);
    CHECK(slurp(out / "a" / "trajectory.csv") == slurp(out / "b" / "trajectory.csv"));

    auto j = read_json(spec);
    j["C"] = -2.0;
    const auto other = write_config(out, j);
    CHECK(cli("solve --config " + q(other) + " --out " + q(out / "a")).code == 1);
    CHECK(cli("solve --config " + q(other) + " --out " + q(out / "a") + " --force").code == 0);
    fs::remove_all(out);
}

TEST_CASE("single cell sweep matches solve") {
    const auto out = scratch("single");
    const auto spec = kSpecs / "complete_dancer_wang.json";
    REQUIRE(cli("solve --config " + q(spec) + " --out " + q(out / "solo")).code == 0);
    REQUIRE(cli("sweep --config " + q(spec) + " --grid C=-10:1:1 --out " + q(out / "grid")).code == 0);
    CHECK(slurp(out / "solo" / "trajectory.csv") == slurp(out / "grid" / "cell_0000" / "trajectory.csv"));
    CHECK(read_json(out / "solo" / "report.json") == read_json(out / "grid" / "cell_0000" / "report.json"));
    fs::remove_all(out);
}

TEST_CASE("a sweep over C crosses a verdict boundary") {
    const auto out = scratch("boundary");
    REQUIRE(cli("sweep --config " + q(kSpecs / "sweep_dw_m2.json") + " --grid C=-10:3:4 --grid initial0=1:0.5:2 --jobs 4 --out " +
                q(out))
                .code == 0);
    std::istringstream csv(slurp(out / "sweep_summary.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line.rfind("cell,C,initial0,verdict", 0) == 0);
    std::vector<std::string> rows;
    while (std::getline(csv, line)) rows.push_back(line);
    REQUIRE(rows.size() == 8);
    // row-major: C outer, initial0 inner
    CHECK(rows[0].find("numerically_complete") != std::string::npos);
    CHECK(rows[7].find("invariant_set_exit") != std::string::npos);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string name = "cell_000" + std::to_string(i);
        CHECK(rows[i].rfind(name, 0) == 0);
        CHECK(fs::exists(out / name / "manifest.json"));
    }
    fs::remove_all(out);
}

TEST_CASE("expanding sweep respects the slope bound") {
    const auto out = scratch("expanding");
    REQUIRE(cli("sweep --config " + q(kSpecs / "expanding_dw.json") + " --grid C=-10:3:4 --out " + q(out)).code == 0);
    std::istringstream csv(slurp(out / "sweep_summary.csv"));
    std::string line;
    std::getline(csv, line);
    std::vector<std::string> cols;
    for (std::stringstream ss(line); std::getline(ss, line, ',');) cols.push_back(line);
    const auto col = std::find(cols.begin(), cols.end(), "expanding_bound_violations") - cols.begin();
    REQUIRE(col < std::ptrdiff_t(cols.size()));
    int rows = 0;
    while (std::getline(csv, line)) {
        std::vector<std::string> cells;
        for (std::stringstream ss(line); std::getline(ss, line, ',');) cells.push_back(line);
        CHECK(cells.at(std::size_t(col)) == "0");
        ++rows;
    }
    CHECK(rows == 4);
    CHECK(cli("sweep --config " + q(kSpecs / "expanding_dw.json") + " --grid D=1:1:2 --out " + q(out / "x")).code == 64);
    fs::remove_all(out);
}

TEST_CASE("probe-c0") {
    const auto out = scratch("probe");
    const auto spec = kSpecs / "complete_two_summands_d1.json";
    auto r = cli("probe-c0 --config " + q(spec) + " --c 5 --tau 0.5 --out " + q(out / "a"));
    CHECK(r.code == 0);
    const auto rep = read_json(out / "a" / "probe.json");
    CHECK(rep["found"] == true);
    CHECK(rep["empirical_C0"].get<double>() < 0.0);
    CHECK(rep["c_star"].is_number());
    CHECK(fs::exists(out / "a" / "probe.csv"));

    r = cli("probe-c0 --config " + q(spec) + " --c 1e-6 --tau 0.5 --out " + q(out / "b"));
    CHECK(r.code == 0);
    CHECK(std::abs(read_json(out / "b" / "probe.json")["empirical_C0"].get<double>()) <= 1e-3);

    r = cli("probe-c0 --config " + q(spec) + " --c 1000 --tau 0.5 --c-min -10 --out " + q(out / "c"));
    CHECK(r.code == 3);
    fs::remove_all(out);
}

TEST_CASE("curvature queries") {
    auto r = cli("curvature --decomposition " + q(kData / "abelian_t3.json"));
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["scalar_curvature"] == 0.0);

    r = cli("curvature --decomposition " + q(kData / "su2_su2_berger.json") + " --x 0.5,1.5,2");
    REQUIRE(r.code == 0);
    j = json::parse(r.out);
    const double brute = solitonlab::oracle::brute_scalar_curvature(solitonlab::oracle::su2_su2_berger(), {0.5, 1.5, 2.0});
    CHECK(j["scalar_curvature"].get<double>() == doctest::Approx(brute).epsilon(1e-12));
    const auto ric = solitonlab::oracle::brute_ricci_eigenvalues(solitonlab::oracle::su2_su2_berger(), {0.5, 1.5, 2.0});
    for (std::size_t i = 0; i < ric.size(); ++i) CHECK(j["ricci"][i].get<double>() == doctest::Approx(ric[i]).epsilon(1e-12));

    r = cli("curvature --decomposition " + q(kData / "asymmetric.json"));
    CHECK(r.code == 65);
    CHECK(json::parse(r.out)["validation"]["ok"] == false);

    CHECK(cli("curvature --decomposition " + q(kData / "nope.json")).code == 64);
    CHECK(cli("curvature --decomposition " + q(kData / "su2_su2_berger.json") + " --x 1,2").code == 64);
}
