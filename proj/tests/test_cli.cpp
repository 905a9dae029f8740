#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

fs::path scratch(const std::string& name)
{
    fs::path const p = fs::temp_directory_path() / ("helmradial_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Run run(const std::string& args)
{
    fs::path const dir = scratch("io");
    std::string const cmd = std::string("'") + HELMRADIAL_EXE + "' " + args + " >" + (dir / "out").string() + " 2>" +
                            (dir / "err").string();
    int const status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "out"), slurp(dir / "err")};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("construct prints the generated spec")
{
    Run const r = run("construct --kind localised --n 2 --c1 1 --c2 3");
    REQUIRE(r.code == 0);
    auto const j = nlohmann::json::parse(r.out);
    CHECK(j["omega"].get<double>() == Catch::Approx(7.853981633974483).epsilon(1e-15));
    CHECK(j["jump_points"][1].get<double>() == Catch::Approx(0.2).epsilon(1e-15));
    CHECK(j["speeds"].size() == 3);

    Run const s = run("construct --kind stable --n 4 --c1 1 --c2 3");
    REQUIRE(s.code == 0);
    CHECK(nlohmann::json::parse(s.out)["omega"].get<double>() == Catch::Approx(28.274333882308138).epsilon(1e-15));
}

TEST_CASE("invalid input exits with code 2 and a structured error")
{
    for (const char* args : {"", "construct --kind bogus --n 2", "solve --input '{\"x\": 1}' --output-dir /tmp",
                             "construct --kind stable --n 0", "verify --suite nonsense", "solve --input /no/such/file --output-dir /tmp"}) {
        INFO(args);
        Run const r = run(args);
        CHECK(r.code == 2);
    }
    Run const r = run("construct --kind stable --n 3 --c1 3 --c2 1");
    CHECK(nlohmann::json::parse(r.err)["error"] == "validation");
}

TEST_CASE("solve writes every artefact")
{
    fs::path const dir = scratch("solve");
    Run const spec = run("construct --kind localised --n 4");
    REQUIRE(spec.code == 0);
    std::ofstream(dir / "spec.json") << spec.out;
    Run const r = run("solve --input " + (dir / "spec.json").string() + " --output-dir " + (dir / "out").string() +
                      " --grid 64 --samples 201");
    REQUIRE(r.code == 0);
    for (const char* f : {"radial.csv", "disc.csv", "diagnostics.json", "green_column.json", "stability.json"})
        CHECK(fs::exists(dir / "out" / f));
    auto const diag = nlohmann::json::parse(slurp(dir / "out" / "diagnostics.json"));
    CHECK(diag["residuals_pass"].get<bool>());
    CHECK(csv_rows(slurp(dir / "out" / "radial.csv")).size() == 202);
}

TEST_CASE("solve output is deterministic")
{
    fs::path const dir = scratch("determinism");
    std::string const spec = "'{\"dimension\": 3, \"mode\": 1, \"omega\": 9.5, \"boundary_coefficient\": [1, 0], "
                             "\"jump_points\": [0, 0.4, 1], \"speeds\": [1, 2]}'";
    REQUIRE(run("solve --input " + spec + " --output-dir " + (dir / "a").string()).code == 0);
    REQUIRE(run("solve --input " + spec + " --output-dir " + (dir / "b").string()).code == 0);
    for (const char* f : {"radial.csv", "diagnostics.json", "green_column.json"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    CHECK_FALSE(fs::exists(dir / "a" / "disc.csv"));
}

TEST_CASE("scan with zero jitter repeats the base row")
{
    Run const r = run("scan --kind localised --n 4 --seed 3 --samples 5 --jitter 0");
    REQUIRE(r.code == 0);
    auto const rows = csv_rows(r.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0][0] == "sample");
    for (std::size_t i = 2; i < rows.size(); ++i)
        CHECK(std::equal(rows[i].begin() + 1, rows[i].end(), rows[1].begin() + 1));
}

TEST_CASE("scan is seeded and shows the localisation collapse")
{
    Run const a = run("scan --kind localised --n 8 --seed 11 --samples 100 --jitter 0.01");
    Run const b = run("scan --kind localised --n 8 --seed 11 --samples 100 --jitter 0.01");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto const rows = csv_rows(a.out);
    REQUIRE(rows.size() == 102);
    double const base = std::stod(rows[1][5]);
    std::vector<double> sup;
    for (std::size_t i = 2; i < rows.size(); ++i) sup.push_back(std::stod(rows[i][5]));
    std::nth_element(sup.begin(), sup.begin() + sup.size() / 2, sup.end());
    CHECK(base / sup[sup.size() / 2] >= 5.0);
    CHECK(run("scan --kind localised --n 8 --seed 12 --samples 100 --jitter 0.01").out != a.out);
}

TEST_CASE("verify reports a passing suite")
{
    fs::path const dir = scratch("verify");
    Run const r = run("verify --suite specfun --output-dir " + dir.string());
    CHECK(r.code == 0);
    auto const j = nlohmann::json::parse(slurp(dir / "verify.json"));
    CHECK(j == nlohmann::json::parse(r.out));
}

TEST_CASE("whisper output")
{
    Run const r = run("whisper --m 5 --m 10");
    REQUIRE(r.code == 0);
    auto const j = nlohmann::json::parse(r.out);
    REQUIRE(j.is_array());
    CHECK(j.size() == 2);
}
