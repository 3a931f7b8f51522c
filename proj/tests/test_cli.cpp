#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "swreg/cli.hpp"
#include "swreg/paper_example.hpp"
#include "swreg/system_model.hpp"

using namespace swreg;

namespace {

const std::string kProblem = std::string(SWREG_DATA_DIR) + "/paper_example.json";
const std::string kQFile = std::string(SWREG_DATA_DIR) + "/paper_Q.json";

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/swreg_cli_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("check-stability") {
    SUBCASE("bundled problem with the bundled Q verifies") {
        CHECK(run_cli({"check-stability", kProblem, "--q-file", kQFile}) == 0);
    }
    SUBCASE("no Q file solves the analysis LMI") {
        CHECK(run_cli({"check-stability", kProblem}) == 0);
    }
    SUBCASE("doubling the first mode makes it uncertifiable") {
        auto [plant, exo] = load_problem(kProblem);
        plant.modes[0].A *= 2.0;  // spectral radius 1.8, no common Q exists
        auto path = write_temp("scaled.json", serialize_problem(plant, exo));
        CHECK(run_cli({"check-stability", path}) == 1);
        CHECK(run_cli({"check-stability", path, "--q-file", kQFile}) == 1);
    }
    SUBCASE("missing file is an input error") {
        CHECK(run_cli({"check-stability", "/nonexistent.json"}) == 2);
    }
    SUBCASE("missing argument is an input error") {
        CHECK(run_cli({"check-stability"}) == 2);
    }
}

TEST_CASE("synthesize") {
    SUBCASE("bundled problem synthesizes and exports") {
        const std::string out = "/tmp/swreg_cli_regulator.json";
        CHECK(run_cli({"synthesize", kProblem, "-o", out}) == 0);
        auto j = nlohmann::json::parse(read_file(out));
        CHECK(j["report"]["vstar_dim"] == 8);
        CHECK(j["report"]["condition_i"] == true);
        CHECK(j["modes"].size() == 2);
        CHECK(j["certificates"].contains("innovation"));
        std::remove(out.c_str());
    }
    SUBCASE("no input authority fails at the structural stage") {
        auto [plant, exo] = load_problem(kProblem);
        for (auto& md : plant.modes)
            md.B.setZero();
        auto path = write_temp("nob.json", serialize_problem(plant, exo));
        CHECK(run_cli({"synthesize", path}) == 1);
    }
    SUBCASE("strict epsilon still synthesizes: the LMIs are homogeneous") {
        // margins scale linearly with the decision variables, so any feasible
        // point can be rescaled to clear an arbitrarily strict margin
        CHECK(run_cli({"synthesize", kProblem, "--epsilon", "0.5"}) == 0);
    }
}

TEST_CASE("simulate") {
    const std::string reg_path = "/tmp/swreg_cli_sim_regulator.json";
    REQUIRE(run_cli({"synthesize", kProblem, "-o", reg_path}) == 0);

    SUBCASE("published signal produces the 100-row artifacts") {
        const std::string csv = "/tmp/swreg_cli_trace.csv";
        const std::string svg = "/tmp/swreg_cli_chart.svg";
        CHECK(run_cli({"simulate", kProblem, reg_path, "--signal",
                       "1:0-29,2:30-69,1:70-99", "--horizon", "100", "--csv", csv,
                       "--svg", svg}) == 0);
        std::istringstream is(read_file(csv));
        std::string line;
        std::getline(is, line);
        CHECK(line == "t,seconds,mode,e1,e2,u1,u2,u3,eta_norm");
        std::vector<int> modes;
        while (std::getline(is, line))
            if (!line.empty())
                modes.push_back(
                    std::atoi(line.substr(line.find(',', line.find(',') + 1) + 1).c_str()));
        REQUIRE(modes.size() == 100);
        CHECK(modes[29] == 1);
        CHECK(modes[30] == 2);
        CHECK(modes[70] == 1);
        CHECK(read_file(svg).find("<svg") == 0);
        std::remove(csv.c_str());
        std::remove(svg.c_str());
    }
    SUBCASE("overlapping segments are an input error") {
        CHECK(run_cli({"simulate", kProblem, reg_path, "--signal",
                       "1:0-29,1:25-69,1:70-99"}) == 2);
    }
    SUBCASE("constant signal over a shorter horizon") {
        const std::string csv = "/tmp/swreg_cli_trace50.csv";
        CHECK(run_cli({"simulate", kProblem, reg_path, "--signal", "1:0-49",
                       "--horizon", "50", "--csv", csv}) == 0);
        std::istringstream is(read_file(csv));
        std::string line;
        int rows = -1;  // header
        while (std::getline(is, line))
            if (!line.empty())
                ++rows;
        CHECK(rows == 50);
        std::remove(csv.c_str());
    }
    SUBCASE("identical invocations are byte-reproducible") {
        const std::string a = "/tmp/swreg_cli_a.csv";
        const std::string b = "/tmp/swreg_cli_b.csv";
        CHECK(run_cli({"simulate", kProblem, reg_path, "--signal", "1:0-49",
                       "--horizon", "50", "--seed", "9", "--csv", a}) == 0);
        CHECK(run_cli({"simulate", kProblem, reg_path, "--signal", "1:0-49",
                       "--horizon", "50", "--seed", "9", "--csv", b}) == 0);
        CHECK(read_file(a) == read_file(b));
        std::remove(a.c_str());
        std::remove(b.c_str());
    }
    std::remove(reg_path.c_str());
}

TEST_CASE("bad subcommand is an input error") {
    CHECK(run_cli({"frobnicate"}) == 2);
    CHECK(run_cli({}) == 2);
}

TEST_CASE("SWREG_TOL overrides the default residual tolerance") {
    setenv("SWREG_TOL", "not-a-number", 1);
    CHECK(run_cli({"synthesize", kProblem}) == 2);
    setenv("SWREG_TOL", "-1", 1);
    CHECK(run_cli({"synthesize", kProblem}) == 2);
    setenv("SWREG_TOL", "1e-7", 1);
    CHECK(run_cli({"check-stability", kProblem, "--q-file", kQFile}) == 0);
    unsetenv("SWREG_TOL");
}
