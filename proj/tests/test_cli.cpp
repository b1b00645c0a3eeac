#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lpt/netlist.hpp"
#include "lpt/simcore.hpp"

namespace {

const std::string kCli = LPT_CLI_PATH;
const std::string kS27 = std::string(LPT_FIXTURES_DIR) + "/s27.bench";

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string out_path = "cli_test_stdout.tmp";
    int rc = std::system((kCli + " " + args + " > " + out_path + " 2> cli_test_stderr.tmp").c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("fsim cumulative coverage curve") {
    write_file("t1_vectors.txt",
               "1110010\n1001101\n0100111\n0010000\n0010010\n0101010\n0001000\n1011010\n"
               "1101000\n");
    RunResult r = run("fsim " + kS27 + " --vectors t1_vectors.txt --collapse");
    CHECK(r.exit_code == 0);
    // 9 rows plus summary and header; final row carries the set's coverage
    std::istringstream lines(r.out);
    std::string line, last;
    std::getline(lines, line);
    CHECK(line.find("faults=32") != std::string::npos);
    std::getline(lines, line);
    CHECK(line == "vector,coverage_percent");
    int rows = 0;
    while (std::getline(lines, line)) {
        last = line;
        ++rows;
    }
    CHECK(rows == 9);
    CHECK(last == "1101000,96.9");  // 31 of our 32 collapsed faults
    std::remove("t1_vectors.txt");
}

TEST_CASE("fsim error paths") {
    CHECK(run("fsim no_such_file.bench --random 4").exit_code == 2);
    CHECK(run("fsim " + kS27).exit_code == 1);  // neither --vectors nor --random
    write_file("bad_vectors.txt", "10x1\n");
    CHECK(run("fsim " + kS27 + " --vectors bad_vectors.txt").exit_code == 2);
    std::remove("bad_vectors.txt");
}

TEST_CASE("fsim deterministic random runs") {
    RunResult a = run("fsim " + kS27 + " --random 9 --seed 7");
    RunResult b = run("fsim " + kS27 + " --random 9 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("frame pipeline outputs") {
    RunResult r = run("frame " + kS27 +
                      " --seed 5 --out-report frame_report.json --out-csv frame_curve.csv"
                      " --out-frame frame_order.txt --exact-check");
    REQUIRE(r.exit_code == 0);

    nlohmann::json rep = nlohmann::json::parse(read_file("frame_report.json"));
    CHECK(rep["coverage_percent"] == "100.0");
    size_t n_pbest = rep["pbest"].size();
    CHECK(rep["frame"]["order"].size() == n_pbest);

    // frame file matches the report and re-simulates to the reported coverage
    std::istringstream ff(read_file("frame_order.txt"));
    std::vector<lpt::TestVector> frame_vectors;
    std::string line;
    while (std::getline(ff, line))
        if (!line.empty()) frame_vectors.emplace_back(line);
    REQUIRE(frame_vectors.size() == n_pbest);

    lpt::Circuit c = lpt::parse_bench_file(kS27);
    auto faults = lpt::enumerate_faults(c, true);
    auto check =
        lpt::fault_simulate_parallel(c, frame_vectors, faults, lpt::SimMode::Scan);
    CHECK(check.coverage() == doctest::Approx(1.0));

    if (n_pbest <= 8) {
        REQUIRE(rep.contains("exact_check"));
        CHECK(rep["exact_check"]["gap"].get<long>() >= 0);
    }

    // coverage CSV has one row per kept vector
    std::istringstream csv(read_file("frame_curve.csv"));
    std::getline(csv, line);
    CHECK(line == "vector,coverage_percent");
    size_t rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == n_pbest);

    std::remove("frame_curve.csv");
    std::remove("frame_order.txt");
}

TEST_CASE("frame usage errors") {
    CHECK(run("frame " + kS27 + " --pop-size 0").exit_code == 1);
    CHECK(run("frame no_such.bench").exit_code == 2);
}

TEST_CASE("report rendering") {
    // consumes the report produced by the pipeline test (regenerate if absent)
    if (read_file("frame_report.json").empty())
        REQUIRE(run("frame " + kS27 + " --seed 5 --out-report frame_report.json").exit_code ==
                0);
    RunResult r = run("report frame_report.json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("Selected vectors (pbest)") != std::string::npos);
    CHECK(r.out.find("T1") != std::string::npos);
    CHECK(r.out.find("100.0") != std::string::npos);

    RunResult again = run("report frame_report.json");
    CHECK(again.out == r.out);

    write_file("empty_report.json", "");
    CHECK(run("report empty_report.json").exit_code == 2);
    write_file("garbage_report.json", "{\"tool\": 3");
    CHECK(run("report garbage_report.json").exit_code == 2);
    std::remove("empty_report.json");
    std::remove("garbage_report.json");
    std::remove("frame_report.json");
}

TEST_CASE("config file mirrors the flags") {
    write_file("swarm.toml", "[frame]\nseed=11\npop-size=16\nstagnation=10\n");
    RunResult a = run("--config swarm.toml frame " + kS27);
    RunResult b = run("frame " + kS27 + " --seed 11 --pop-size 16 --stagnation 10");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    // explicit flags override config values
    RunResult c = run("--config swarm.toml frame " + kS27 + " --seed 3");
    RunResult d = run("frame " + kS27 + " --seed 3 --pop-size 16 --stagnation 10");
    CHECK(c.out == d.out);
    std::remove("swarm.toml");
}
