#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sixv/cli.hpp"
#include "sixv/lattice.hpp"

using namespace sixv;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("rates: unit weights give eight unit rates") {
    const CliResult r = invoke({"rates"});
    CHECK(r.code == 0);
    CHECK(r.out == "R1 1\nR2 1\nR3 1\nR4 1\nL1 1\nL2 1\nL3 1\nL4 1\n");

    const CliResult j = invoke({"rates", "--format", "json"});
    CHECK(j.code == 0);
    const auto parsed = nlohmann::json::parse(j.out);
    CHECK(parsed["R1"] == 1.0);
    CHECK(parsed.size() == 8);

    const CliResult w = invoke({"rates", "--weights", "1,1,1,1,4,1"});
    CHECK(w.code == 0);
    CHECK(w.out.find("R1 2\n") != std::string::npos);
    CHECK(w.out.find("R4 0.5\n") != std::string::npos);
}

TEST_CASE("rates: weight parsing errors exit with code 2") {
    CHECK(invoke({"rates", "--weights", "1,2,3"}).code == 2);
    CHECK(invoke({"rates", "--weights", "1,2,3,4,5,frog"}).code == 2);
    CHECK(invoke({"rates", "--weights", "0,1,1,1,1,1"}).code == 2);
    CHECK(invoke({"rates", "--weights", "1,1,1,1,1,1", "--uq", "1,2"}).code == 2);
    CHECK(invoke({"rates", "--uq", "-1,0.25", "--unchecked"}).code == 2);
    CHECK(invoke({"nonsense"}).code == 2);
    CHECK(invoke({}).code == 2);
}

TEST_CASE("enumerate reports the space size and partition function") {
    const CliResult r = invoke({"enumerate", "--M", "2", "--N", "2", "--k1",
                                "1", "--k2", "1"});
    CHECK(r.code == 0);
    const auto parsed = nlohmann::json::parse(r.out);
    CHECK(parsed["states"] == 6);
    CHECK(parsed["Z"] == doctest::Approx(6.0));

    const CliResult conn = invoke({"enumerate", "--M", "2", "--N", "2", "--k1",
                                   "1", "--k2", "1", "--connectivity"});
    const auto cj = nlohmann::json::parse(conn.out);
    CHECK(cj["connectivity"]["components"] == 1);
    CHECK(cj["connectivity"]["strongly_connected"] == true);

    const auto gen_path = temp_file("sixv_cli_gen.mtx");
    const auto states_path = temp_file("sixv_cli_states.json");
    const CliResult dump =
        invoke({"enumerate", "--M", "2", "--N", "2", "--k1", "1", "--k2", "1",
                "--dump-generator", gen_path.string(), "--dump-states",
                states_path.string()});
    CHECK(dump.code == 0);
    std::ifstream gen(gen_path);
    std::string header;
    std::getline(gen, header);
    CHECK(header == "%%MatrixMarket matrix coordinate real general");
    std::ifstream states(states_path);
    nlohmann::json index;
    states >> index;
    CHECK(index.is_array());
    CHECK(index.size() == 6);
    std::filesystem::remove(gen_path);
    std::filesystem::remove(states_path);
}

TEST_CASE("verify: passing configuration exits 0 with a full report") {
    const CliResult r = invoke({"verify", "--M", "2", "--N", "2", "--k1", "1",
                                "--k2", "1", "--weights", "1,2,3,4,5,6"});
    CHECK(r.code == 0);
    const auto report = nlohmann::json::parse(r.out);
    REQUIRE(report.is_array());
    CHECK(report.size() == 8);
    for (const auto& row : report) {
        CHECK(row.contains("check"));
        CHECK(row.contains("config"));
        CHECK(row.contains("residual"));
        CHECK(row.contains("tolerance"));
        CHECK(row["pass"] == true);
    }

    const CliResult selected =
        invoke({"verify", "--M", "3", "--N", "3", "--k1", "1", "--k2", "1",
                "--weights", "1,1,1,2,1,1", "--checks",
                "stationarity_full,stationarity_right,stationarity_left"});
    CHECK(selected.code == 0);
    CHECK(nlohmann::json::parse(selected.out).size() == 3);

    const CliResult csv = invoke({"verify", "--M", "2", "--N", "2", "--k1", "1",
                                  "--k2", "1", "--format", "csv", "--checks",
                                  "flip_weight"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("check,config,residual,tolerance,pass\n", 0) == 0);
}

TEST_CASE("verify: gated and unknown checks exit 2") {
    // right-only stationarity demands a free-fermion weight vector
    const CliResult gated =
        invoke({"verify", "--M", "3", "--N", "3", "--k1", "1", "--k2", "1",
                "--weights", "1,2,3,4,5,6", "--checks", "stationarity_right"});
    CHECK(gated.code == 2);
    CHECK(gated.err.find("free-fermion") != std::string::npos);

    CHECK(invoke({"verify", "--M", "2", "--N", "2", "--k1", "1", "--k2", "1",
                  "--checks", "made_up"})
              .code == 2);
    // degenerate flux is a usage error for verify
    CHECK(invoke({"verify", "--M", "2", "--N", "2", "--k1", "0", "--k2", "1"})
              .code == 2);
}

TEST_CASE("simulate: summaries are byte-identical for a fixed seed") {
    const std::vector<std::string> args = {"simulate", "--M", "6", "--N", "5",
                                           "--k1", "2", "--k2", "2",
                                           "--seed", "7", "--events", "2000"};
    const CliResult a = invoke(args);
    const CliResult b = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto summary = nlohmann::json::parse(a.out);
    CHECK(summary["config"]["seed"] == 7);
    CHECK(summary["observables"]["total_events"] == 2000);
    CHECK(summary["observables"]["absorbed"] == false);
    CHECK(summary["observables"]["jumps"].size() == 8);

    // degenerate flux names the one-dimensional degeneration
    const CliResult degenerate =
        invoke({"simulate", "--M", "6", "--N", "5", "--k1", "0", "--k2", "2",
                "--seed", "7"});
    CHECK(degenerate.code == 2);
    CHECK(degenerate.err.find("one-dimensional") != std::string::npos);

    CHECK(invoke({"simulate", "--M", "6", "--N", "5", "--k1", "2", "--k2", "2",
                  "--seed", "7", "--events", "10", "--time", "4"})
              .code == 2);
}

TEST_CASE("simulate: empirical mode reports the TV distance") {
    const CliResult r =
        invoke({"simulate", "--M", "2", "--N", "2", "--k1", "1", "--k2", "1",
                "--seed", "42", "--events", "200000", "--empirical"});
    CHECK(r.code == 0);
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary["empirical_tv"].get<double>() <= 0.02);
}

TEST_CASE("simulate: replicas merge deterministically") {
    const std::vector<std::string> args = {
        "simulate", "--M", "4", "--N", "4", "--k1", "1", "--k2", "1",
        "--seed", "11", "--events", "500", "--replicas", "3", "--jobs", "2"};
    const CliResult a = invoke(args);
    const CliResult b = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto summary = nlohmann::json::parse(a.out);
    CHECK(summary["replicas"].size() == 3);
    CHECK(summary["replicas"][2]["seed"] == 13);
    CHECK(summary["aggregate"].contains("drift_mean"));
}

TEST_CASE("state-tool validates, flips and dualizes") {
    const auto path = temp_file("sixv_cli_state.json");
    {
        std::ofstream f(path);
        f << codec_encode(canonical_state(2, 2, 1, 1));
    }
    const CliResult ok = invoke({"state-tool", "--op", "validate", "--in",
                                 path.string()});
    CHECK(ok.code == 0);
    const auto parsed = nlohmann::json::parse(ok.out);
    CHECK(parsed["valid"] == true);
    CHECK(parsed["k1"] == 1);
    CHECK(parsed["k2"] == 1);

    const CliResult flipped = invoke({"state-tool", "--op", "flip", "--in",
                                      path.string()});
    CHECK(flipped.code == 0);
    CHECK(codec_decode(flipped.out) == flip(canonical_state(2, 2, 1, 1)));

    const CliResult dualized = invoke({"state-tool", "--op", "dual", "--in",
                                       path.string()});
    CHECK(codec_decode(dualized.out) == dual(canonical_state(2, 2, 1, 1)));

    const CliResult types = invoke({"state-tool", "--op", "types", "--in",
                                    path.string()});
    const auto census = nlohmann::json::parse(types.out);
    CHECK(census["cross"] == 1);
    CHECK(census["empty"] == 1);

    // invalid state file: reported, not thrown, exit 1
    {
        std::ofstream f(path);
        f << R"({"M":2,"N":2,"H":[[1,0],[0,0]],"V":[[0,0],[0,0]]})";
    }
    const CliResult bad = invoke({"state-tool", "--op", "validate", "--in",
                                  path.string()});
    CHECK(bad.code == 1);
    CHECK(nlohmann::json::parse(bad.out)["valid"] == false);

    CHECK(invoke({"state-tool", "--op", "validate", "--in", "/nonexistent/x"})
              .code == 2);
    std::filesystem::remove(path);
}

TEST_CASE("help is help, not an error") {
    CHECK(invoke({"--help"}).code == 0);
    CHECK(invoke({"simulate", "--help"}).code == 0);
    const CliResult help = invoke({"--help"});
    CHECK(help.out.find("enumerate") != std::string::npos);
    CHECK(help.out.find("state-tool") != std::string::npos);
}
