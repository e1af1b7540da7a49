#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hybridbid/instance.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    std::string command = std::string(HYBRIDBID_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(command.c_str());
    if (status == -1) {
        return -1;
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

fs::path prepare_workdir() {
    fs::path dir = fs::temp_directory_path() / "hybridbid_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    hybridbid::Instance inst = testutil::small_instance(2, 2);
    inst.prices.da_price = {30.0, 80.0};
    inst.pv.scenarios[0] = {0.5, 1.5};
    inst.pv.scenarios[1] = {1.5, 0.5};
    hybridbid::save_instance(inst, dir / "instance.json");

    std::ofstream dirs(dir / "directions.csv");
    dirs << "+,-\n-,-\n+,+\n";
    return dir;
}

}  // namespace

TEST_CASE("solve command writes solution and breakdown") {
    fs::path dir = prepare_workdir();
    int code = run_cli("solve --instance " + (dir / "instance.json").string() + " --gamma 1 --out " +
                       (dir / "out").string());
    CHECK(code == 0);
    CHECK(fs::exists(dir / "out" / "solution.json"));
    CHECK(fs::exists(dir / "out" / "breakdown.json"));
}

TEST_CASE("sweep command emits one row per budget and is byte-idempotent") {
    fs::path dir = prepare_workdir();
    std::string base = "sweep --instance " + (dir / "instance.json").string() +
                       " --gammas 0..2 --directions " + (dir / "directions.csv").string();
    CHECK(run_cli(base + " --out " + (dir / "s1").string()) == 0);
    CHECK(run_cli(base + " --out " + (dir / "s2").string()) == 0);

    std::string sweep1 = slurp(dir / "s1" / "sweep.csv");
    int data_rows = -1;  // header
    for (std::stringstream ss(sweep1); ss.good();) {
        std::string line;
        std::getline(ss, line);
        if (!line.empty()) {
            ++data_rows;
        }
    }
    CHECK(data_rows == 3);
    CHECK(sweep1 == slurp(dir / "s2" / "sweep.csv"));
    CHECK(slurp(dir / "s1" / "positions.csv") == slurp(dir / "s2" / "positions.csv"));
}

TEST_CASE("verify command accepts fresh solves and rejects corrupted files") {
    fs::path dir = prepare_workdir();
    std::string instance = (dir / "instance.json").string();
    CHECK(run_cli("solve --instance " + instance + " --gamma 1 --out " + (dir / "out").string()) ==
          0);
    CHECK(run_cli("verify --instance " + instance + " --solution " +
                  (dir / "out" / "solution.json").string()) == 0);

    // tamper with the stored first-stage schedule
    std::string text = slurp(dir / "out" / "solution.json");
    auto pos = text.find("\"objective\"");
    REQUIRE(pos != std::string::npos);
    std::ofstream(dir / "corrupt.json") << text.replace(pos, 12, "\"objectiveX\"");
    CHECK(run_cli("verify --instance " + instance + " --solution " +
                  (dir / "corrupt.json").string()) == 3);

    CHECK(run_cli("verify --instance " + instance + " --gamma 1") == 0);
}

TEST_CASE("validation problems exit with code 1") {
    fs::path dir = prepare_workdir();
    CHECK(run_cli("solve --instance " + (dir / "missing.json").string()) == 1);
    CHECK(run_cli("sweep --instance " + (dir / "instance.json").string() + " --gammas 0..9") ==
          1);  // gamma beyond horizon
}

TEST_CASE("evaluate command settles a stored solution") {
    fs::path dir = prepare_workdir();
    std::string instance = (dir / "instance.json").string();
    REQUIRE(run_cli("solve --instance " + instance + " --gamma 2 --out " +
                    (dir / "out").string()) == 0);
    CHECK(run_cli("evaluate --instance " + instance + " --solution " +
                  (dir / "out" / "solution.json").string() + " --directions " +
                  (dir / "directions.csv").string() + " --out " + (dir / "eval").string()) == 0);
    std::string eval = slurp(dir / "eval" / "evaluation.csv");
    CHECK(eval.rfind("sequence,real_imbalance", 0) == 0);
}
