// End-to-end checks of the installed command-line surface: exit codes,
// CSV shapes, determinism, and the built-in instances.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& arguments, bool merge_stderr = false) {
  const std::string command = std::string(FJLIM_CLI_PATH) + " " + arguments +
                              (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = ::popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  std::array<char, 4096> buffer;
  std::size_t got = 0;
  while ((got = ::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<double> csv_row_values(const std::string& line) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
  return values;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("fjlim_cli_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("validate: built-ins pass, primitivity is reported") {
  const auto ex1 = run_cli("validate --instance ex1");
  CHECK(ex1.exit_code == 0);
  CHECK(ex1.output.find("primitive: true") != std::string::npos);
  CHECK(ex1.output.find("assumptions: satisfied") != std::string::npos);

  const auto ex2 = run_cli("validate --instance ex2");
  CHECK(ex2.exit_code == 0);
  CHECK(ex2.output.find("primitive: false") != std::string::npos);
  CHECK(ex2.output.find("assumptions: satisfied") != std::string::npos);
}

TEST_CASE("validate: violated assumptions are named and exit 1") {
  const auto path = write_temp("zero_row.json", R"({
    "W": [[0.0, 0.0], [0.5, 0.5]],
    "sigma_tilde": [1.0, 0.5]
  })");
  const auto result = run_cli("validate --instance " + path);
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("row_stochastic: false") != std::string::npos);
  CHECK(result.output.find("assumptions: violated (row_stochastic)") !=
        std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("validate: parse failures exit 2") {
  const auto path = write_temp("garbled.json", "{ this is not json");
  CHECK(run_cli("validate --instance " + path).exit_code == 2);
  std::filesystem::remove(path);
  CHECK(run_cli("validate --instance /nonexistent.json").exit_code == 2);
}

TEST_CASE("simulate: CSV shape, settling behavior, determinism") {
  const auto result =
      run_cli("simulate --instance ex1 --sigma-max 0.05 --k-max 400");
  REQUIRE(result.exit_code == 0);
  const auto lines = lines_of(result.output);
  REQUIRE(lines.size() == 402);  // header + k = 0..400
  CHECK(lines.front() == "k,y1,y2,y3,y4");

  const auto first = csv_row_values(lines[1]);
  REQUIRE(first.size() == 5);
  CHECK(first[0] == 0.0);
  CHECK(first[1] == 0.20);
  CHECK(first[4] == 0.29);

  // settles near the quasi-consensus value 0.30
  const auto last = csv_row_values(lines.back());
  for (int i = 1; i <= 4; ++i) {
    CHECK(std::abs(last[i] - 0.30) < 0.02);
  }

  const auto again =
      run_cli("simulate --instance ex1 --sigma-max 0.05 --k-max 400");
  CHECK(again.output == result.output);  // byte-identical
}

TEST_CASE("simulate: DeGroot model reaches the 0.22 consensus") {
  const auto result =
      run_cli("simulate --instance ex1 --model degroot --k-max 100");
  REQUIRE(result.exit_code == 0);
  const auto last = csv_row_values(lines_of(result.output).back());
  for (int i = 1; i <= 4; ++i) {
    CHECK(std::abs(last[i] - 0.22) <= 0.005);
  }
}

TEST_CASE("simulate: periodic instance still reaches quasi-consensus") {
  const auto result = run_cli("simulate --instance ex2 --k-max 600");
  REQUIRE(result.exit_code == 0);  // sigma_max 0.1 comes from the instance
  const auto last = csv_row_values(lines_of(result.output).back());
  for (int i = 1; i <= 4; ++i) {
    CHECK(std::abs(last[i] - 0.37) <= 0.02);
  }
}

TEST_CASE("simulate: missing sigma_max is a usage error") {
  CHECK(run_cli("simulate --instance ex1").exit_code == 2);
}

TEST_CASE("sweep: reproduces the reference table within its bands") {
  const auto result =
      run_cli("sweep --instance ex1 --grid 0.2,0.05,0.01,0.001");
  REQUIRE(result.exit_code == 0);
  const auto lines = lines_of(result.output);
  REQUIRE(lines.size() == 5);
  CHECK(lines.front() == "sigma_max,gain_gap,quasi_gap,settling_time");

  const std::vector<double> gaps = {2.3e-1, 6.2e-2, 1.3e-2, 1.3e-3};
  const std::vector<double> quasi = {7.0e-2, 1.9e-2, 3.8e-3, 3.8e-4};
  const std::vector<double> settle = {22, 76, 361, 3572};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto row = csv_row_values(lines[i + 1]);
    REQUIRE(row.size() == 4);
    CHECK(std::abs(row[1] - gaps[i]) <= 0.05 * gaps[i]);
    CHECK(std::abs(row[2] - quasi[i]) <= 0.05 * quasi[i]);
    CHECK(std::abs(row[3] - settle[i]) <= 0.10 * settle[i]);
  }
}

TEST_CASE("sweep: a single-agent instance is trivial at every sigma_max") {
  const auto path = write_temp("single.json", R"({
    "W": [[1.0]],
    "sigma_tilde": [1.0],
    "y0": [0.42]
  })");
  const auto result = run_cli("sweep --instance " + path + " --grid 0.5");
  REQUIRE(result.exit_code == 0);
  const auto lines = lines_of(result.output);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1] == "0.5,0,0,0");
  std::filesystem::remove(path);
}

TEST_CASE("sweep: a non-decreasing grid is a usage error") {
  const auto result =
      run_cli("sweep --instance ex1 --grid 0.001,0.01,0.05,0.2", true);
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("decreasing") != std::string::npos);
}

TEST_CASE("compare: FJ tracks DeGroot for small sigma_max") {
  const auto result =
      run_cli("compare --instance ex1 --sigma-max 0.01 --k-max 10");
  REQUIRE(result.exit_code == 0);
  const auto lines = lines_of(result.output);
  REQUIRE(lines.size() == 12);
  CHECK(lines.front() ==
        "k,fj_y1,fj_y2,fj_y3,fj_y4,dg_y1,dg_y2,dg_y3,dg_y4");
  double worst = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = csv_row_values(lines[i]);
    REQUIRE(row.size() == 9);
    for (int j = 1; j <= 4; ++j) {
      worst = std::max(worst, std::abs(row[j] - row[j + 4]));
    }
  }
  CHECK(worst <= 10 * 0.01);  // a small multiple of sigma_max

  const auto tiny =
      run_cli("compare --instance ex1 --sigma-max 1e-12 --k-max 10");
  REQUIRE(tiny.exit_code == 0);
  const auto tiny_lines = lines_of(tiny.output);
  double tiny_worst = 0.0;
  for (std::size_t i = 1; i < tiny_lines.size(); ++i) {
    const auto row = csv_row_values(tiny_lines[i]);
    for (int j = 1; j <= 4; ++j) {
      tiny_worst = std::max(tiny_worst, std::abs(row[j] - row[j + 4]));
    }
  }
  CHECK(tiny_worst <= 1e-10);

  const auto zero = run_cli("compare --instance ex1 --sigma-max 0.3 --k-max 0");
  const auto zero_lines = lines_of(zero.output);
  REQUIRE(zero_lines.size() == 2);
  const auto row = csv_row_values(zero_lines[1]);
  for (int j = 1; j <= 4; ++j) CHECK(row[j] == row[j + 4]);
}

TEST_CASE("campaign: deterministic summary, green checks, usage errors") {
  const auto result = run_cli("campaign --n 4 --count 20 --seed 7");
  REQUIRE(result.exit_code == 0);
  const auto lines = lines_of(result.output);
  REQUIRE(lines.size() == 7);
  CHECK(lines.front() == "check,pass,fail");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i].find(",20,0") != std::string::npos);
  }

  const auto again = run_cli("campaign --n 4 --count 20 --seed 7");
  CHECK(again.output == result.output);

  const auto different_seed = run_cli("campaign --n 4 --count 20 --seed 8");
  CHECK(different_seed.exit_code == 0);

  const auto pairs = run_cli("campaign --n 2 --count 1000 --seed 3");
  CHECK(pairs.exit_code == 0);
  for (const auto& line : lines_of(pairs.output)) {
    if (line.rfind("check", 0) == 0) continue;
    CHECK(line.find(",1000,0") != std::string::npos);
  }

  CHECK(run_cli("campaign --n 4 --count 0 --seed 7").exit_code == 2);
  CHECK(run_cli("campaign --n 1 --count 5 --seed 7").exit_code == 2);
}

TEST_CASE("instance files with a CSV matrix work end to end") {
  const auto csv = write_temp("w.csv", "0.5,0.5\n0.25,0.75\n");
  const auto json = write_temp(
      "inst.json", std::string(R"({"W": ")") + csv +
                       R"(", "sigma_tilde": [1.0, 0.5], "y0": [0.1, 0.9]})");
  const auto result = run_cli("validate --instance " + json);
  CHECK(result.exit_code == 0);
  const auto sim =
      run_cli("simulate --instance " + json + " --sigma-max 0.2 --k-max 5");
  CHECK(sim.exit_code == 0);
  CHECK(lines_of(sim.output).size() == 7);
  std::filesystem::remove(csv);
  std::filesystem::remove(json);
}

TEST_CASE("relaxed validation flags") {
  const auto denormalized = write_temp("denorm.json", R"({
    "W": [[0.5, 0.5], [0.5, 0.5]],
    "sigma_tilde": [0.4, 0.8],
    "sigma_max": 0.2,
    "y0": [0.1, 0.9]
  })");
  CHECK(run_cli("validate --instance " + denormalized).exit_code == 1);
  CHECK(run_cli("validate --instance " + denormalized +
                " --renormalize-sigma-tilde")
            .exit_code == 0);
  const auto warn = run_cli("simulate --instance " + denormalized +
                                " --renormalize-sigma-tilde --k-max 3",
                            true);
  CHECK(warn.exit_code == 0);
  CHECK(warn.output.find("renormalized") != std::string::npos);
  std::filesystem::remove(denormalized);

  const auto with_zero = write_temp("zero_sigma.json", R"({
    "W": [[0.5, 0.5], [0.5, 0.5]],
    "sigma_tilde": [0.0, 1.0],
    "sigma_max": 0.2,
    "y0": [0.1, 0.9]
  })");
  CHECK(run_cli("validate --instance " + with_zero).exit_code == 1);
  CHECK(run_cli("validate --instance " + with_zero + " --allow-zero-sigma")
            .exit_code == 0);
  CHECK(run_cli("simulate --instance " + with_zero +
                " --allow-zero-sigma --k-max 3")
            .exit_code == 0);
  std::filesystem::remove(with_zero);
}

TEST_CASE("unknown arguments and missing subcommands are usage errors") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("simulate --instance ex1 --sigma-max 0.05 --model nope")
            .exit_code == 2);
}
