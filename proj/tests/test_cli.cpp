#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "kstab/rational.hpp"

namespace {

using json = nlohmann::ordered_json;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs a shell command, capturing stdout; stderr is discarded.
RunResult run_shell(const std::string& command_body) {
  const std::string command = command_body + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  RunResult result;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

RunResult run_cli(const std::string& args) {
  return run_shell(std::string(KSTAB_CLI_PATH) + " " + args);
}

std::string fixture(const std::string& name) {
  return std::string(KSTAB_FIXTURE_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  EXPECT_TRUE(file.is_open()) << "missing file: " << path;
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

TEST(CliExitCodes, EvalSucceeds) {
  const RunResult r = run_cli("eval -f " + fixture("fermat3.poly") + " --lambda 3,-1,-1,-1");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("energy: 0"), std::string::npos);
}

TEST(CliExitCodes, NonZeroTraceIsRejected) {
  const RunResult r = run_cli("eval -f " + fixture("fermat3.poly") + " --lambda 1,1,1,1");
  EXPECT_EQ(r.exit_code, 3);
}

TEST(CliExitCodes, WrongLambdaLengthIsRejected) {
  const RunResult r = run_cli("eval -f " + fixture("fermat3.poly") + " --lambda 1,-1");
  EXPECT_EQ(r.exit_code, 3);
}

TEST(CliExitCodes, MissingFileIsParseError) {
  const RunResult r = run_cli("eval -f /nonexistent.poly --lambda 1,-1");
  EXPECT_EQ(r.exit_code, 2);
}

TEST(CliExitCodes, MalformedPolynomialIsParseError) {
  const RunResult r = run_cli("check -f " + fixture("divisible.poly"));
  EXPECT_EQ(r.exit_code, 2);
}

TEST(CliExitCodes, UnknownFlagIsParseError) {
  const RunResult r = run_cli("eval --no-such-flag");
  EXPECT_EQ(r.exit_code, 2);
}

TEST(CliExitCodes, FutakiOnNonInvariantDirection) {
  const RunResult r =
      run_cli("futaki -f " + fixture("fermat3.poly") + " --lambda 3,-1,-1,-1");
  EXPECT_EQ(r.exit_code, 5);
}

TEST(CliExitCodes, SearchReportsViolation) {
  const RunResult r = run_cli("search -f " + fixture("conic.poly") + " --height 1");
  EXPECT_EQ(r.exit_code, 10);
  EXPECT_NE(r.output.find("violated: yes"), std::string::npos);
}

TEST(CliExitCodes, SearchWithoutViolation) {
  const RunResult r = run_shell("printf 'Z0 + Z1' | " + std::string(KSTAB_CLI_PATH) +
                                " search -f - --height 2");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("violated: no"), std::string::npos);
}

TEST(CliExitCodes, CertifyBudget) {
  const RunResult r = run_cli("certify -f " + fixture("fermat3.poly") + " --box-limit 100");
  EXPECT_EQ(r.exit_code, 4);
}

TEST(CliExitCodes, CertifyReportsViolation) {
  const RunResult r = run_cli("certify -f " + fixture("conic.poly"));
  EXPECT_EQ(r.exit_code, 10);
  EXPECT_NE(r.output.find("minimum: -3/2"), std::string::npos);
  EXPECT_NE(r.output.find("witness: (0,1,-1)"), std::string::npos);
  EXPECT_NE(r.output.find("constraint subsets to enumerate:"), std::string::npos);
}

TEST(CliExitCodes, EnvelopeVariableOutOfRange) {
  const RunResult r = run_cli("envelope -f " + fixture("fermat3.poly") +
                              " --lambda 3,-1,-1,-1 --var 7");
  EXPECT_EQ(r.exit_code, 3);
}

TEST(CliEnvelope, CsvTable) {
  const RunResult r = run_cli("envelope -f " + fixture("fermat3.poly") +
                              " --lambda 3,-1,-1,-1 --var 0");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output,
            "segment_start,segment_end,slope,contribution\n"
            "0,4,3,24\n"
            "4,inf,0,0\n");
}

TEST(CliEnvelope, CsvFileMatchesStdout) {
  const std::string path = "/tmp/kstab_envelope_test.csv";
  const RunResult r = run_cli("envelope -f " + fixture("fermat3.poly") +
                              " --lambda 3,-1,-1,-1 --var 0 --csv " + path);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(read_file(path), r.output);
  std::remove(path.c_str());
}

TEST(CliJson, EvalEnvelopeShape) {
  const RunResult r = run_cli("eval --json --float -f " + fixture("quadric.poly") +
                              " --lambda 1,-1,-1,1");
  EXPECT_EQ(r.exit_code, 0);
  const json doc = json::parse(r.output);
  EXPECT_EQ(doc.at("schema_version"), "1");
  EXPECT_EQ(doc.at("command"), "eval");
  EXPECT_EQ(doc.at("input_digest").get<std::string>().size(), 16u);
  EXPECT_TRUE(doc.at("warnings").is_array());
  const json& payload = doc.at("payload");
  EXPECT_EQ(payload.at("energy"), "-8/3");
  EXPECT_EQ(payload.at("limit"), "-8/3");
  EXPECT_EQ(kstab::parse_rational(payload.at("energy").get<std::string>()),
            kstab::Rational(-8, 3));
  EXPECT_DOUBLE_EQ(payload.at("energy_float").get<double>(), -8.0 / 3.0);
  for (const json& entry : payload.at("weights")) {
    kstab::parse_rational(entry.get<std::string>());  // throws on malformed output
  }
}

TEST(CliJson, CheckReportsNonFanoWarning) {
  const RunResult r = run_cli("check --json -f " + fixture("plane-quartic.poly"));
  EXPECT_EQ(r.exit_code, 0);
  const json doc = json::parse(r.output);
  EXPECT_EQ(doc.at("payload").at("fano"), false);
  EXPECT_FALSE(doc.at("warnings").empty());
}

TEST(CliJson, JsonInputMatchesTextInput) {
  const RunResult text = run_cli("eval --json -f " + fixture("conic.poly") + " --lambda 1,0,-1");
  const RunResult js = run_cli("eval --json -f " + fixture("conic.json") + " --lambda 1,0,-1");
  EXPECT_EQ(text.exit_code, 0);
  EXPECT_EQ(js.exit_code, 0);
  const json a = json::parse(text.output);
  const json b = json::parse(js.output);
  EXPECT_EQ(a.at("payload"), b.at("payload"));
  EXPECT_NE(a.at("input_digest"), b.at("input_digest"));  // digests cover raw bytes
}

TEST(CliJson, StdinMatchesFile) {
  const RunResult file = run_cli("check --json -f " + fixture("fermat3.poly"));
  const RunResult stdin_run = run_cli("check --json -f - < " + fixture("fermat3.poly"));
  EXPECT_EQ(file.exit_code, 0);
  EXPECT_EQ(stdin_run.exit_code, 0);
  EXPECT_EQ(file.output, stdin_run.output);
}

TEST(CliDeterminism, SearchIsSeedStable) {
  const std::string args = "search --json -f " + fixture("quadric.poly") +
                           " --height 1 --samples 16 --seed 99";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(a.exit_code, b.exit_code);
}

TEST(CliDeterminism, JobsDoNotChangeOutput) {
  const std::string base = "search --json -f " + fixture("fermat3.poly") +
                           " --height 1 --samples 12 --seed 5";
  const RunResult serial = run_cli(base + " --jobs 1");
  const RunResult parallel = run_cli(base + " --jobs 4");
  EXPECT_EQ(serial.output, parallel.output);
  const RunResult env =
      run_shell("KSTAB_JOBS=3 " + std::string(KSTAB_CLI_PATH) + " " + base);
  EXPECT_EQ(env.output, serial.output);
}

TEST(CliGolden, FrozenOutputs) {
  const struct {
    const char* name;
    std::string args;
  } cases[] = {
      {"eval.json",
       "eval --json --float -f " + fixture("fermat3.poly") + " --lambda 1,1,1,-3"},
      {"search.json",
       "search --json -f " + fixture("conic.poly") +
           " --height 1 --samples 4 --seed 123 --refine 2"},
      {"certify.json", "certify --json -f " + fixture("conic.poly")},
      {"futaki.json",
       "futaki --json -f " + fixture("cone-cubic.poly") + " --lambda 1,1,1,-3"},
  };
  for (const auto& c : cases) {
    const RunResult r = run_cli(c.args);
    const std::string expected = read_file(std::string(KSTAB_GOLDEN_DIR) + "/" + c.name);
    EXPECT_EQ(r.output, expected) << "golden mismatch for " << c.name;
  }
}

}  // namespace
