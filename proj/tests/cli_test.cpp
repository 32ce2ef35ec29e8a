#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dabr_cli.hpp"

using namespace dabr;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args, const std::string& input) {
  args.insert(args.begin(), "dabr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

// Field values of the first record with this key.
std::vector<std::string> record(const std::string& text, const std::string& key) {
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> fields;
    std::istringstream f(line);
    std::string x;
    while (std::getline(f, x, '\t')) fields.push_back(x);
    if (!fields.empty() && fields[0] == key) return {fields.begin() + 1, fields.end()};
  }
  return {};
}

const std::string kSkewed = "0.58 0.12 0.11 0.1 0.09\n";

}  // namespace

TEST(Parse, Reals) {
  EXPECT_EQ(cli::parse_real("INF"), kInf);
  EXPECT_EQ(cli::parse_real("+inf"), kInf);
  EXPECT_EQ(cli::parse_real(" -Inf "), -kInf);
  EXPECT_DOUBLE_EQ(cli::parse_real("0.25"), 0.25);
  EXPECT_THROW(cli::parse_real("0.25x"), cli::ParseError);
  EXPECT_THROW(cli::parse_real("nan"), cli::ParseError);
  EXPECT_THROW(cli::parse_real(""), cli::ParseError);
  EXPECT_EQ(cli::parse_real_list("1, 2,3  4"), (std::vector<double>{1, 2, 3, 4}));
}

TEST(Parse, InputFormats) {
  EXPECT_EQ(cli::parse_weights("0.5, 0.25, 0.25").size(), 3u);
  EXPECT_EQ(cli::parse_weights("0.5\n0.25 # comment\n\n0.25\n").size(), 3u);
  const auto j = cli::parse_weights(R"({"weights": [8, 4, 3, 2, 2], "denominator": 19})");
  EXPECT_TRUE(j.has_exact());
  EXPECT_TRUE(j.is_normalized());
  EXPECT_FALSE(cli::parse_weights(R"({"weights": [0.5, 0.5]})").has_exact());
  EXPECT_THROW(cli::parse_weights(R"({"weights": [1.5, 2], "denominator": 4})"), cli::ParseError);
  EXPECT_THROW(cli::parse_weights(R"({"w": [1]})"), cli::ParseError);
  EXPECT_THROW(cli::parse_weights("{oops"), cli::ParseError);
  EXPECT_THROW(cli::parse_weights("1 2\n3\n", cli::InputFormat::plain), cli::ParseError);
  EXPECT_THROW(cli::parse_weights("0.5 -0.5"), InvalidWeights);
  EXPECT_THROW(cli::parse_weights(""), cli::ParseError);
}

TEST(Solve, RecordsRoundTrip) {
  const auto r = run_cli({"solve", "--b", "0.5", "--d", "1.5", "--format", "records"}, kSkewed);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
  LengthVector l;
  for (const auto& s : record(r.out, "lengths")) l.push_back(std::stoi(s));
  ASSERT_EQ(l.size(), 5u);
  const double recomputed = dabr_value(WeightVector({0.58, 0.12, 0.11, 0.1, 0.09}), l, {0.5, 1.5});
  EXPECT_EQ(record(r.out, "penalty").at(0), cli::format_real(recomputed));
  EXPECT_EQ(record(r.out, "codewords").size(), 5u);
}

TEST(Solve, ExactFinalPair) {
  const auto r = run_cli({"solve", "--d", "inf"}, R"({"weights": [8, 4, 3, 2, 2], "denominator": 19})");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("32/19, 4/19"), std::string::npos) << r.out;
  const auto rec = run_cli({"solve", "--d", "INF", "--format", "records"},
                           R"({"weights": [8, 4, 3, 2, 2], "denominator": 19})");
  EXPECT_EQ(record(rec.out, "final_pair"), (std::vector<std::string>{"32/19", "4/19"}));
  EXPECT_EQ(record(rec.out, "lengths"), (std::vector<std::string>{"1", "3", "3", "3", "3"}));
}

TEST(Solve, ExponentialSum) {
  const auto r = run_cli({"solve", "--b", "inf", "--d", "0.137503523749935", "--format", "records"},
                         "0.36,0.30,0.20,0.14");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(record(r.out, "exp_sum").at(0), "1.21");
  EXPECT_EQ(record(r.out, "lengths"), (std::vector<std::string>{"2", "2", "2", "2"}));
}

TEST(Solve, TwoSymbols) {
  const auto r = run_cli({"solve", "--format", "records"}, "1 1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(record(r.out, "codewords"), (std::vector<std::string>{"0", "1"}));
}

TEST(Solve, NegativeParameters) {
  const auto r = run_cli({"solve", "--b=-0.5", "--d=-2", "--format", "records"}, kSkewed);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(record(r.out, "lengths"), (std::vector<std::string>{"4", "4", "3", "2", "1"}));
}

TEST(Solve, TieFlag) {
  const std::string p19 = R"({"weights": [8, 4, 3, 2, 2], "denominator": 19})";
  const auto r = run_cli({"solve", "--d", "inf", "--tie", "top", "--format", "records"}, p19);
  EXPECT_EQ(record(r.out, "lengths"), (std::vector<std::string>{"1", "2", "3", "4", "4"}));
}

TEST(ExitCodes, Contract) {
  EXPECT_EQ(run_cli({"solve", "--b", "abc"}, kSkewed).code, cli::kParseError);
  EXPECT_EQ(run_cli({"solve"}, "0.5 -1").code, cli::kParseError);
  EXPECT_EQ(run_cli({"solve", "--bogus"}, kSkewed).code, cli::kParseError);
  EXPECT_EQ(run_cli({}, kSkewed).code, cli::kParseError);
  EXPECT_EQ(run_cli({"solve", "--b=-1", "--d", "1"}, kSkewed).code, cli::kUnsupported);
  EXPECT_EQ(run_cli({"solve", "--b=-2"}, kSkewed).code, cli::kUnsupported);
  EXPECT_EQ(run_cli({"verify"}, "1 1 1 1 1 1 1 1 1 1 1 1 1").code, cli::kTooLarge);
  EXPECT_EQ(run_cli({"solve", "missing-file.txt"}, "").code, cli::kParseError);
  EXPECT_EQ(run_cli({"--help"}, "").code, cli::kOk);
}

TEST(Verify, AgreesWithOracle) {
  const auto r = run_cli({"verify", "--b", "0", "--d", "inf", "--format", "records"}, kSkewed);
  EXPECT_EQ(r.code, cli::kOk) << r.out << r.err;
  EXPECT_EQ(record(r.out, "status").at(0), "agree");
  EXPECT_EQ(record(r.out, "bound_gap").at(1), "pass");
  const auto unary = run_cli({"verify", "--d=-3", "--format", "records"}, kSkewed);
  EXPECT_EQ(unary.code, cli::kOk);
  EXPECT_EQ(record(unary.out, "bound_gap").at(0), "n/a");
}

TEST(Verify, MismatchExitCode) {
  const std::string p19 = R"({"weights": [8, 4, 3, 2, 2], "denominator": 19})";
  auto r = run_cli({"verify", "--d", "inf", "--lengths", "2,2,2,3,3", "--format", "records"}, p19);
  EXPECT_EQ(r.code, cli::kOk) << r.out;
  r = run_cli({"verify", "--d", "0", "--lengths", "2,2,2,3,3", "--format", "records"}, p19);
  EXPECT_EQ(r.code, cli::kMismatch) << r.out;
  EXPECT_EQ(record(r.out, "status").at(0), "mismatch");
  EXPECT_EQ(run_cli({"verify", "--lengths", "1,1"}, p19).code, cli::kParseError);
  EXPECT_EQ(run_cli({"verify", "--lengths", "1,2.5,3,3,3"}, p19).code, cli::kParseError);
}

TEST(Verify, WorkedExampleOptimalSet) {
  const std::string p19 = R"({"weights": [8, 4, 3, 2, 2], "denominator": 19})";
  const auto r = run_cli({"verify", "--d", "inf"}, p19);
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("(2,2,2,3,3)"), std::string::npos);
  EXPECT_NE(r.out.find("(1,2,3,4,4)"), std::string::npos);
  EXPECT_NE(r.out.find("(1,3,3,3,3)"), std::string::npos);
}

TEST(Verify, DyadicGapZero) {
  const auto r = run_cli({"verify", "--format", "records"}, "0.5 0.25 0.125 0.125");
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(record(r.out, "bound_gap").at(0), "0");
}

TEST(Verify, RandomSevenSymbols) {
  const auto r = run_cli({"verify", "--b", "1", "--d", "2"}, "0.31 0.2 0.15 0.12 0.1 0.07 0.05");
  EXPECT_EQ(r.code, cli::kOk) << r.out;
}

TEST(Entropy, Values) {
  auto r = run_cli({"entropy", "--alpha", "1", "--format", "records"}, "0.5 0.25 0.25");
  EXPECT_EQ(record(r.out, "renyi_entropy").at(0), "1.5");
  r = run_cli({"entropy", "--alpha", "0.5", "--format", "records"}, "1 1 1 1");
  EXPECT_EQ(record(r.out, "renyi_entropy").at(0), "2");
}

TEST(Threshold, WorkedValue) {
  const auto r = run_cli({"threshold", "--b", "0", "--format", "records"}, "8 4 3 2 2");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(record(r.out, "threshold_D").at(0)), 10.235045076227212, 1e-9);
}

TEST(Sweep, RecordsAndFile) {
  const auto path = std::filesystem::temp_directory_path() / "dabr_sweep_test.tsv";
  const auto r = run_cli({"sweep", "--out", path.string()}, kSkewed);
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(path);
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  std::size_t solutions = 0;
  std::size_t samples = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("solution\t", 0) == 0) ++solutions;
    if (line.rfind("sample\t", 0) == 0) ++samples;
  }
  EXPECT_EQ(solutions, 5u);
  EXPECT_EQ(samples, 169u);
  std::filesystem::remove(path);
  const auto human = run_cli({"sweep", "--grid-b", "0,1", "--grid-d", "0,inf", "--format", "human"}, kSkewed);
  EXPECT_EQ(human.code, 0);
  EXPECT_NE(human.out.find("solutions ("), std::string::npos);
}

#ifdef DABR_CLI_PATH
TEST(Binary, ExitCodesFromProcess) {
  const std::string exe = DABR_CLI_PATH;
  auto status = [&](const std::string& args, const std::string& input) {
    const std::string cmd = "printf '" + input + "' | " + exe + " " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status("solve --d inf", "0.58 0.12 0.11 0.1 0.09"), 0);
  EXPECT_EQ(status("solve --b nope", "0.5 0.5"), 2);
  EXPECT_EQ(status("solve --b=-1 --d 2", "0.5 0.5"), 3);
  EXPECT_EQ(status("verify", "1 1 1 1 1 1 1 1 1 1 1 1 1"), 5);
}
#endif
