#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ssf3/cli_io.hpp"
#include "support.hpp"

using namespace ssf3;
using ssf3::testing::max_abs;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("ssf3_cli_" + std::to_string(std::random_device{}()) + "_" +
             std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_matrix(const std::string& path, const Matrix& m) {
  cli::write_text_file(path, cli::matrix_to_json(m));
}

int run(cli::RunConfig c, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(c, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::size_t parse_position(const std::string& s) {
  try {
    cli::parse_function_spec(s);
  } catch (const ParseError& e) {
    return e.position();
  }
  ADD_FAILURE() << "expected ParseError for '" << s << "'";
  return 0;
}

}  // namespace

TEST(ParseFunctionSpec, Monomial) {
  const auto f = cli::parse_function_spec("monomial:3");
  ASSERT_TRUE(f.is_polynomial());
  EXPECT_EQ(f.as_polynomial().coefficients, (std::vector<double>{0, 0, 0, 1}));
}

TEST(ParseFunctionSpec, Gaussian) {
  const auto f = cli::parse_function_spec("gauss:0,1");
  ASSERT_TRUE(f.is_gaussian());
  EXPECT_EQ(f.as_gaussian().center, 0.0);
  EXPECT_EQ(f.as_gaussian().width, 1.0);
}

TEST(ParseFunctionSpec, Polynomial) {
  const auto f = cli::parse_function_spec("poly:1,-2.5,3e-1");
  EXPECT_EQ(f.as_polynomial().coefficients, (std::vector<double>{1, -2.5, 0.3}));
}

TEST(ParseFunctionSpec, EmptyCoefficientPosition) {
  EXPECT_EQ(parse_position("poly:1,,2"), 6u);
}

TEST(ParseFunctionSpec, OtherMalformedInputs) {
  EXPECT_EQ(parse_position("sin:1"), 0u);
  EXPECT_EQ(parse_position("poly"), 4u);
  parse_position("gauss:0");
  parse_position("gauss:0,-1");
  parse_position("monomial:-1");
  parse_position("monomial:2.5");
  parse_position("poly:1,x");
}

TEST(ParseFunctionList, PositionsRelativeToWholeString) {
  EXPECT_EQ(cli::parse_function_list("monomial:3;gauss:0,1").size(), 2u);
  try {
    cli::parse_function_list("monomial:3;poly:1,,2");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 17u);
  }
}

TEST(MatrixJson, RoundTripIsBitwise) {
  std::mt19937_64 rng(1);
  const Matrix m = ssf3::testing::random_op(rng, 4).matrix();
  const Matrix back = cli::parse_matrix_json(cli::matrix_to_json(m));
  EXPECT_EQ(max_abs(m - back), 0.0);
}

TEST(MatrixJson, RowMajorWithOptionalImaginaryPart) {
  const Matrix m = cli::parse_matrix_json(R"({"n": 2, "re": [[1, 2], [3, 4]]})");
  EXPECT_EQ(m(0, 1), Complex(2.0));
  EXPECT_EQ(m(1, 0), Complex(3.0));
  const Matrix c = cli::parse_matrix_json(R"({"n": 1, "re": [[1]], "im": [[-2]]})");
  EXPECT_EQ(c(0, 0), Complex(1.0, -2.0));
}

TEST(MatrixJson, MalformedInputs) {
  EXPECT_THROW(cli::parse_matrix_json("{\"n\": 2, \"re\": [[1, 2], [3"), ParseError);
  EXPECT_THROW(cli::parse_matrix_json(R"({"n": 2, "re": [[1, 2]]})"), ParseError);
  EXPECT_THROW(cli::parse_matrix_json(R"({"re": [[1]]})"), ParseError);
  EXPECT_THROW(cli::parse_matrix_json(R"({"n": 1, "re": [["x"]]})"), ParseError);
  EXPECT_THROW(cli::read_matrix_file("/nonexistent/ssf3/a.json"), IoError);
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(cli::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(cli::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(RunConfigTest, Validation) {
  cli::RunConfig c;
  c.command = "eta";
  EXPECT_NO_THROW(c.validate());
  c.grid_size = 1;
  EXPECT_THROW(c.validate(), cli::UsageError);
  c.grid_size = 10;
  c.tol = 0.0;
  EXPECT_THROW(c.validate(), cli::UsageError);
  c.tol = 1e-6;
  c.emit = "xml";
  EXPECT_THROW(c.validate(), cli::UsageError);
}

TEST(Run, EtaOnScalarPair) {
  TempDir dir;
  write_matrix(dir.file("a.json"), Matrix::Zero(1, 1));
  write_matrix(dir.file("v.json"), Matrix::Ones(1, 1));
  cli::RunConfig c;
  c.command = "eta";
  c.a_path = dir.file("a.json");
  c.v_path = dir.file("v.json");
  c.grid_size = 101;
  c.report = dir.file("report.json");
  std::string out;
  ASSERT_EQ(run(c, &out), cli::kOk);
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "lambda,eta");
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    const double x = std::stod(line.substr(0, comma));
    const double y = std::stod(line.substr(comma + 1));
    const double want = x >= 0 && x <= 1 ? 0.5 * (1 - x) * (1 - x) : 0.0;
    EXPECT_NEAR(y, want, 1e-8);
    ++rows;
  }
  EXPECT_EQ(rows, 101);
  const auto rep = nlohmann::json::parse(slurp(c.report));
  EXPECT_NEAR(rep["moment0"].get<double>(), 1.0 / 6.0, 1e-8);
  EXPECT_NEAR(rep["trV3_over_6"].get<double>(), 1.0 / 6.0, 1e-15);
  EXPECT_EQ(rep["support"]["a"].get<double>(), -1.0);
  EXPECT_EQ(rep["support"]["b"].get<double>(), 1.0);
  EXPECT_TRUE(rep["residuals"].is_array());
  EXPECT_LE(rep["l1_norm"].get<double>(), rep["l1_bound"].get<double>());
}

TEST(Run, EtaJsonEmission) {
  TempDir dir;
  write_matrix(dir.file("a.json"), Matrix::Zero(1, 1));
  write_matrix(dir.file("v.json"), Matrix::Ones(1, 1));
  cli::RunConfig c;
  c.command = "eta";
  c.a_path = dir.file("a.json");
  c.v_path = dir.file("v.json");
  c.grid_size = 11;
  c.emit = "json";
  std::string out;
  ASSERT_EQ(run(c, &out), cli::kOk);
  const auto doc = nlohmann::json::parse(out);
  EXPECT_EQ(doc["lambda"].size(), 11u);
  EXPECT_EQ(doc["eta"].size(), 11u);
  EXPECT_TRUE(doc["report"].contains("moment0"));
}

TEST(Run, RemainderOfSquareIsZero) {
  TempDir dir;
  std::mt19937_64 rng(2);
  write_matrix(dir.file("a.json"), ssf3::testing::random_op(rng, 3).matrix());
  write_matrix(dir.file("v.json"), ssf3::testing::random_op(rng, 3).matrix());
  cli::RunConfig c;
  c.command = "remainder";
  c.a_path = dir.file("a.json");
  c.v_path = dir.file("v.json");
  c.function = "monomial:2";
  c.order = 3;
  std::string out;
  ASSERT_EQ(run(c, &out), cli::kOk);
  EXPECT_LE(std::abs(std::stod(out)), 1e-12);
  // Exact arithmetic in the scalar case.
  write_matrix(dir.file("a.json"), Matrix::Zero(1, 1));
  write_matrix(dir.file("v.json"), Matrix::Ones(1, 1));
  ASSERT_EQ(run(c, &out), cli::kOk);
  EXPECT_EQ(out, "0\n");
}

TEST(Run, EigPrintsSortedSpectrum) {
  TempDir dir;
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  write_matrix(dir.file("a.json"), m);
  cli::RunConfig c;
  c.command = "eig";
  c.a_path = dir.file("a.json");
  std::string out;
  ASSERT_EQ(run(c, &out), cli::kOk);
  std::istringstream in(out);
  double l0 = 0, l1 = 0;
  in >> l0 >> l1;
  EXPECT_NEAR(l0, -1.0, 1e-15);
  EXPECT_NEAR(l1, 1.0, 1e-15);
}

TEST(Run, ExitCodes) {
  TempDir dir;
  Matrix bad(2, 2);
  bad << 0, 1, 2, 0;
  write_matrix(dir.file("bad.json"), bad);
  write_matrix(dir.file("v.json"), Matrix::Identity(2, 2));
  cli::write_text_file(dir.file("garbage.json"), "{\"n\": 2, \"re\": [[1,");
  cli::RunConfig c;
  c.command = "check";
  c.a_path = dir.file("bad.json");
  c.v_path = dir.file("v.json");
  std::string err;
  EXPECT_EQ(run(c, nullptr, &err), cli::kPrecondition);
  EXPECT_FALSE(err.empty());
  c.a_path = dir.file("missing.json");
  EXPECT_EQ(run(c), cli::kIoOrParse);
  c.a_path = dir.file("garbage.json");
  EXPECT_EQ(run(c), cli::kIoOrParse);
  c.a_path = dir.file("v.json");
  c.function = "poly:1,,2";
  EXPECT_EQ(run(c), cli::kIoOrParse);
  c.command = "frobnicate";
  EXPECT_EQ(run(c), cli::kIoOrParse);
}

TEST(Run, CheckPassesAndFailsOnTolerance) {
  TempDir dir;
  std::mt19937_64 rng(3);
  write_matrix(dir.file("a.json"), ssf3::testing::random_op(rng, 3).matrix());
  write_matrix(dir.file("v.json"), ssf3::testing::scaled_op(rng, 3, 0.8).matrix());
  cli::RunConfig c;
  c.command = "check";
  c.a_path = dir.file("a.json");
  c.v_path = dir.file("v.json");
  c.seed = 9;
  std::string out;
  ASSERT_EQ(run(c, &out), cli::kOk);
  const auto doc = nlohmann::json::parse(out);
  EXPECT_EQ(doc["seed"].get<int>(), 9);
  EXPECT_EQ(doc["n"].get<int>(), 3);
  EXPECT_EQ(doc["summary"]["failures"].get<int>(), 0);
  ASSERT_EQ(doc["instances"].size(), 3u);
  for (const auto& inst : doc["instances"]) {
    EXPECT_TRUE(inst.contains("id"));
    EXPECT_TRUE(inst.contains("residual_matrix"));
    EXPECT_TRUE(inst["pass"].get<bool>());
  }
  c.tol = 1e-300;
  EXPECT_EQ(run(c), cli::kToleranceFailure);
}

TEST(Run, GenThenEtaIsBitwiseStable) {
  TempDir dir;
  cli::RunConfig g;
  g.command = "gen";
  g.seed = 77;
  g.n = 4;
  g.v_norm = 0.6;
  g.a_path = dir.file("a.json");
  g.v_path = dir.file("v.json");
  ASSERT_EQ(run(g), cli::kOk);
  const std::string a1 = slurp(g.a_path), v1 = slurp(g.v_path);
  ASSERT_EQ(run(g), cli::kOk);
  EXPECT_EQ(slurp(g.a_path), a1);
  EXPECT_EQ(slurp(g.v_path), v1);

  cli::RunConfig e;
  e.command = "eta";
  e.a_path = g.a_path;
  e.v_path = g.v_path;
  e.grid_size = 51;
  e.output = dir.file("eta1.csv");
  e.report = dir.file("r1.json");
  ASSERT_EQ(run(e), cli::kOk);
  e.output = dir.file("eta2.csv");
  e.report = dir.file("r2.json");
  ASSERT_EQ(run(e), cli::kOk);
  EXPECT_EQ(slurp(dir.file("eta1.csv")), slurp(dir.file("eta2.csv")));
  EXPECT_EQ(slurp(dir.file("r1.json")), slurp(dir.file("r2.json")));
}

TEST(ResolveInputPath, FallsBackToConfigDir) {
  TempDir dir;
  write_matrix(dir.file("cfg_only.json"), Matrix::Identity(2, 2));
  ::setenv(cli::kConfigDirEnv, dir.path().c_str(), 1);
  EXPECT_EQ(cli::resolve_input_path("cfg_only.json"), dir.file("cfg_only.json"));
  EXPECT_EQ(max_abs(cli::read_matrix_file("cfg_only.json") - Matrix::Identity(2, 2)), 0.0);
  ::unsetenv(cli::kConfigDirEnv);
  EXPECT_EQ(cli::resolve_input_path("cfg_only.json"), "cfg_only.json");
}
