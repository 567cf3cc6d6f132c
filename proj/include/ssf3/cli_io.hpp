#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssf3/scalar_function.hpp"
#include "ssf3/ssf_engine.hpp"
#include "ssf3/types.hpp"
#include "ssf3/verify_oracles.hpp"

namespace ssf3::cli {

inline constexpr const char* kConfigDirEnv = "SSF3_CONFIG_DIR";

enum ExitCode : int { kOk = 0, kIoOrParse = 1, kPrecondition = 2, kToleranceFailure = 3 };

// Bad flag combination or out-of-range option value.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::string a_path;
  std::string v_path;
  std::string function;  // ';'-separated list of function specs
  int order = 3;
  int grid_size = 1001;
  int quad_order = 64;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  int n = 4;
  double v_norm = 1.0;
  std::string output;  // empty: standard output
  std::string report;  // eta: report JSON destination
  std::string emit = "csv";

  // Throws UsageError when an invariant fails.
  void validate() const;
};

// "poly:c0,c1,..." | "gauss:center,width" | "monomial:r"
ScalarFunction parse_function_spec(const std::string& s);
std::vector<ScalarFunction> parse_function_list(const std::string& s);

// {"n": n, "re": [[...]], "im": [[...]]}, row-major; "im" optional.
Matrix parse_matrix_json(const std::string& text);
std::string matrix_to_json(const Matrix& m);
Matrix read_matrix_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Relative paths missing from the working directory are looked up under
// $SSF3_CONFIG_DIR.
std::string resolve_input_path(const std::string& path);

// %.17g
std::string format_double(double x);

std::string eta_csv(const EtaDensity& eta);
std::string eta_report_json(const HermitianOperator& a, const HermitianOperator& v,
                            const EtaDensity& eta, const std::vector<ScalarFunction>& functions);
std::string cross_check_json(const CrossCheckReport& report);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ssf3::cli
