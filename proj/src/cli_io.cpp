#include "ssf3/cli_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ssf3/frechet.hpp"

namespace ssf3::cli {
namespace {

using json = nlohmann::json;

struct Token {
  std::string text;
  std::size_t delimiter = 0;  // index of the ':' or ',' preceding the token
};

std::vector<Token> split_arguments(const std::string& s, std::size_t colon) {
  std::vector<Token> out;
  std::size_t delim = colon;
  while (true) {
    const std::size_t next = s.find(',', delim + 1);
    const std::size_t end = next == std::string::npos ? s.size() : next;
    out.push_back(Token{s.substr(delim + 1, end - delim - 1), delim});
    if (next == std::string::npos) break;
    delim = next;
  }
  return out;
}

double parse_number(const Token& t) {
  if (t.text.empty()) throw ParseError(t.delimiter, "expected a number");
  double value = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(t.delimiter, "expected a number, got '" + t.text + "'");
  }
  return value;
}

int parse_degree(const Token& t) {
  if (t.text.empty()) throw ParseError(t.delimiter, "expected a non-negative integer");
  int value = 0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value < 0) {
    throw ParseError(t.delimiter, "expected a non-negative integer, got '" + t.text + "'");
  }
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return buf.str();
}

json number(double x) { return json(x); }

HermitianOperator load_operator(const std::string& path, const char* role) {
  if (path.empty()) throw UsageError(std::string("missing --") + role + " matrix path");
  return HermitianOperator(read_matrix_file(path));
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
  } else {
    write_text_file(c.output, text);
  }
}

std::vector<ScalarFunction> functions_or(const RunConfig& c, const char* fallback) {
  return parse_function_list(c.function.empty() ? std::string(fallback) : c.function);
}

int run_eig(const RunConfig& c, std::ostream& out) {
  const SpectralDecomposition d = spectral::eig(load_operator(c.a_path, "a"));
  std::string text;
  if (c.emit == "json") {
    json j;
    j["eigenvalues"] = json::array();
    for (Eigen::Index k = 0; k < d.dim(); ++k) j["eigenvalues"].push_back(number(d.eigenvalues(k)));
    text = j.dump() + "\n";
  } else {
    for (Eigen::Index k = 0; k < d.dim(); ++k) text += format_double(d.eigenvalues(k)) + "\n";
  }
  emit(c, text, out);
  return kOk;
}

int run_remainder(const RunConfig& c, std::ostream& out) {
  if (c.function.empty()) throw UsageError("remainder needs --function");
  const HermitianOperator a = load_operator(c.a_path, "a");
  const HermitianOperator v = load_operator(c.v_path, "v");
  std::string text;
  for (const auto& phi : parse_function_list(c.function)) {
    text += format_double(frechet::remainder_trace(phi, a, v, c.order)) + "\n";
  }
  emit(c, text, out);
  return kOk;
}

int run_eta(const RunConfig& c, std::ostream& out) {
  const HermitianOperator a = load_operator(c.a_path, "a");
  const HermitianOperator v = load_operator(c.v_path, "v");
  const auto functions = functions_or(c, "monomial:3;monomial:5");
  EtaOptions opts;
  opts.grid_size = c.grid_size;
  opts.quad_order = c.quad_order;
  opts.tol = c.tol;
  const EtaDensity eta = ssf::eta_density(a, v, opts);
  const std::string report = eta_report_json(a, v, eta, functions);
  if (c.emit == "json") {
    json doc;
    doc["lambda"] = eta.grid;
    doc["eta"] = eta.values;
    doc["report"] = json::parse(report);
    emit(c, doc.dump() + "\n", out);
  } else {
    emit(c, eta_csv(eta), out);
  }
  if (!c.report.empty()) write_text_file(c.report, report);
  return kOk;
}

int run_check(const RunConfig& c, std::ostream& out) {
  const HermitianOperator a = load_operator(c.a_path, "a");
  const HermitianOperator v = load_operator(c.v_path, "v");
  const auto functions = functions_or(c, "monomial:3;monomial:6;gauss:0,1");
  CrossCheckOptions opts;
  opts.quad_order = c.quad_order;
  opts.tol = c.tol;
  opts.fourier_tol = std::max(c.tol, 1e-5);
  const CrossCheckReport report = oracle::cross_check_report(a, v, functions, opts, c.seed);
  emit(c, cross_check_json(report), out);
  return report.failures == 0 ? kOk : kToleranceFailure;
}

int run_gen(const RunConfig& c) {
  if (c.a_path.empty() || c.v_path.empty()) throw UsageError("gen needs --a and --v output paths");
  const RandomInstance inst = oracle::random_instance(c.seed, c.n, c.v_norm);
  write_text_file(c.a_path, matrix_to_json(inst.a.matrix()));
  write_text_file(c.v_path, matrix_to_json(inst.v.matrix()));
  return kOk;
}

}  // namespace

void RunConfig::validate() const {
  if (grid_size < 2) throw UsageError("grid-size must be >= 2");
  if (quad_order < 2) throw UsageError("quad-order must be >= 2");
  if (!(tol > 0.0)) throw UsageError("tol must be > 0");
  if (order < 1 || order > 3) throw UsageError("order must be 1, 2 or 3");
  if (n < 1) throw UsageError("n must be >= 1");
  if (!(v_norm >= 0.0)) throw UsageError("v-norm must be >= 0");
  if (emit != "csv" && emit != "json") throw UsageError("emit must be csv or json");
}

ScalarFunction parse_function_spec(const std::string& s) {
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos) throw ParseError(s.size(), "expected ':' after function kind");
  const std::string kind = s.substr(0, colon);
  const auto args = split_arguments(s, colon);
  if (kind == "poly") {
    std::vector<double> coeffs;
    for (const auto& t : args) coeffs.push_back(parse_number(t));
    return ScalarFunction::polynomial(std::move(coeffs));
  }
  if (kind == "gauss") {
    if (args.size() != 2) {
      const std::size_t at = args.size() > 2 ? args[2].delimiter : s.size();
      throw ParseError(at, "expected exactly two arguments 'center,width'");
    }
    const double center = parse_number(args[0]);
    const double width = parse_number(args[1]);
    if (!(width > 0.0)) throw ParseError(args[1].delimiter, "expected a positive width");
    return ScalarFunction::gaussian(center, width);
  }
  if (kind == "monomial") {
    if (args.size() != 1) throw ParseError(args[1].delimiter, "expected a single degree");
    return ScalarFunction::monomial(parse_degree(args[0]));
  }
  throw ParseError(0, "expected one of 'poly', 'gauss', 'monomial'");
}

std::vector<ScalarFunction> parse_function_list(const std::string& s) {
  std::vector<ScalarFunction> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = std::min(s.find(';', start), s.size());
    try {
      out.push_back(parse_function_spec(s.substr(start, end - start)));
    } catch (const ParseError& e) {
      // Re-anchor the position to the full list string.
      const std::string what = e.what();
      const std::size_t colon = what.find(": ");
      throw ParseError(start + e.position(),
                       colon == std::string::npos ? what : what.substr(colon + 2));
    }
    start = end + 1;
  }
  return out;
}

Matrix parse_matrix_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, "malformed matrix JSON");
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("re")) {
    throw ParseError(0, "matrix JSON needs an object with 'n' and 're'");
  }
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
    throw ParseError(0, "'n' must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(j["n"].get<long long>());
  auto read_part = [&](const char* key) {
    RealMatrix part = RealMatrix::Zero(n, n);
    if (!j.contains(key)) return part;
    const json& rows = j[key];
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
      throw ParseError(0, std::string("'") + key + "' must be an array of n rows");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw ParseError(0, std::string("'") + key + "' row " + std::to_string(i) +
                                " must hold n numbers");
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        const json& x = row[static_cast<std::size_t>(k)];
        if (!x.is_number()) {
          throw ParseError(0, std::string("'") + key + "' entries must be numbers");
        }
        part(i, k) = x.get<double>();
      }
    }
    return part;
  };
  const RealMatrix re = read_part("re");
  const RealMatrix im = read_part("im");
  Matrix m(n, n);
  m.real() = re;
  m.imag() = im;
  return m;
}

std::string matrix_to_json(const Matrix& m) {
  json j;
  j["n"] = m.rows();
  j["re"] = json::array();
  j["im"] = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      re.push_back(m(i, k).real());
      im.push_back(m(i, k).imag());
    }
    j["re"].push_back(std::move(re));
    j["im"].push_back(std::move(im));
  }
  return j.dump() + "\n";
}

std::string resolve_input_path(const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.is_absolute() || fs::exists(p)) return path;
  if (const char* dir = std::getenv(kConfigDirEnv)) {
    const fs::path candidate = fs::path(dir) / p;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

Matrix read_matrix_file(const std::string& path) {
  return parse_matrix_json(read_file(resolve_input_path(path)));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string eta_csv(const EtaDensity& eta) {
  std::string out = "lambda,eta\n";
  for (std::size_t i = 0; i < eta.grid.size(); ++i) {
    out += format_double(eta.grid[i]);
    out += ',';
    out += format_double(eta.values[i]);
    out += '\n';
  }
  return out;
}

std::string eta_report_json(const HermitianOperator& a, const HermitianOperator& v,
                            const EtaDensity& eta, const std::vector<ScalarFunction>& functions) {
  json j;
  j["support"] = {{"a", eta.support.a}, {"b", eta.support.b}};
  j["moment0"] = ssf::eta_moment(eta, 0);
  j["trV3_over_6"] = eta.metadata.trace_v3 / 6.0;
  const double l1 = ssf::l1_norm(eta);
  const double hs = eta.metadata.v_hs_norm;
  j["l1_norm"] = l1;
  j["l1_bound"] = eta.support.length() * hs * hs;
  j["quad_order"] = eta.metadata.quad_order;
  j["grid_size"] = eta.metadata.grid_size;
  j["hs_norm"] = hs;
  // Sharper total-variation bound, recorded as an observation only.
  j["nu3_observation"] = {{"bound", hs * hs * hs / 6.0}, {"within", l1 <= hs * hs * hs / 6.0}};
  j["convergence"] = {{"converged", eta.convergence.converged},
                      {"value", eta.convergence.value},
                      {"refined_value", eta.convergence.refined_value},
                      {"tol", eta.convergence.tolerance}};
  j["residuals"] = json::array();
  for (const auto& phi : functions) {
    const TraceFormulaResidual r = ssf::trace_formula_residual(a, v, phi, eta);
    j["residuals"].push_back(
        {{"function", phi.describe()}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual}});
  }
  return j.dump(2) + "\n";
}

std::string cross_check_json(const CrossCheckReport& report) {
  json j;
  j["seed"] = report.seed;
  j["n"] = report.n;
  j["instances"] = json::array();
  for (const auto& inst : report.instances) {
    j["instances"].push_back({{"id", inst.id},
                              {"routes", inst.routes},
                              {"values", inst.values},
                              {"residual_matrix", inst.residual_matrix},
                              {"errors", inst.errors},
                              {"pass", inst.pass}});
  }
  j["summary"] = {{"max_residual", report.max_residual}, {"failures", report.failures}};
  return j.dump(2) + "\n";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    if (config.command == "eig") return run_eig(config, out);
    if (config.command == "remainder") return run_remainder(config, out);
    if (config.command == "eta") return run_eta(config, out);
    if (config.command == "check") return run_check(config, out);
    if (config.command == "gen") return run_gen(config);
    throw UsageError("unknown command '" + config.command + "'");
  } catch (const ParseError& e) {
    err << "ssf3: " << e.what() << "\n";
    return kIoOrParse;
  } catch (const IoError& e) {
    err << "ssf3: " << e.what() << "\n";
    return kIoOrParse;
  } catch (const UsageError& e) {
    err << "ssf3: " << e.what() << "\n";
    return kIoOrParse;
  } catch (const Error& e) {
    err << "ssf3: " << e.what() << "\n";
    return kPrecondition;
  }
}

}  // namespace ssf3::cli
