#include <iostream>

#include <CLI11.hpp>

#include "ssf3/cli_io.hpp"

namespace {

void add_common(CLI::App* cmd, ssf3::cli::RunConfig& c) {
  cmd->add_option("-o,--output", c.output, "Output file (default: standard output)");
  cmd->add_option("--emit", c.emit, "Output format: csv or json")->capture_default_str();
}

void add_pair(CLI::App* cmd, ssf3::cli::RunConfig& c) {
  cmd->add_option("--a", c.a_path, "Matrix JSON for A")->required();
  cmd->add_option("--v", c.v_path, "Matrix JSON for V")->required();
}

}  // namespace

int main(int argc, char** argv) {
  ssf3::cli::RunConfig c;
  CLI::App app{"Third-order spectral shift toolkit"};
  app.require_subcommand(1);

  auto* eig = app.add_subcommand("eig", "Print the spectrum of a Hermitian matrix");
  eig->add_option("--a", c.a_path, "Matrix JSON")->required();
  add_common(eig, c);

  auto* rem = app.add_subcommand("remainder", "Trace of the Taylor remainder");
  add_pair(rem, c);
  rem->add_option("--function", c.function, "Function spec(s), ';'-separated")->required();
  rem->add_option("--order", c.order, "Remainder order 1, 2 or 3")->capture_default_str();
  add_common(rem, c);

  auto* eta = app.add_subcommand("eta", "Spectral shift density as CSV plus JSON report");
  add_pair(eta, c);
  eta->add_option("--grid-size", c.grid_size)->capture_default_str();
  eta->add_option("--quad-order", c.quad_order)->capture_default_str();
  eta->add_option("--tol", c.tol)->capture_default_str();
  eta->add_option("--function", c.function, "Functions for the trace-formula residuals");
  eta->add_option("--report", c.report, "Write the JSON report here");
  add_common(eta, c);

  auto* check = app.add_subcommand("check", "Cross-route agreement report");
  add_pair(check, c);
  check->add_option("--function", c.function, "Function corpus, ';'-separated");
  check->add_option("--quad-order", c.quad_order)->capture_default_str();
  check->add_option("--tol", c.tol)->capture_default_str();
  check->add_option("--seed", c.seed, "Seed recorded in the report");
  add_common(check, c);

  auto* gen = app.add_subcommand("gen", "Write a seeded random (A, V) pair");
  gen->add_option("--a", c.a_path, "Destination for A")->required();
  gen->add_option("--v", c.v_path, "Destination for V")->required();
  gen->add_option("--seed", c.seed)->capture_default_str();
  gen->add_option("--n", c.n)->capture_default_str();
  gen->add_option("--v-norm", c.v_norm, "Hilbert-Schmidt norm of V")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ssf3::cli::kIoOrParse;
  }
  c.command = app.get_subcommands().front()->get_name();
  return ssf3::cli::run(c, std::cout, std::cerr);
}
