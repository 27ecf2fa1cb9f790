// gaudin-pair: batch driver for the pairing workbench.
//
//   gaudin-pair --config scheme.cfg --command spectrum --pairs 0..2 --format table

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gaudin_pair/run.hpp"

using namespace gaudin_pair;

int main(int argc, char** argv) {
  CLI::App app{"Quasispin pairing workbench: invariants, Bethe equations and exact diagonalization"};
  std::string config_path;
  std::string command;
  std::string pairs;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_newton;
  std::optional<double> tol_sep;

  app.add_option("--config", config_path, "scheme configuration file")->required();
  app.add_option("--command", command, "verify | solve | spectrum | oracle | compare");
  app.add_option("--pairs", pairs, "pair number N or range N..M");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--format", format, "csv | table");
  app.add_option("--seed", seed, "multi-start seed");
  app.add_option("--tol-newton", tol_newton, "Newton residual tolerance");
  app.add_option("--tol-sep", tol_sep, "root separation tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidConfig;
  }

  RunConfig config;
  try {
    config = load_config(config_path);
    if (!command.empty()) config.command = parse_command(command);
    if (!pairs.empty()) {
      config.pairs = parse_pair_range(pairs);
      if (config.pairs->last > config.scheme.max_pairs())
        throw ConfigError("pair range exceeds N_max = " + std::to_string(config.scheme.max_pairs()), 0, 0,
                          "pair_range");
    }
    if (!format.empty()) config.format = parse_format(format);
    if (!out_path.empty()) config.out_path = out_path;
    if (seed) config.solver.seed = *seed;
    if (tol_newton) config.solver.newton_tolerance = *tol_newton;
    if (tol_sep) config.solver.separation_tolerance = *tol_sep;
    if (config.solver.newton_tolerance <= 0.0 || config.solver.separation_tolerance <= 0.0)
      throw ConfigError("tolerances must be positive", 0, 0, "solver_parameters");
  } catch (const DomainError& err) {
    std::cerr << "invalid configuration: " << err.what() << '\n';
    return kExitInvalidConfig;
  }

  if (config.out_path.empty()) return run(config, std::cout, std::cerr);
  std::ostringstream buffer;
  const int status = run(config, buffer, std::cerr);
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) {
    std::cerr << "cannot write '" << config.out_path << "'\n";
    return kExitVerificationFailed;
  }
  file << buffer.str();
  return status;
}
