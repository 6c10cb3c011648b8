#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "gfsplit/errors.hpp"

namespace {

// 0 success, 1 check failure, 2 config error, 3 solver failure
int dispatch(int (*fn)(const gfsplit::cli::Config&, const gfsplit::cli::CommonOptions&),
             const std::string& config_path, const gfsplit::cli::CommonOptions& opt) {
  try {
    const auto cfg = gfsplit::cli::Config::parse_file(config_path);
    return fn(cfg, opt);
  } catch (const gfsplit::ResolventFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const gfsplit::NewtonFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const gfsplit::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alternating-resolvent flows with built-in inequality checks"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the shared options after the subcommand too

  gfsplit::cli::CommonOptions opt;
  std::string config_path;

  auto* dir_opt =
      app.add_option("--output-dir", opt.output_dir, "Directory for output files");
  auto* seed_opt = app.add_option("--seed", opt.seed, "Probe seed (overrides config)");
  app.add_flag("--verbose", opt.verbose, "Print summaries to stdout");

  auto* run = app.add_subcommand("run", "Run the scheme and write the trajectory");
  run->add_option("config", config_path, "key = value config file")->required();

  auto* conv = app.add_subcommand("convergence", "Step-refinement error study");
  conv->add_option("config", config_path, "key = value config file")->required();

  auto* check = app.add_subcommand("check", "Verify the inequality families on a run");
  check->add_option("config", config_path, "key = value config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  opt.seed_overridden = seed_opt->count() > 0;
  opt.output_dir_overridden = dir_opt->count() > 0;

  if (run->parsed()) return dispatch(gfsplit::cli::cmd_run, config_path, opt);
  if (conv->parsed()) return dispatch(gfsplit::cli::cmd_convergence, config_path, opt);
  return dispatch(gfsplit::cli::cmd_check, config_path, opt);
}
