#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kerr/kerr.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Kerr-medium fractional revival simulator"};
  app.require_subcommand(1);

  kerr::RunOptions opt;
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--n-max", opt.n_max, "Force the Fock truncation (0 = automatic)")->check(CLI::NonNegativeNumber);
  app.add_option("--grid-points", opt.grid_points, "Time samples per series (0 = 2001)")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto* figure = app.add_subcommand("figure", "Regenerate the data behind one figure");
  std::string figure_name;
  figure->add_option("name", figure_name, "fig1 .. fig11")->required()->check(CLI::IsMember(kerr::figure_names()));

  auto* validate = app.add_subcommand("validate", "Run the cross-module invariant suite");

  auto* custom = app.add_subcommand("custom", "Run an experiment described by a JSON config");
  std::string config_path;
  custom->add_option("config", config_path, "Path to the config file")->required();

  CLI11_PARSE(app, argc, argv);
  opt.out_dir = out_dir;

  try {
    if (*figure) {
      kerr::run_figure(figure_name, opt, std::cout);
      return 0;
    }
    if (*validate) {
      kerr::ValidationOptions vopt;
      vopt.n_max = opt.n_max;
      vopt.threads = opt.threads;
      const auto report = kerr::run_validation(kerr::KerrEvolver{}, vopt);
      kerr::print_report(std::cout, report);
      const bool ok = report.all_passed();
      std::cout << (ok ? "all checks passed\n" : "validation FAILED\n");
      return ok ? 0 : 1;
    }
    if (*custom) {
      const auto cfg = kerr::load_config(config_path);
      kerr::run_custom(cfg, opt, std::cout);
      return 0;
    }
  } catch (const kerr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
