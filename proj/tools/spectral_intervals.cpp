// spectral-intervals: spectra, unitary groups and spectrality checks for
// self-adjoint extensions of d/dx on finite unions of intervals.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spi/commands.hpp"

namespace {

struct Shared {
  std::string problem;
  std::vector<double> window;
  double grid_step = 0.0;
  double tol = 0.0;
  std::string format = "json";
  std::string out;
};

void add_shared(CLI::App* cmd, Shared& s, spi::CommandOptions& opt) {
  cmd->add_option("problem", s.problem, "Problem file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--window", s.window, "Spectral window LO HI")->expected(2);
  cmd->add_option("--grid-step", s.grid_step, "Scan grid step")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", s.tol, "Tolerance for identities and structure checks")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seed, "Seed for randomized trials");
  cmd->add_option("--jobs", opt.jobs, "Worker threads for the spectrum scan")->check(CLI::PositiveNumber);
  cmd->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", s.out, "Write output to PATH instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra and unitary groups of self-adjoint extensions on unions of intervals"};
  app.require_subcommand(1);
  app.footer(spi::csv_columns_help() +
             "\nExit codes: 0 ok, 1 invalid input, 2 numerical failure, 3 path guard exceeded.\n"
             "SPECTRAL_INTERVALS_MAX_PATHS overrides the path cap (default 1000000).");

  Shared shared;
  spi::CommandOptions opt;

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of D_B in a window");
  add_shared(spectrum, shared, opt);

  auto* evolve = app.add_subcommand("evolve", "Apply U(t) to a function");
  add_shared(evolve, shared, opt);
  evolve->add_option("--t", opt.t, "Time")->required();
  evolve->add_option("--function", opt.function, "bump | eigen:K | atoms:<json>");

  auto* verify = app.add_subcommand("verify", "Spectrality checks and group identities");
  add_shared(verify, shared, opt);
  verify->add_option("--trials", opt.trials, "Local translation trials");
  verify->add_option("--probes", opt.probes, "Path-sum and group-law probes");

  auto* classify = app.add_subcommand("classify", "Matrix structure and lattice statements");
  add_shared(classify, shared, opt);

  auto* paths = app.add_subcommand("paths", "Admissible paths for (x, t)");
  add_shared(paths, shared, opt);
  paths->add_option("--x", opt.x, "Start point")->required();
  paths->add_option("--t", opt.t, "Time")->required();

  auto* congruence = app.add_subcommand("congruence", "Tiling and translation congruence modulo a");
  add_shared(congruence, shared, opt);
  double modulus = 0.0;
  congruence->add_option("--modulus", modulus, "Lattice spacing a (default: total length)")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  if (shared.window.size() == 2) opt.window = spi::Window{shared.window[0], shared.window[1]};
  if (shared.grid_step > 0.0) opt.grid_step = shared.grid_step;
  if (shared.tol > 0.0) opt.tol = shared.tol;
  if (modulus > 0.0) opt.modulus = modulus;

  spi::CommandResult result;
  try {
    result = spi::run_command(name, spi::load_problem(shared.problem), opt);
  } catch (const spi::Error& e) {
    std::cerr << e.what() << '\n';
    return spi::exit_code_for(e.code());
  }

  const std::string text = shared.format == "csv" && result.exit_code == 0 ? result.csv : result.report.dump(2) + "\n";
  if (result.exit_code != 0 && result.report.contains("error"))
    std::cerr << result.report["error"]["message"].get<std::string>() << '\n';
  if (shared.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(shared.out);
    if (!out) {
      std::cerr << "cannot write " << shared.out << '\n';
      return 1;
    }
    out << text;
  }
  return result.exit_code;
}
