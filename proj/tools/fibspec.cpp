// Command-line front end: one subcommand per analysis, CSV or JSON out.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <fibspec/report_io.hpp>

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for the Fibonacci Hamiltonian"};
  app.require_subcommand(1);

  fibspec::RunConfig cfg;
  std::string out_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "Write the report to this file");
    sub->add_option("--parallelism", cfg.parallelism,
                    "Worker threads (default: FIBSPEC_THREADS, then hardware)");
    sub->add_option("--edge-tol", cfg.edge_tol, "Band edge resolution")
        ->check(CLI::PositiveNumber);
  };
  auto add_coupling = [&](CLI::App* sub) {
    sub->add_option("--V", cfg.V, "Coupling constant")->check(CLI::NonNegativeNumber);
    sub->add_option("--omega", cfg.omega, "Phase in [0,1)");
  };
  auto add_depth = [&](CLI::App* sub, const char* what) {
    sub->add_option("--depth", cfg.depth, what)->check(CLI::PositiveNumber);
  };

  CLI::App* sub;

  sub = app.add_subcommand("spectrum", "Level-n spectrum approximant");
  add_coupling(sub);
  add_depth(sub, "Approximant level n");
  add_common(sub);

  sub = app.add_subcommand("sigma", "Single trace band set sigma_k");
  add_coupling(sub);
  sub->add_option("--k", cfg.depth, "Trace index k")->check(CLI::PositiveNumber);
  add_common(sub);

  sub = app.add_subcommand("offdiag", "Off-diagonal model spectrum approximant");
  sub->add_option("--a", cfg.a, "Hopping for letter 1")->check(CLI::PositiveNumber);
  sub->add_option("--b", cfg.b, "Hopping for letter 0")->check(CLI::PositiveNumber);
  add_depth(sub, "Approximant level n");
  add_common(sub);

  sub = app.add_subcommand("thickness",
                           "Thickness, denseness and the dimension bracket");
  add_coupling(sub);
  add_depth(sub, "Approximant level n");
  add_common(sub);

  sub = app.add_subcommand("boxdim", "Box-counting dimension estimate");
  add_coupling(sub);
  add_depth(sub, "Approximant level n");
  sub->add_option("--eps-hi", cfg.eps_hi, "Largest box size")
      ->check(CLI::PositiveNumber);
  sub->add_option("--eps-lo", cfg.eps_lo, "Smallest box size")
      ->check(CLI::PositiveNumber);
  add_common(sub);

  sub = app.add_subcommand("gaps", "Bounded spectral gaps of the approximant");
  add_coupling(sub);
  add_depth(sub, "Approximant level n");
  add_common(sub);

  sub = app.add_subcommand("labels", "Gap labels from the IDS");
  add_coupling(sub);
  add_depth(sub, "Approximant level n");
  sub->add_option("--sites", cfg.n_sites, "Dirichlet system size")
      ->check(CLI::PositiveNumber);
  sub->add_option("--m-max", cfg.m_max, "Largest |label| tried")
      ->check(CLI::PositiveNumber);
  sub->add_option("--min-rel-width", cfg.min_rel_width,
                  "Skip gaps narrower than this fraction of the hull");
  add_common(sub);

  sub = app.add_subcommand("opening", "Gap width over V across couplings");
  sub->add_option("--m", cfg.m, "Gap label to track")->required();
  sub->add_option("--V-list", cfg.V_list, "Couplings, comma separated")
      ->delimiter(',');
  add_depth(sub, "Approximant level n");
  sub->add_option("--sites", cfg.n_sites, "Dirichlet system size")
      ->check(CLI::PositiveNumber);
  sub->add_option("--m-max", cfg.m_max, "Largest |label| tried")
      ->check(CLI::PositiveNumber);
  add_common(sub);

  sub = app.add_subcommand("ids", "Integrated density of states on a grid");
  add_coupling(sub);
  sub->add_option("--sites", cfg.n_sites, "Dirichlet system size")
      ->check(CLI::PositiveNumber);
  sub->add_option("--emin", cfg.e_min, "Grid start");
  sub->add_option("--emax", cfg.e_max, "Grid end");
  sub->add_option("--points", cfg.e_points, "Grid points")
      ->check(CLI::PositiveNumber);
  add_common(sub);

  sub = app.add_subcommand("sumset",
                           "Minkowski sum of two spectra with certification");
  add_coupling(sub);
  sub->add_option("--V2", cfg.V2, "Second coupling (default: same as --V)");
  add_depth(sub, "Approximant level n");
  add_common(sub);

  sub = app.add_subcommand("transport", "Closed-form transport bounds");
  add_coupling(sub);
  sub->add_option("--p", cfg.p, "Moment order (default: infinite)");
  add_common(sub);

  sub = app.add_subcommand("growth", "Power-law transfer norm check");
  add_coupling(sub);
  add_depth(sub, "Approximant level n for band midpoints");
  sub->add_option("--nmax", cfg.n_max, "Longest product length")
      ->check(CLI::PositiveNumber);
  sub->add_option("--energies", cfg.n_energies, "Band midpoints sampled")
      ->check(CLI::PositiveNumber);
  add_common(sub);

  sub = app.add_subcommand("specplot", "Band data over a coupling grid");
  sub->add_option("--vlo", cfg.v_lo, "First coupling");
  sub->add_option("--vhi", cfg.v_hi, "Last coupling");
  sub->add_option("--vsteps", cfg.v_steps, "Grid size")
      ->check(CLI::PositiveNumber);
  add_depth(sub, "Approximant level n");
  add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (const CLI::App* s : app.get_subcommands())
    cfg.command = s->get_name();

  fibspec::RunResult res = fibspec::run(cfg);
  if (!res.message.empty()) std::cerr << res.message << "\n";
  if (res.exit_code == 1 && res.payload.empty()) return 1;

  if (out_path.empty()) {
    std::cout << res.payload;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open output path: " << out_path << "\n";
      return 1;
    }
    out << res.payload;
    if (!out.good()) {
      std::cerr << "write failed: " << out_path << "\n";
      return 1;
    }
  }
  return res.exit_code;
}
