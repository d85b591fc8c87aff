// dicke: ground-state laboratory for the single-mode Dicke model.
//
// Subcommands
//   critical  --omega-a <x> [--gamma <y>] [--n <N>]   critical coupling / point
//   converge  --n <N> --omega-a <x> --gamma <y>       photon-cutoff search
//   sweep     <config.json>                           multi-method gamma sweep
//   figure    {fig1|fig2} --out <dir>                 fluctuation-scaling curves
//   compare   <config.json>                           exact vs analytic deltas
//
// Exit codes: 0 success, 1 config error, 2 numerical failure, 3 I/O error.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "dicke/errors.hpp"
#include "dicke/exact.hpp"
#include "dicke/kernels/ham_stencil.hpp"
#include "dicke/mean_field.hpp"
#include "dicke/projected.hpp"
#include "dicke/sweep.hpp"

namespace {

using namespace dicke;

void print_critical(double omega_a, std::optional<double> gamma, int n_atoms) {
  ModelParams probe{n_atoms, omega_a, gamma.value_or(0.0)};
  probe.validate();
  std::cout << "gamma_c = " << format_double(probe.gamma_c()) << "\n";
  if (!gamma) return;

  const CriticalPointResult cp = critical_point(probe);
  std::cout << "phase = " << (cp.phase == Phase::Normal ? "normal" : "superradiant")
            << "\n";
  std::cout << "q_c = " << format_double(cp.point.q) << "\n";
  std::cout << "p_c = " << format_double(cp.point.p) << "\n";
  std::cout << "theta_c = " << format_double(cp.point.theta) << "\n";
  std::cout << "phi_c = " << format_double(cp.point.phi) << "\n";
  std::cout << "energy_per_atom = " << format_double(cp.energy_per_atom) << "\n";
  if (cp.phase == Phase::Superradiant)
    std::cout << "note: q_c <= 0 representative reported; (q, phi) -> (-q, phi+pi) "
                 "gives the degenerate partner\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Dicke model ground-state laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand too

  int threads = 0;
  bool overwrite = false;
  std::string format;
  app.add_option("--threads", threads, "worker threads (default: DICKE_THREADS or all cores)");
  app.add_flag("--overwrite", overwrite, "replace existing output files");
  app.add_option("--format", format, "output format override: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // critical
  auto* c_cmd = app.add_subcommand("critical", "critical coupling and mean-field point");
  double c_omega = 1.0;
  std::optional<double> c_gamma;
  int c_n = 1;
  c_cmd->add_option("--omega-a", c_omega, "atomic splitting")->required();
  c_cmd->add_option("--gamma", c_gamma, "coupling (adds phase and critical point)");
  c_cmd->add_option("--n", c_n, "atom number for the q_c scale (default 1)");

  // converge
  auto* v_cmd = app.add_subcommand("converge", "photon cutoff for converged exact results");
  int v_n = 1;
  double v_omega = 1.0, v_gamma = 0.0, v_tol = 1e-8;
  v_cmd->add_option("--n", v_n, "atom number")->required();
  v_cmd->add_option("--omega-a", v_omega, "atomic splitting")->required();
  v_cmd->add_option("--gamma", v_gamma, "coupling")->required();
  v_cmd->add_option("--tol", v_tol, "ground-energy tolerance (default 1e-8)");

  // sweep
  auto* s_cmd = app.add_subcommand("sweep", "run a gamma sweep from a JSON config");
  std::string s_config;
  s_cmd->add_option("config", s_config, "config file")->required();

  // figure
  auto* f_cmd = app.add_subcommand("figure", "reproduce the fluctuation-scaling data");
  std::string f_which, f_out;
  f_cmd->add_option("which", f_which, "fig1 or fig2")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2"}));
  f_cmd->add_option("--out", f_out, "output directory")->required();

  // compare
  auto* m_cmd = app.add_subcommand("compare", "exact vs analytic comparison report");
  std::string m_config;
  m_cmd->add_option("config", m_config, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*c_cmd) {
      print_critical(c_omega, c_gamma, c_n);
    } else if (*v_cmd) {
      const ModelParams params{v_n, v_omega, v_gamma};
      const int cut = converge_cutoff(params, v_tol);
      std::cout << "nu_max = " << cut << "\n";
    } else if (*s_cmd) {
      SweepConfig config = parse_config_file(s_config);
      config.threads = threads;
      config.overwrite = overwrite;
      if (format == "csv") config.format = OutputFormat::Csv;
      if (format == "json") config.format = OutputFormat::Json;
      const auto records = run_sweep(config);
      std::cerr << "wrote " << records.size() << " records ("
                << config.n_atoms.size() << " N values x " << config.gamma.size()
                << " gamma points) to " << config.out_path << " [kernel: "
                << kernels::selected_kernel_name() << "]\n";
    } else if (*f_cmd) {
      FigureOptions opts;
      opts.out_dir = f_out;
      opts.overwrite = overwrite;
      opts.threads = threads;
      reproduce_figure(f_which == "fig1" ? Figure::Fig1 : Figure::Fig2, opts);
      std::cerr << "wrote " << f_which << " curves to " << f_out << "\n";
    } else if (*m_cmd) {
      SweepConfig config = parse_config_file(m_config);
      config.threads = threads;
      config.overwrite = overwrite;
      compare_report(config);
      std::cerr << "wrote compare.csv and compare_summary.csv under "
                << config.out_path << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // our parallelism is across sweep points; keep the BLAS single threaded
  // unless the user says otherwise
  setenv("OPENBLAS_NUM_THREADS", "1", 0);
  return run(argc, argv);
}
