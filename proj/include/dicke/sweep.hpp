#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dicke/observables.hpp"
#include "dicke/params.hpp"

namespace dicke {

enum class Method { MeanField, ProjectedEven, ProjectedOdd, Exact };
enum class OutputFormat { Csv, Json };

struct SweepConfig {
  double omega_a = 1.0;
  std::vector<int> n_atoms;
  std::vector<double> gamma;  // strictly increasing, all >= 0
  std::vector<Method> methods;
  std::optional<int> nu_max;  // empty = auto (converged per N at the top of the grid)
  int k_states = 2;
  std::string out_path;
  OutputFormat format = OutputFormat::Csv;
  double energy_tol = 1e-8;  // cutoff convergence tolerance
  bool overwrite = false;
  int threads = 0;  // 0 = DICKE_THREADS env var or hardware concurrency

  bool has_method(Method m) const;
  void validate() const;
};

// Parse a JSON config file with a versioned `schema: 1` field.  Throws
// ConfigError on any malformed input.
SweepConfig parse_config_file(const std::string& path);
SweepConfig parse_config_text(const std::string& text);

// One method cell: either observables or a machine-readable reason why not.
struct MethodCell {
  std::optional<ObservableSet> obs;
  std::string reason;  // "domain: gamma <= gamma_c", "numerical: ..."
};

struct ExactExtras {
  double gap = 0.0;
  int ground_parity = 0;
  int nu_max_used = 0;
  bool converged = true;
};

struct SweepRecord {
  int n_atoms = 0;
  double omega_a = 0.0;
  double gamma = 0.0;
  double gamma_c = 0.0;
  MethodCell mean_field;
  MethodCell projected_even;
  MethodCell projected_odd;
  MethodCell exact;
  std::optional<ExactExtras> extras;
};

// Run the sweep (N outer, gamma inner, parallel over points) and write the
// output file atomically.  Per-point domain or numerical failures land in
// the record's reason codes; the run continues.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

// Records only; no file output.
std::vector<SweepRecord> compute_sweep(const SweepConfig& config);

// Serialize records with the fixed column schema.
std::string records_to_csv(const std::vector<SweepRecord>& records,
                           const SweepConfig& config);
std::string records_to_json(const std::vector<SweepRecord>& records,
                            const SweepConfig& config);

enum class Figure { Fig1, Fig2 };

struct FigureOptions {
  std::string out_dir;
  bool overwrite = false;
  int threads = 0;
  // reproduction defaults; tests shrink them
  double gamma_start = 0.0;
  double gamma_stop = 1.1;
  int gamma_count = 111;
  std::vector<int> n_atoms = {10, 20, 30, 50};
  double energy_tol = 1e-8;
};

// Emit per-N exact curves and the analytic projected-even curve (N -> inf
// convention) as one CSV per curve plus a manifest JSON with parameters and
// checksums.  Fig1: (Delta q)^2/N; Fig2: (Delta Jx)^2/N^2.
void reproduce_figure(Figure which, const FigureOptions& opts);

// Analytic curve value used by the figures, per the N -> infinity
// convention: 0 below gamma_c (normal-phase value over N), 2 gamma^2 (1-x)
// resp. (1-x)/4 above.
double figure_analytic_value(Figure which, double omega_a, double gamma);

// Per-point exact-vs-analytic deltas for every observable field plus a
// per-N max-delta summary.  Writes <out>/compare.csv and
// <out>/compare_summary.csv; requires the exact method plus at least one
// analytic method in the config.
void compare_report(const SweepConfig& config);

// Shared helpers.
std::string format_double(double v);  // shortest round-trip decimal
std::vector<double> linspace(double start, double stop, int count);
int resolve_threads(int requested);
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace dicke
