#include "dicke/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "dicke/errors.hpp"
#include "dicke/exact.hpp"
#include "dicke/mean_field.hpp"
#include "dicke/projected.hpp"

namespace dicke {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// helpers

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize -0
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw NumericalError("format_double: to_chars failed");
  return std::string(buf, ptr);
}

std::vector<double> linspace(double start, double stop, int count) {
  std::vector<double> v;
  v.reserve(count);
  if (count == 1) {
    v.push_back(start);
    return v;
  }
  const double step = (stop - start) / (count - 1);
  for (int i = 0; i < count; ++i) v.push_back(start + i * step);
  return v;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DICKE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(run);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out.flush()) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("rename failed: " + target.string() + ": " + ec.message());
}

void require_writable(const std::string& path, bool overwrite) {
  if (!overwrite && fs::exists(path))
    throw IoError("output exists (pass --overwrite to replace): " + path);
}

bool all_finite(const ObservableSet& o) {
  for (double v : {o.energy, o.n_photons, o.n_excited, o.jz, o.q2, o.p2, o.var_q, o.var_p,
                   o.jx2, o.jy2, o.xi_x2, o.xi_y2})
    if (!std::isfinite(v)) return false;
  return true;
}

constexpr const char* kDomainReason = "domain: gamma <= gamma_c";

// observable fields in output order
const std::vector<std::pair<std::string, double ObservableSet::*>>& field_table() {
  static const std::vector<std::pair<std::string, double ObservableSet::*>> t = {
      {"energy", &ObservableSet::energy}, {"n_photons", &ObservableSet::n_photons},
      {"n_excited", &ObservableSet::n_excited}, {"jz", &ObservableSet::jz},
      {"q2", &ObservableSet::q2},         {"p2", &ObservableSet::p2},
      {"var_q", &ObservableSet::var_q},   {"var_p", &ObservableSet::var_p},
      {"jx2", &ObservableSet::jx2},       {"jy2", &ObservableSet::jy2},
      {"xi_x2", &ObservableSet::xi_x2},   {"xi_y2", &ObservableSet::xi_y2},
  };
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// config

bool SweepConfig::has_method(Method m) const {
  for (Method x : methods)
    if (x == m) return true;
  return false;
}

void SweepConfig::validate() const {
  if (!(omega_a >= 0.0)) throw ConfigError("config: omega_a must be >= 0");
  if (n_atoms.empty()) throw ConfigError("config: n_atoms list is empty");
  for (int n : n_atoms)
    if (n < 1) throw ConfigError("config: n_atoms entries must be >= 1");
  if (gamma.empty()) throw ConfigError("config: gamma grid is empty");
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (!(gamma[i] >= 0.0)) throw ConfigError("config: gamma values must be >= 0");
    if (i > 0 && !(gamma[i] > gamma[i - 1]))
      throw ConfigError("config: gamma grid must be strictly increasing");
  }
  if (methods.empty()) throw ConfigError("config: at least one method required");
  if (k_states < 1) throw ConfigError("config: k_states must be >= 1");
  if (nu_max && *nu_max < 0) throw ConfigError("config: nu_max must be >= 0");
  if (out_path.empty()) throw ConfigError("config: output.path required");
}

namespace {

Method method_from_string(const std::string& s) {
  if (s == "mean_field") return Method::MeanField;
  if (s == "projected_even") return Method::ProjectedEven;
  if (s == "projected_odd") return Method::ProjectedOdd;
  if (s == "exact") return Method::Exact;
  throw ConfigError("config: unknown method '" + s + "'");
}

}  // namespace

SweepConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  try {
    if (!root.contains("schema") || root["schema"].get<int>() != 1)
      throw ConfigError("config: missing or unsupported schema (expected 1)");

    SweepConfig c;
    c.omega_a = root.at("omega_a").get<double>();

    const json& n = root.at("n_atoms");
    if (n.is_array())
      c.n_atoms = n.get<std::vector<int>>();
    else
      c.n_atoms = {n.get<int>()};

    const json& g = root.at("gamma");
    if (g.is_array()) {
      c.gamma = g.get<std::vector<double>>();
    } else if (g.is_object()) {
      const int count = g.at("count").get<int>();
      if (count < 1) throw ConfigError("config: gamma.count must be >= 1");
      c.gamma = linspace(g.at("start").get<double>(), g.at("stop").get<double>(), count);
    } else {
      throw ConfigError("config: gamma must be a list or {start, stop, count}");
    }

    for (const json& m : root.at("methods"))
      c.methods.push_back(method_from_string(m.get<std::string>()));

    if (root.contains("nu_max")) {
      const json& nm = root["nu_max"];
      if (nm.is_number_integer())
        c.nu_max = nm.get<int>();
      else if (!(nm.is_string() && nm.get<std::string>() == "auto"))
        throw ConfigError("config: nu_max must be an integer or \"auto\"");
    }
    if (root.contains("k_states")) c.k_states = root["k_states"].get<int>();
    if (root.contains("energy_tol")) c.energy_tol = root["energy_tol"].get<double>();

    const json& out = root.at("output");
    c.out_path = out.at("path").get<std::string>();
    if (out.contains("format")) {
      const std::string f = out["format"].get<std::string>();
      if (f == "csv")
        c.format = OutputFormat::Csv;
      else if (f == "json")
        c.format = OutputFormat::Json;
      else
        throw ConfigError("config: output.format must be csv or json");
    }

    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

SweepConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// sweep

namespace {

MethodCell projected_cell(const ModelParams& params, Parity parity) {
  MethodCell cell;
  if (!params.superradiant()) {
    cell.reason = kDomainReason;
    return cell;
  }
  try {
    cell.obs = projected_observables(params, parity);
    if (!all_finite(*cell.obs)) {
      cell.obs.reset();
      cell.reason = "numerical: non-finite value";
    }
  } catch (const std::exception& e) {
    cell.reason = std::string("numerical: ") + e.what();
  }
  return cell;
}

// The sweep solves hundreds of points for the lowest one or two states; the
// dense path is reserved for small blocks and the Lanczos path takes over
// well below the module-level 5000 threshold.
SolverOptions sweep_solver_options() {
  SolverOptions opts;
  opts.dense_threshold = 800;
  return opts;
}

}  // namespace

std::vector<SweepRecord> compute_sweep(const SweepConfig& config) {
  config.validate();
  const bool want_exact = config.has_method(Method::Exact);
  const int threads = resolve_threads(config.threads);

  // photon cutoff per N: fixed value, or converged once at the top of the
  // grid (cutoff requirements grow with gamma; nesting makes larger cutoffs
  // valid for every smaller gamma)
  std::map<int, int> cutoff_by_n;
  std::map<int, bool> cutoff_converged;
  if (want_exact) {
    std::vector<int> ns = config.n_atoms;
    parallel_for(ns.size(), threads, [&](std::size_t i) {
      const int n = ns[i];
      int cut;
      bool ok = true;
      if (config.nu_max) {
        cut = *config.nu_max;
      } else {
        ModelParams top{n, config.omega_a, config.gamma.back()};
        try {
          cut = converge_cutoff(top, config.energy_tol, std::nullopt,
                                sweep_solver_options());
        } catch (const NumericalError&) {
          cut = static_cast<int>(
              std::ceil(4.0 * n * top.gamma * top.gamma + 30.0));
          ok = false;
        }
      }
      static std::mutex m;
      std::lock_guard<std::mutex> lock(m);
      cutoff_by_n[n] = cut;
      cutoff_converged[n] = ok;
    });
  }

  std::vector<std::pair<int, double>> points;
  for (int n : config.n_atoms)
    for (double g : config.gamma) points.emplace_back(n, g);

  std::vector<SweepRecord> records(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    const auto [n, gamma] = points[i];
    const ModelParams params{n, config.omega_a, gamma};
    SweepRecord& rec = records[i];
    rec.n_atoms = n;
    rec.omega_a = config.omega_a;
    rec.gamma = gamma;
    rec.gamma_c = params.gamma_c();

    if (config.has_method(Method::MeanField)) {
      rec.mean_field.obs = mean_field_observables(params);
      if (!all_finite(*rec.mean_field.obs)) {
        rec.mean_field.obs.reset();
        rec.mean_field.reason = "numerical: non-finite value";
      }
    }
    if (config.has_method(Method::ProjectedEven))
      rec.projected_even = projected_cell(params, Parity::Even);
    if (config.has_method(Method::ProjectedOdd))
      rec.projected_odd = projected_cell(params, Parity::Odd);

    if (want_exact) {
      const int cut = cutoff_by_n.at(n);
      ExactExtras extras;
      extras.nu_max_used = cut;
      extras.converged = cutoff_converged.at(n);
      try {
        const int k = std::max(2, config.k_states);
        const EigenResult r =
            lowest_states(params, cut, k, std::nullopt, sweep_solver_options());
        extras.converged = extras.converged && r.converged;
        const Basis basis = build_basis(params, cut);
        rec.exact.obs = expectation_set(r.vectors[0], basis);
        extras.gap = r.energies.size() > 1 ? r.energies[1] - r.energies[0] : 0.0;
        extras.ground_parity = r.parities[0] > 0 ? +1 : -1;
        if (!all_finite(*rec.exact.obs)) {
          rec.exact.obs.reset();
          rec.exact.reason = "numerical: non-finite value";
        } else if (!extras.converged) {
          rec.exact.reason = "unconverged";
        }
      } catch (const std::exception& e) {
        rec.exact.reason = std::string("numerical: ") + e.what();
        extras.converged = false;
      }
      rec.extras = extras;
    }
  });

  return records;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

constexpr const char* kCsvHeader =
    "n_atoms,omega_a,gamma,gamma_c,method,parity,energy,energy_per_atom,n_photons,"
    "n_excited,jz,q2,p2,var_q,var_p,jx2,jy2,xi_x2,xi_y2,gap,ground_parity,nu_max_used,"
    "converged,reason";

void append_csv_row(std::string& out, const SweepRecord& rec, const char* method,
                    const char* parity, const MethodCell& cell,
                    const ExactExtras* extras) {
  out += std::to_string(rec.n_atoms);
  out += ',';
  out += format_double(rec.omega_a);
  out += ',';
  out += format_double(rec.gamma);
  out += ',';
  out += format_double(rec.gamma_c);
  out += ',';
  out += method;
  out += ',';
  out += parity;
  if (cell.obs) {
    const ObservableSet& o = *cell.obs;
    out += ',';
    out += format_double(o.energy);
    out += ',';
    out += format_double(o.energy / rec.n_atoms);
    for (const auto& [name, member] : field_table()) {
      if (name == "energy") continue;
      out += ',';
      out += format_double(o.*member);
    }
  } else {
    for (int i = 0; i < 13; ++i) out += ',';  // energy .. xi_y2 empty
  }
  if (extras) {
    out += ',';
    out += format_double(extras->gap);
    out += ',';
    out += std::to_string(extras->ground_parity);
    out += ',';
    out += std::to_string(extras->nu_max_used);
    out += ',';
    out += extras->converged ? "true" : "false";
  } else {
    out += ",,,,";
  }
  out += ',';
  out += cell.reason;
  out += '\n';
}

json cell_to_json(const MethodCell& cell) {
  json c;
  if (cell.obs) {
    const ObservableSet& o = *cell.obs;
    for (const auto& [name, member] : field_table()) c[name] = o.*member;
    c["first_moments_zero"] = o.first_moments_zero;
  } else {
    c = nullptr;
  }
  return c;
}

}  // namespace

std::string records_to_csv(const std::vector<SweepRecord>& records,
                           const SweepConfig& config) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const SweepRecord& rec : records) {
    if (config.has_method(Method::MeanField))
      append_csv_row(out, rec, "mean_field", "", rec.mean_field, nullptr);
    if (config.has_method(Method::ProjectedEven))
      append_csv_row(out, rec, "projected", "even", rec.projected_even, nullptr);
    if (config.has_method(Method::ProjectedOdd))
      append_csv_row(out, rec, "projected", "odd", rec.projected_odd, nullptr);
    if (config.has_method(Method::Exact))
      append_csv_row(out, rec, "exact", "", rec.exact,
                     rec.extras ? &*rec.extras : nullptr);
  }
  return out;
}

std::string records_to_json(const std::vector<SweepRecord>& records,
                            const SweepConfig& config) {
  ordered_json root;
  root["schema"] = 1;
  root["records"] = ordered_json::array();
  for (const SweepRecord& rec : records) {
    ordered_json r;
    r["n_atoms"] = rec.n_atoms;
    r["omega_a"] = rec.omega_a;
    r["gamma"] = rec.gamma;
    r["gamma_c"] = rec.gamma_c;
    auto put = [&](const char* key, const MethodCell& cell, bool enabled) {
      if (!enabled) return;
      r[key] = cell_to_json(cell);
      if (!cell.reason.empty()) r[std::string(key) + "_reason"] = cell.reason;
    };
    put("mean_field", rec.mean_field, config.has_method(Method::MeanField));
    put("projected_even", rec.projected_even, config.has_method(Method::ProjectedEven));
    put("projected_odd", rec.projected_odd, config.has_method(Method::ProjectedOdd));
    put("exact", rec.exact, config.has_method(Method::Exact));
    if (rec.extras) {
      r["gap"] = rec.extras->gap;
      r["ground_parity"] = rec.extras->ground_parity;
      r["nu_max_used"] = rec.extras->nu_max_used;
      r["converged"] = rec.extras->converged;
    }
    root["records"].push_back(std::move(r));
  }
  return root.dump(2) + "\n";
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  config.validate();
  require_writable(config.out_path, config.overwrite);
  std::vector<SweepRecord> records = compute_sweep(config);
  const std::string content = config.format == OutputFormat::Csv
                                  ? records_to_csv(records, config)
                                  : records_to_json(records, config);
  write_file_atomic(config.out_path, content);
  return records;
}

// ---------------------------------------------------------------------------
// figures

double figure_analytic_value(Figure which, double omega_a, double gamma) {
  const double gamma_c = 0.5 * std::sqrt(omega_a);
  if (gamma <= gamma_c) return 0.0;  // normal-phase value over N -> 0
  const double one_minus_x = -std::expm1(4.0 * std::log(gamma_c / gamma));
  return which == Figure::Fig1 ? 2.0 * gamma * gamma * one_minus_x : 0.25 * one_minus_x;
}

void reproduce_figure(Figure which, const FigureOptions& opts) {
  if (opts.out_dir.empty()) throw ConfigError("figure: output directory required");
  const std::vector<double> grid = linspace(opts.gamma_start, opts.gamma_stop,
                                            opts.gamma_count);
  const double omega_a = 1.0;
  const char* figure_name = which == Figure::Fig1 ? "fig1" : "fig2";

  const fs::path dir(opts.out_dir);
  // fail on existing outputs before any heavy work
  require_writable((dir / "analytic.csv").string(), opts.overwrite);
  require_writable((dir / "manifest.json").string(), opts.overwrite);
  for (int n : opts.n_atoms)
    require_writable((dir / ("exact_N" + std::to_string(n) + ".csv")).string(),
                     opts.overwrite);

  std::vector<std::pair<std::string, std::string>> files;  // name -> content

  // analytic curve, N -> infinity convention
  {
    std::string csv = "gamma,value\n";
    for (double g : grid) {
      csv += format_double(g);
      csv += ',';
      csv += format_double(figure_analytic_value(which, omega_a, g));
      csv += '\n';
    }
    files.emplace_back("analytic.csv", std::move(csv));
  }

  const int threads = resolve_threads(opts.threads);
  std::vector<int> cutoffs(opts.n_atoms.size());
  parallel_for(opts.n_atoms.size(), threads, [&](std::size_t i) {
    ModelParams top{opts.n_atoms[i], omega_a, grid.back()};
    cutoffs[i] = converge_cutoff(top, opts.energy_tol, std::nullopt,
                                 sweep_solver_options());
  });

  for (std::size_t ni = 0; ni < opts.n_atoms.size(); ++ni) {
    const int n = opts.n_atoms[ni];
    const int cut = cutoffs[ni];
    std::vector<double> values(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t gi) {
      const ModelParams params{n, omega_a, grid[gi]};
      const EigenResult r = lowest_states(params, cut, 1, std::nullopt,
                                          sweep_solver_options());
      const Basis basis = build_basis(params, cut);
      const ObservableSet o = expectation_set(r.vectors[0], basis);
      values[gi] = which == Figure::Fig1 ? o.var_q / n : o.jx2 / (double(n) * n);
    });
    std::string csv = "gamma,value\n";
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      csv += format_double(grid[gi]);
      csv += ',';
      csv += format_double(values[gi]);
      csv += '\n';
    }
    files.emplace_back("exact_N" + std::to_string(n) + ".csv", std::move(csv));
  }

  ordered_json manifest;
  manifest["schema"] = 1;
  manifest["figure"] = figure_name;
  manifest["quantity"] =
      which == Figure::Fig1 ? "(Delta q)^2 / N" : "(Delta Jx)^2 / N^2";
  manifest["omega_a"] = omega_a;
  manifest["gamma_grid"] = {{"start", opts.gamma_start},
                            {"stop", opts.gamma_stop},
                            {"count", opts.gamma_count}};
  manifest["n_atoms"] = opts.n_atoms;
  manifest["analytic_convention"] =
      "N->infinity closed form: F = 0, (N-1)/N -> 1; below gamma_c the "
      "normal-phase symmetric values ((Delta q)^2 = 1/2, (Delta Jx)^2 = j/2) "
      "divided by the plot normalization, i.e. 0 in this convention";
  manifest["files"] = ordered_json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    ordered_json f;
    f["path"] = files[i].first;
    if (i > 0) {
      f["n_atoms"] = opts.n_atoms[i - 1];
      f["nu_max"] = cutoffs[i - 1];
    }
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(files[i].second)));
    f["fnv1a64"] = hex;
    manifest["files"].push_back(std::move(f));
  }

  for (const auto& [name, content] : files)
    write_file_atomic((dir / name).string(), content);
  write_file_atomic((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// comparison report

void compare_report(const SweepConfig& config) {
  config.validate();
  if (!config.has_method(Method::Exact))
    throw ConfigError("compare: the exact method must be selected");
  if (!(config.has_method(Method::MeanField) || config.has_method(Method::ProjectedEven) ||
        config.has_method(Method::ProjectedOdd)))
    throw ConfigError("compare: at least one analytic method must be selected");

  const fs::path dir(config.out_path);
  require_writable((dir / "compare.csv").string(), config.overwrite);
  require_writable((dir / "compare_summary.csv").string(), config.overwrite);

  const std::vector<SweepRecord> records = compute_sweep(config);

  struct Key {
    int n;
    std::string method, parity, field;
    bool operator<(const Key& o) const {
      return std::tie(n, method, parity, field) <
             std::tie(o.n, o.method, o.parity, o.field);
    }
  };
  std::map<Key, std::pair<double, double>> summary;  // max abs, max rel

  std::string csv =
      "n_atoms,omega_a,gamma,method,parity,field,exact,analytic,abs_delta,rel_delta\n";
  for (const SweepRecord& rec : records) {
    if (!rec.exact.obs) continue;
    const ObservableSet& ex = *rec.exact.obs;
    auto emit = [&](const char* method, const char* parity, const MethodCell& cell) {
      if (!cell.obs) return;
      for (const auto& [name, member] : field_table()) {
        const double a = ex.*member;
        const double b = (*cell.obs).*member;
        const double abs_delta = std::abs(a - b);
        const double scale = std::max(std::abs(a), std::abs(b));
        const double rel_delta = scale > 0.0 ? abs_delta / scale : 0.0;
        csv += std::to_string(rec.n_atoms);
        csv += ',';
        csv += format_double(rec.omega_a);
        csv += ',';
        csv += format_double(rec.gamma);
        csv += ',';
        csv += method;
        csv += ',';
        csv += parity;
        csv += ',';
        csv += name;
        csv += ',';
        csv += format_double(a);
        csv += ',';
        csv += format_double(b);
        csv += ',';
        csv += format_double(abs_delta);
        csv += ',';
        csv += format_double(rel_delta);
        csv += '\n';
        auto& s = summary[Key{rec.n_atoms, method, parity, name}];
        s.first = std::max(s.first, abs_delta);
        s.second = std::max(s.second, rel_delta);
      }
    };
    if (config.has_method(Method::MeanField)) emit("mean_field", "", rec.mean_field);
    if (config.has_method(Method::ProjectedEven))
      emit("projected", "even", rec.projected_even);
    if (config.has_method(Method::ProjectedOdd))
      emit("projected", "odd", rec.projected_odd);
  }

  std::string sum_csv = "n_atoms,method,parity,field,max_abs_delta,max_rel_delta\n";
  for (const auto& [key, v] : summary) {
    sum_csv += std::to_string(key.n);
    sum_csv += ',';
    sum_csv += key.method;
    sum_csv += ',';
    sum_csv += key.parity;
    sum_csv += ',';
    sum_csv += key.field;
    sum_csv += ',';
    sum_csv += format_double(v.first);
    sum_csv += ',';
    sum_csv += format_double(v.second);
    sum_csv += '\n';
  }

  write_file_atomic((dir / "compare.csv").string(), csv);
  write_file_atomic((dir / "compare_summary.csv").string(), sum_csv);
}

}  // namespace dicke
