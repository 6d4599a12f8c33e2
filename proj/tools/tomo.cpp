// tomo: command-line front end for the tomography library.
//
// Exit status: 0 success, 1 an inequality check was violated, 2 bad input or
// usage, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tomo/errors.hpp"
#include "tomo/homodyne.hpp"
#include "tomo/inequalities.hpp"
#include "tomo/moments.hpp"
#include "tomo/purity.hpp"
#include "tomo/state_json.hpp"
#include "tomo/tomogram_io.hpp"
#include "tomo/tomography.hpp"

namespace {

using namespace tomo;
using nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

enum Exit : int { kOk = 0, kViolated = 1, kInput = 2, kNumerical = 3 };

// A state file or a tomogram CSV; exactly one must be given.
struct Source {
  std::string state;
  std::string tomogram;
};

void add_source(CLI::App* cmd, Source& src, const std::string& suffix, bool required = true) {
  auto* s = cmd->add_option("--state" + suffix, src.state, "state spec JSON")
                ->check(CLI::ExistingFile);
  auto* t = cmd->add_option("--tomogram" + suffix, src.tomogram, "tomogram CSV")
                ->check(CLI::ExistingFile);
  s->excludes(t);
  if (required) {
    cmd->callback([s, t, suffix] {
      if (s->count() + t->count() == 0) {
        throw CLI::RequiredError("--state" + suffix + " or --tomogram" + suffix);
      }
    });
  }
}

struct GridArgs {
  std::size_t phases = 64;
  std::size_t n_x = 256;
  double sigmas = 8.0;
};

void add_grid(CLI::App* cmd, GridArgs& g) {
  cmd->add_option("--phases", g.phases, "phase count k*pi/n")->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--nx", g.n_x, "minimum quadrature points per row")->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  cmd->add_option("--sigmas", g.sigmas, "window half-width in standard deviations")
      ->capture_default_str()->check(CLI::PositiveNumber);
}

double fold(double phase) {
  double r = std::fmod(phase, kPi);
  if (r < 0.0) r += kPi;
  if (kPi - r < 1e-12) r = 0.0;
  return r;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
          v.end());
  return v;
}

/// Tomogram for a source.  State sources are evaluated on `phases`; stored
/// tomograms are loaded as they are.
TomogramGrid load_grid(const Source& src, const std::vector<double>& phases, const GridArgs& g) {
  if (!src.tomogram.empty()) return load_tomogram(src.tomogram);
  const StateSpec st = load_state(src.state);
  return compute_tomogram(st, phases, XGrid::for_state(st, g.n_x, g.sigmas));
}

std::string source_label(const Source& src) {
  if (!src.state.empty()) return state_label(load_state(src.state));
  return "tomogram:" + std::filesystem::path(src.tomogram).filename().string();
}

/// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int report_exit(const InequalityReport& r) {
  std::cout << report_to_json(r).dump() << '\n';
  return r.satisfied ? kOk : kViolated;
}

// Config file: a JSON object whose keys are long flag names.  Values fill in
// flags missing from the command line and are appended after the subcommand
// so they bind to it.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw InputError("config must be a JSON object of flag values");

  const auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  const auto scalar = [](const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        args.push_back(flag);
        args.push_back(scalar(v));
      }
    } else if (value.is_null() || value.is_object()) {
      throw InputError("config key \"" + key + "\" must be a scalar or a list");
    } else {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  return args;
}

int run(int argc, char** argv) {
  CLI::App app{"Optical tomograms, uncertainty relations and homodyne simulation"};
  app.require_subcommand(1);
  app.add_option("--config", "JSON file of flag values (same names as the flags)");

  // state validate
  auto* state_cmd = app.add_subcommand("state", "state-spec utilities")->require_subcommand(1);
  auto* validate = state_cmd->add_subcommand("validate", "parse and normalize a state spec");
  std::string validate_path;
  validate->add_option("--state", validate_path, "state spec JSON")->required()
      ->check(CLI::ExistingFile);

  // tomogram
  auto* tomogram = app.add_subcommand("tomogram", "compute a tomogram grid and write CSV");
  Source tomogram_src;
  GridArgs tomogram_grid;
  std::string tomogram_out;
  std::optional<double> classical_variance;
  tomogram->add_option("--state", tomogram_src.state, "state spec JSON")->check(CLI::ExistingFile);
  auto* classical = tomogram->add_option(
      "--classical-variance", classical_variance,
      "Gaussian rows of this variance at every phase (not a quantum state)");
  classical->check(CLI::PositiveNumber);
  add_grid(tomogram, tomogram_grid);
  tomogram->add_option("--out", tomogram_out, "output CSV")->required();

  // check heisenberg | trifonov | purity
  auto* check = app.add_subcommand("check", "evaluate one relation")->require_subcommand(1);
  GridArgs check_grid;
  double tol = kAnalyticTolerance;
  double theta = 0.0;

  auto* heis = check->add_subcommand("heisenberg", "dispersion product at phases 0 and pi/2");
  Source heis_src;
  add_source(heis, heis_src, "");
  add_grid(heis, check_grid);
  heis->add_option("--tol", tol, "tolerance on the margin")->capture_default_str();

  auto* trif = check->add_subcommand("trifonov", "state-extended relation at one phase");
  Source trif1, trif2;
  add_source(trif, trif1, "1");
  add_source(trif, trif2, "2");
  add_grid(trif, check_grid);
  trif->add_option("--theta", theta, "phase in radians")->capture_default_str();
  trif->add_option("--tol", tol, "tolerance on the margin")->capture_default_str();

  auto* pur = check->add_subcommand("purity", "overlap integral and pure/mixed label");
  Source pur1, pur2;
  add_source(pur, pur1, "");
  add_source(pur, pur2, "2", false);
  PurityOptions pur_opts;
  double pur_tol = kPurityTolerance;
  pur->add_option("--tol", pur_tol, "|overlap - 1| accepted as pure")->capture_default_str();
  pur->add_option("--purity-phases", pur_opts.phases, "phase count for state sources")
      ->capture_default_str()->check(CLI::PositiveNumber);
  pur->add_option("--tail", pur_opts.tail, "|phi| cutoff for the radial integral")
      ->capture_default_str()->check(CLI::PositiveNumber);

  // sweep trifonov
  auto* sweep = app.add_subcommand("sweep", "minimize a relation over phases")->require_subcommand(1);
  auto* sweep_trif = sweep->add_subcommand("trifonov", "state-extended relation over all grid phases");
  Source sweep1, sweep2;
  add_source(sweep_trif, sweep1, "1");
  add_source(sweep_trif, sweep2, "2");
  add_grid(sweep_trif, check_grid);
  sweep_trif->add_option("--tol", tol, "tolerance on the margin")->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw homodyne samples");
  Source sim_src;
  GridArgs sim_grid;
  std::vector<double> sim_thetas;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::string sim_out;
  add_source(sim, sim_src, "");
  sim->add_option("--phases", sim_grid.phases, "uniform phase count (ignored with --theta)")
      ->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--theta", sim_thetas, "explicit phases in [0, pi)");
  sim->add_option("--samples", samples, "samples per phase")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "generator seed")->capture_default_str();
  sim->add_option("--out", sim_out, "dataset CSV; metadata goes to <out>.meta.json")->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "moments or relation from homodyne data");
  std::string data1, data2;
  std::string est_report = "auto";
  est->add_option("--data", data1, "dataset CSV")->required()->check(CLI::ExistingFile);
  est->add_option("--data2", data2, "second dataset CSV")->check(CLI::ExistingFile);
  est->add_option("--theta", theta, "phase in radians")->capture_default_str();
  est->add_option("--report", est_report, "moments, trifonov, or auto (trifonov with --data2)")
      ->check(CLI::IsMember({"auto", "moments", "trifonov"}))->capture_default_str();

  // plotdata
  auto* plot = app.add_subcommand("plotdata", "two-column CSV for plotting");
  std::string kind;
  Source plot1, plot2;
  GridArgs plot_grid;
  std::string plot_data, plot_out;
  std::size_t bins = 60;
  plot->add_option("--kind", kind, "tomogram-row, sweep or histogram")->required()
      ->check(CLI::IsMember({"tomogram-row", "sweep", "histogram"}));
  add_source(plot, plot1, "", false);
  add_source(plot, plot2, "2", false);
  add_grid(plot, plot_grid);
  plot->add_option("--data", plot_data, "dataset CSV for histograms")->check(CLI::ExistingFile);
  plot->add_option("--theta", theta, "phase in radians")->capture_default_str();
  plot->add_option("--bins", bins, "histogram bins")->capture_default_str()
      ->check(CLI::PositiveNumber);
  plot->add_option("--out", plot_out, "output CSV (stdout when omitted)");

  std::vector<std::string> args(argv + 1, argv + argc);
  args = expand_config(std::move(args));
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kInput;
  }

  if (*validate) {
    const StateSpec st = load_state(validate_path);
    ordered_json out;
    out["valid"] = true;
    out["label"] = state_label(st);
    out["state"] = state_to_json(st);
    std::cout << out.dump() << '\n';
    return kOk;
  }

  if (*tomogram) {
    if (tomogram_src.state.empty() == !classical_variance.has_value()) {
      throw InputError("tomogram needs exactly one of --state or --classical-variance");
    }
    const auto phases = uniform_phases(tomogram_grid.phases);
    std::optional<TomogramGrid> w;
    if (classical_variance) {
      const double v = *classical_variance;
      const double half = tomogram_grid.sigmas * std::sqrt(v) + 2.0;
      w.emplace(tomogram_from_density(phases, XGrid(-half, half, tomogram_grid.n_x),
                                      [v](double, double x) {
                                        return std::exp(-x * x / (2.0 * v)) /
                                               std::sqrt(2.0 * kPi * v);
                                      }));
    } else {
      w.emplace(load_grid(tomogram_src, phases, tomogram_grid));
    }
    save_tomogram(tomogram_out, *w);
    ordered_json out;
    out["out"] = tomogram_out;
    out["phases"] = w->phases().size();
    out["n_x"] = w->x_grid().size();
    out["x_min"] = w->x_grid().x_min();
    out["x_max"] = w->x_grid().x_max();
    std::cout << out.dump() << '\n';
    return kOk;
  }

  if (*heis) {
    const auto w = load_grid(heis_src, {0.0, kPi / 2}, check_grid);
    return report_exit(heisenberg_lhs(w, tol));
  }

  if (*trif) {
    const auto phases = sorted_unique({fold(theta), fold(theta + kPi / 2)});
    const auto w1 = load_grid(trif1, phases, check_grid);
    const auto w2 = load_grid(trif2, phases, check_grid);
    return report_exit(trifonov_lhs(w1, w2, theta, tol));
  }

  if (*pur) {
    const auto make = [](const Source& s) {
      return s.tomogram.empty() ? TomogramSource(load_state(s.state))
                                : TomogramSource(load_tomogram(s.tomogram));
    };
    const auto a = make(pur1);
    if (pur2.state.empty() && pur2.tomogram.empty()) {
      std::cout << purity_to_json(purity_classify(a, pur_tol, pur_opts)).dump() << '\n';
    } else {
      ordered_json out;
      out["overlap"] = purity_overlap(a, make(pur2), pur_opts);
      std::cout << out.dump() << '\n';
    }
    return kOk;
  }

  if (*sweep_trif) {
    const auto phases = uniform_phases(check_grid.phases);
    const auto w1 = load_grid(sweep1, phases, check_grid);
    const auto w2 = load_grid(sweep2, phases, check_grid);
    return report_exit(trifonov_sweep(w1, w2, w1.phases(), tol));
  }

  if (*sim) {
    std::vector<PhaseCount> schedule;
    std::vector<double> phases = sim_thetas;
    if (phases.empty()) {
      phases = sim_src.tomogram.empty() ? uniform_phases(sim_grid.phases)
                                        : load_tomogram(sim_src.tomogram).phases();
    }
    for (double p : phases) schedule.push_back({p, samples});
    const std::string label = source_label(sim_src);
    const HomodyneDataset ds = sim_src.tomogram.empty()
                                   ? sample(load_state(sim_src.state), schedule, seed, label)
                                   : sample(load_tomogram(sim_src.tomogram), schedule, seed, label);
    save_dataset(sim_out, ds);
    ordered_json out = dataset_metadata(ds);
    out["records"] = ds.records.size();
    out["out"] = sim_out;
    std::cout << out.dump() << '\n';
    return kOk;
  }

  if (*est) {
    const auto ds1 = load_dataset(data1);
    const bool trifonov = est_report == "trifonov" || (est_report == "auto" && !data2.empty());
    if (trifonov) {
      const auto ds2 = data2.empty() ? ds1 : load_dataset(data2);
      return report_exit(empirical_trifonov(ds1, ds2, theta));
    }
    const auto m = estimate_moments(ds1, theta);
    ordered_json out;
    out["phase"] = theta;
    out["count"] = m.count;
    out["mean"] = m.moments.mean;
    out["mean_stderr"] = m.mean_stderr;
    out["variance"] = m.moments.variance;
    out["variance_stderr"] = m.variance_stderr;
    std::cout << out.dump() << '\n';
    return kOk;
  }

  if (*plot) {
    std::string csv;
    if (kind == "tomogram-row") {
      if (plot1.state.empty() && plot1.tomogram.empty()) {
        throw InputError("tomogram-row needs --state or --tomogram");
      }
      const auto w = load_grid(plot1, {fold(theta)}, plot_grid);
      const auto [index, mirror] = w.resolve_phase(theta);
      const auto row = w.row(index);
      const XGrid& g = w.x_grid();
      csv = "x,w\n";
      for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t j = mirror ? g.size() - 1 - i : i;
        csv += fmt(mirror ? -g.at(j) : g.at(i)) + "," + fmt(row[j]) + "\n";
      }
    } else if (kind == "sweep") {
      if (plot1.state.empty() && plot1.tomogram.empty()) {
        throw InputError("sweep plot needs --state/--tomogram and --state2/--tomogram2");
      }
      const Source& second = plot2.state.empty() && plot2.tomogram.empty() ? plot1 : plot2;
      const auto phases = uniform_phases(plot_grid.phases);
      const auto w1 = load_grid(plot1, phases, plot_grid);
      const auto w2 = load_grid(second, phases, plot_grid);
      csv = "theta,lhs\n";
      for (double p : w1.phases()) csv += fmt(p) + "," + fmt(trifonov_lhs(w1, w2, p).lhs) + "\n";
    } else {
      if (plot_data.empty()) throw InputError("histogram needs --data");
      const auto ds = load_dataset(plot_data);
      const auto m = estimate_moments(ds, theta);
      std::vector<double> xs;
      for (const auto& r : ds.records) {
        if (std::abs(r.phase - m.moments.phase) <= 1e-9) xs.push_back(r.x);
      }
      const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
      const double lo = *lo_it;
      const double width = std::max(*hi_it - lo, 1e-12) / static_cast<double>(bins);
      std::vector<double> counts(bins, 0.0);
      for (double x : xs) {
        const auto b = std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
        counts[b] += 1.0;
      }
      csv = "x,density\n";
      for (std::size_t b = 0; b < bins; ++b) {
        csv += fmt(lo + (static_cast<double>(b) + 0.5) * width) + "," +
               fmt(counts[b] / (static_cast<double>(xs.size()) * width)) + "\n";
      }
    }
    emit(plot_out, csv);
    return kOk;
  }
  return kInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const tomo::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const tomo::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
