#include "tomo/homodyne.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "tomo/errors.hpp"
#include "tomo/parallel.hpp"
#include "tomo/quadrature.hpp"

namespace tomo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPhaseMatch = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, std::size_t index) {
  return std::mt19937_64(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1)));
}

double uniform53(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void validate_schedule(std::span<const PhaseCount> schedule) {
  if (schedule.empty()) throw InputError("phase schedule is empty");
  for (const auto& pc : schedule) {
    if (!std::isfinite(pc.phase) || pc.phase < 0.0 || pc.phase >= kPi) {
      throw InputError("scheduled phase " + std::to_string(pc.phase) + " outside [0, pi)");
    }
    if (pc.count < 1) throw InputError("scheduled sample count must be at least 1");
  }
}

template <typename TableFn>
HomodyneDataset draw(std::span<const PhaseCount> schedule, std::uint64_t seed,
                     std::string label, const TableFn& table_for) {
  validate_schedule(schedule);
  std::vector<std::vector<double>> draws(schedule.size());
  parallel_for(schedule.size(), [&](std::size_t i) {
    const InverseCdfSampler sampler = table_for(schedule[i].phase);
    auto gen = substream(seed, i);
    auto& out = draws[i];
    out.resize(schedule[i].count);
    for (double& x : out) x = sampler(uniform53(gen));
  });

  HomodyneDataset ds;
  ds.seed = seed;
  ds.state_label = std::move(label);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    for (double x : draws[i]) ds.records.push_back({schedule[i].phase, x});
  }
  return ds;
}

std::vector<double> records_at(const HomodyneDataset& ds, double phase) {
  if (!std::isfinite(phase)) throw InputError("phase must be finite");
  double reduced = std::fmod(phase, 2.0 * kPi);
  if (reduced < 0.0) reduced += 2.0 * kPi;
  bool mirror = false;
  if (reduced >= kPi - kPhaseMatch) {
    reduced -= kPi;
    mirror = true;
  }
  std::vector<double> xs;
  for (const auto& r : ds.records) {
    if (std::abs(r.phase - reduced) <= kPhaseMatch) xs.push_back(mirror ? -r.x : r.x);
  }
  return xs;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line) + ": bad number \"" + std::string(s) + "\"");
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

InverseCdfSampler::InverseCdfSampler(const XGrid& grid, std::span<const double> density)
    : grid_(grid), density_(density.begin(), density.end()) {
  if (density_.size() != grid_.size()) throw InputError("density length does not match grid");
  cumulative_.assign(density_.size(), 0.0);
  const double h = grid_.step();
  for (std::size_t i = 0; i < density_.size(); ++i) {
    if (!std::isfinite(density_[i]) || density_[i] < 0.0) {
      throw InputError("sampling density must be finite and non-negative");
    }
    if (i > 0) cumulative_[i] = cumulative_[i - 1] + 0.5 * h * (density_[i - 1] + density_[i]);
  }
  const double total = cumulative_.back();
  if (!(total > 0.0)) throw InputError("sampling density has zero mass");
  for (double& c : cumulative_) c /= total;
  for (double& d : density_) d /= total;
}

double InverseCdfSampler::operator()(double u) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.begin()) return grid_.x_min();
  if (it == cumulative_.end()) return grid_.x_max();
  const auto i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  const double h = grid_.step();
  const double f0 = density_[i];
  const double f1 = density_[i + 1];
  const double c = u - cumulative_[i];
  // Solve f0 t + (f1 - f0) t^2 / (2h) = c for t in [0, h].
  const double a = (f1 - f0) / (2.0 * h);
  const double disc = std::sqrt(std::max(0.0, f0 * f0 + 4.0 * a * c));
  double t;
  if (f0 + disc > 0.0) {
    t = 2.0 * c / (f0 + disc);
  } else {
    const double mass = cumulative_[i + 1] - cumulative_[i];
    t = mass > 0.0 ? h * c / mass : 0.0;
  }
  return grid_.at(i) + std::clamp(t, 0.0, h);
}

double InverseCdfSampler::cdf(double x) const {
  if (x <= grid_.x_min()) return 0.0;
  if (x >= grid_.x_max()) return 1.0;
  const double h = grid_.step();
  const auto i = std::min(static_cast<std::size_t>((x - grid_.x_min()) / h), grid_.size() - 2);
  const double t = x - grid_.at(i);
  const double f0 = density_[i];
  const double f1 = density_[i + 1];
  return cumulative_[i] + f0 * t + (f1 - f0) * t * t / (2.0 * h);
}

HomodyneDataset sample(const StateSpec& state, std::span<const PhaseCount> schedule,
                       std::uint64_t seed, std::string state_label,
                       const SamplingOptions& opts) {
  const XGrid table = XGrid::for_state(state, opts.table_points);
  const auto points = table.points();
  return draw(schedule, seed, std::move(state_label), [&](double phase) {
    std::vector<double> row;
    if (const auto* pure = std::get_if<PureState>(&state)) {
      row = optical_tomogram(*pure, phase, table);
    } else {
      row.assign(table.size(), 0.0);
      for (const auto& c : std::get<MixedState>(state).components()) {
        const auto part = optical_tomogram(c.state, phase, table);
        for (std::size_t i = 0; i < row.size(); ++i) row[i] += c.weight * part[i];
      }
    }
    return InverseCdfSampler(table, row);
  });
}

HomodyneDataset sample(const TomogramGrid& w, std::span<const PhaseCount> schedule,
                       std::uint64_t seed, std::string state_label) {
  return draw(schedule, seed, std::move(state_label), [&](double phase) {
    const auto index = w.find_phase(phase);
    if (!index) throw InputError("phase " + std::to_string(phase) + " is not on the tomogram grid");
    return InverseCdfSampler(w.x_grid(), w.row(*index));
  });
}

EmpiricalMoments estimate_moments(const HomodyneDataset& ds, double phase) {
  const std::vector<double> xs = records_at(ds, phase);
  const std::size_t n = xs.size();
  if (n < kMinimumRecords) {
    throw InputError("need at least " + std::to_string(kMinimumRecords) +
                     " records at phase " + std::to_string(phase) + ", found " +
                     std::to_string(n));
  }
  const double nd = static_cast<double>(n);
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / nd;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const double var = m2 / (nd - 1.0);
  m4 /= nd;

  EmpiricalMoments em;
  em.moments = {mean, var, phase};
  em.count = n;
  em.mean_stderr = std::sqrt(var / nd);
  // Var(s^2) = (mu4 - (n-3)/(n-1) sigma^4) / n
  em.variance_stderr = std::sqrt(std::max(0.0, (m4 - (nd - 3.0) / (nd - 1.0) * var * var) / nd));
  return em;
}

InequalityReport empirical_trifonov(const HomodyneDataset& ds1, const HomodyneDataset& ds2,
                                    double phase) {
  const double shifted = phase + kPi / 2;
  const EmpiricalMoments a = estimate_moments(ds1, phase);
  const EmpiricalMoments as = estimate_moments(ds1, shifted);
  const EmpiricalMoments b = estimate_moments(ds2, phase);
  const EmpiricalMoments bs = estimate_moments(ds2, shifted);
  const double v1 = a.moments.variance, v1s = as.moments.variance;
  const double v2 = b.moments.variance, v2s = bs.moments.variance;
  const double lhs = state_extended_product(v1, v2s, v2, v1s);

  double var_lhs;
  if (&ds1 == &ds2 || ds1 == ds2) {
    // One dataset: lhs = v v_s, the two estimates enter twice.
    var_lhs = std::pow(v1s * a.variance_stderr, 2) + std::pow(v1 * as.variance_stderr, 2);
  } else {
    var_lhs = std::pow(0.5 * v2s * a.variance_stderr, 2) +
              std::pow(0.5 * v1 * bs.variance_stderr, 2) +
              std::pow(0.5 * v1s * b.variance_stderr, 2) +
              std::pow(0.5 * v2 * as.variance_stderr, 2);
  }
  return make_empirical_report(InequalityKind::trifonov, phase, lhs, std::sqrt(var_lhs));
}

// ---------------------------------------------------------------------------

void write_dataset_csv(std::ostream& out, const HomodyneDataset& ds) {
  out << "theta,x\n";
  for (const auto& r : ds.records) out << format_double(r.phase) << ',' << format_double(r.x) << '\n';
}

HomodyneDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "theta,x") {
    throw InputError("dataset CSV must start with header \"theta,x\"");
  }
  HomodyneDataset ds;
  ds.generator.clear();
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw InputError("line " + std::to_string(lineno) + ": expected two columns");
    }
    const double th = parse_double(std::string_view(line).substr(0, comma), lineno);
    const double x = parse_double(std::string_view(line).substr(comma + 1), lineno);
    if (th < 0.0 || th >= kPi) {
      throw InputError("line " + std::to_string(lineno) + ": phase outside [0, pi)");
    }
    ds.records.push_back({th, x});
  }
  return ds;
}

nlohmann::ordered_json dataset_metadata(const HomodyneDataset& ds) {
  nlohmann::ordered_json j;
  j["seed"] = ds.seed;
  j["state_label"] = ds.state_label;
  j["generator"] = ds.generator;
  return j;
}

std::filesystem::path metadata_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".meta.json");
}

void save_dataset(const std::filesystem::path& path, const HomodyneDataset& ds) {
  {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    write_dataset_csv(out, ds);
  }
  std::ofstream meta(metadata_path(path));
  if (!meta) throw InputError("cannot write " + metadata_path(path).string());
  meta << dataset_metadata(ds).dump(2) << '\n';
}

HomodyneDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset " + path.string());
  HomodyneDataset ds = read_dataset_csv(in);
  std::ifstream meta(metadata_path(path));
  if (meta) {
    try {
      nlohmann::json j;
      meta >> j;
      ds.seed = j.at("seed").get<std::uint64_t>();
      ds.state_label = j.at("state_label").get<std::string>();
      ds.generator = j.at("generator").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw InputError("malformed dataset metadata: " + std::string(e.what()));
    }
  }
  return ds;
}

}  // namespace tomo
