#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tomo/inequalities.hpp"
#include "tomo/states.hpp"
#include "tomo/tomography.hpp"

namespace tomo {

/// Generator recorded in dataset metadata.  Each scheduled phase i draws from
/// its own std::mt19937_64 seeded with splitmix64(seed + (i + 1) * golden);
/// uniforms take the top 53 bits; quadratures come from inverse-CDF on the
/// tabulated tomogram row with a piecewise-linear density.
inline constexpr const char* kGeneratorName =
    "mt19937_64+splitmix64-substreams;u53;inverse-cdf-piecewise-linear";

struct HomodyneRecord {
  double phase;
  double x;
  bool operator==(const HomodyneRecord&) const = default;
};

struct PhaseCount {
  double phase;
  std::size_t count;
};

struct HomodyneDataset {
  std::vector<HomodyneRecord> records;
  std::uint64_t seed = 0;
  std::string state_label;
  std::string generator = kGeneratorName;
  bool operator==(const HomodyneDataset&) const = default;
};

/// Inverse-CDF sampler over a tabulated density on a uniform grid.  The
/// density is treated as piecewise linear, so the CDF is piecewise quadratic
/// and inverted exactly within each cell.
class InverseCdfSampler {
 public:
  InverseCdfSampler(const XGrid& grid, std::span<const double> density);
  /// Quadrature value with CDF equal to u in [0, 1).
  double operator()(double u) const;
  double cdf(double x) const;

 private:
  XGrid grid_;
  std::vector<double> density_;
  std::vector<double> cumulative_;
};

struct SamplingOptions {
  std::size_t table_points = 4097;
};

HomodyneDataset sample(const StateSpec& state, std::span<const PhaseCount> schedule,
                       std::uint64_t seed, std::string state_label = "",
                       const SamplingOptions& opts = {});

/// Samples the stored rows of a tomogram; every scheduled phase must be on
/// the grid.  Useful for densities that do not come from a wave function.
HomodyneDataset sample(const TomogramGrid& w, std::span<const PhaseCount> schedule,
                       std::uint64_t seed, std::string state_label = "");

struct EmpiricalMoments {
  MomentSet moments;
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
  std::size_t count = 0;
};

inline constexpr std::size_t kMinimumRecords = 30;

/// Sample mean, unbiased variance and their standard errors at `phase`
/// (phases in [pi, 2 pi) use mirrored records).
EmpiricalMoments estimate_moments(const HomodyneDataset& ds, double phase);

/// State-extended relation from two datasets with first-order propagated
/// standard error; satisfied iff lhs >= 1/4 - 3 stderr.
InequalityReport empirical_trifonov(const HomodyneDataset& ds1, const HomodyneDataset& ds2,
                                    double phase);

void write_dataset_csv(std::ostream& out, const HomodyneDataset& ds);
HomodyneDataset read_dataset_csv(std::istream& in);
nlohmann::ordered_json dataset_metadata(const HomodyneDataset& ds);

/// Writes `path` (CSV) and `path` + ".meta.json".
void save_dataset(const std::filesystem::path& path, const HomodyneDataset& ds);
/// Reads the CSV and, when present, its metadata sidecar.
HomodyneDataset load_dataset(const std::filesystem::path& path);

std::filesystem::path metadata_path(const std::filesystem::path& csv_path);

}  // namespace tomo
