#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "tomo/errors.hpp"
#include "tomo/homodyne.hpp"

using namespace tomo;
using std::numbers::pi;

namespace {

std::vector<PhaseCount> schedule(std::initializer_list<double> phases, std::size_t n) {
  std::vector<PhaseCount> s;
  for (double p : phases) s.push_back({p, n});
  return s;
}

}  // namespace

TEST_CASE("inverse-CDF sampler inverts its own CDF") {
  const XGrid grid(-6.0, 6.0, 241);
  std::vector<double> dens(grid.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = oracle::gaussian_density(grid.at(i), 0.3, 0.7);
  const InverseCdfSampler s(grid, dens);
  for (double u : {1e-9, 0.01, 0.3, 0.5, 0.77, 0.999999}) {
    CHECK(std::abs(s.cdf(s(u)) - u) < 1e-12);
  }
  CHECK(s(0.0) == grid.x_min());
  CHECK(std::abs(s(0.5) - 0.3) < 1e-3);
  CHECK_THROWS_AS(InverseCdfSampler(grid, std::vector<double>(241, 0.0)), InputError);
  CHECK_THROWS_AS(InverseCdfSampler(grid, std::vector<double>(10, 1.0)), InputError);
}

TEST_CASE("tabulated CDF error is below 1e-4 for the default table") {
  const StateSpec st = PureState::gaussian(0.5, -0.2, 0.1);
  const auto grid = XGrid::for_state(st, SamplingOptions{}.table_points);
  const auto row = optical_tomogram(st, 0.0, grid.points());
  const InverseCdfSampler s(grid, row);
  for (double x : {-0.5, 0.2, 0.5, 0.8, 1.5}) {
    const double exact = 0.5 * std::erfc(-(x - 0.5) / std::sqrt(2.0 * 0.05));
    CHECK(std::abs(s.cdf(x) - exact) < 1e-4);
  }
}

TEST_CASE("vacuum samples reproduce the analytic variance") {
  const auto ds = sample(StateSpec{PureState::vacuum()}, schedule({0.0}, 100000), 7, "vacuum");
  CHECK(ds.records.size() == 100000);
  const auto m = estimate_moments(ds, 0.0);
  CHECK(m.count == 100000);
  CHECK(std::abs(m.moments.variance - 0.5) < 3 * m.variance_stderr);
  CHECK(std::abs(m.moments.mean) < 3 * m.mean_stderr);
  CHECK(m.variance_stderr == doctest::Approx(0.5 * std::sqrt(2.0 / 1e5)).epsilon(0.05));

  const auto sq = sample(StateSpec{PureState::gaussian(0, 0, 2)}, schedule({0.0}, 100000), 8);
  const auto ms = estimate_moments(sq, 0.0);
  CHECK(std::abs(ms.moments.variance - 1.0) < 3 * ms.variance_stderr);
}

TEST_CASE("Fock-1 samples avoid the node at the origin") {
  const auto ds = sample(StateSpec{PureState::number(1)}, schedule({1.0}, 100000), 3);
  const double half_bin = 0.01;
  std::size_t near = 0;
  for (const auto& r : ds.records) near += std::abs(r.x) < half_bin;
  // Expected mass in the bin is about 2 h^3 / (3 sqrt(pi)) * 2, i.e. ~1.5e-6.
  CHECK(near <= 2);
}

TEST_CASE("sampling is deterministic and seed-dependent") {
  const StateSpec st = PureState::fock({cplx(0.6, 0.1), cplx(0.0, 0.5), cplx(0.3, 0.0)});
  const auto sched = schedule({0.0, pi / 2, 2.0}, 500);
  const auto a = sample(st, sched, 42, "x");
  const auto b = sample(st, sched, 42, "x");
  CHECK(a == b);
  CHECK_FALSE(a.records == sample(st, sched, 43, "x").records);
  CHECK(a.generator == kGeneratorName);
  // The first phase's stream does not depend on the rest of the schedule.
  const auto prefix = sample(st, schedule({0.0}, 500), 42, "x");
  CHECK(std::equal(prefix.records.begin(), prefix.records.end(), a.records.begin()));
}

TEST_CASE("sampling from a stored grid") {
  const auto w = tomogram_from_density(uniform_phases(2), XGrid(-3.0, 3.0, 601),
                                       [](double, double x) { return oracle::gaussian_density(x, 0, 0.1); });
  const auto ds = sample(w, schedule({0.0, pi / 2}, 20000), 5, "classical");
  const auto r = empirical_trifonov(ds, ds, 0.0);
  CHECK_FALSE(r.satisfied);
  CHECK(std::abs(r.lhs - 0.01) < 3e-3);
  CHECK_THROWS_AS(sample(w, schedule({0.3}, 10), 5), InputError);
}

TEST_CASE("estimation preconditions") {
  const auto ds = sample(StateSpec{PureState::vacuum()}, schedule({0.0}, 29), 1);
  try {
    (void)estimate_moments(ds, 0.0);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("found 29") != std::string::npos);
  }
  const auto ok = sample(StateSpec{PureState::vacuum()}, schedule({0.0}, 30), 1);
  CHECK_NOTHROW(estimate_moments(ok, 0.0));
  CHECK_THROWS_AS(empirical_trifonov(ok, ok, 0.0), InputError);
  CHECK_THROWS_AS(sample(StateSpec{PureState::vacuum()}, schedule({0.0}, 0), 1), InputError);
  CHECK_THROWS_AS(sample(StateSpec{PureState::vacuum()}, schedule({pi}, 5), 1), InputError);
  CHECK_THROWS_AS(sample(StateSpec{PureState::vacuum()}, {}, 1), InputError);
}

TEST_CASE("parity rule on datasets") {
  const auto ds = sample(StateSpec{PureState::gaussian(1.0, 0.0, 1.0)}, schedule({0.0}, 1000), 2);
  const auto a = estimate_moments(ds, 0.0);
  const auto b = estimate_moments(ds, pi);
  CHECK(a.moments.mean == doctest::Approx(-b.moments.mean));
  CHECK(a.moments.variance == doctest::Approx(b.moments.variance));
}

TEST_CASE("empirical state-extended relation") {
  const auto sched = schedule({0.0, pi / 2}, 100000);
  const auto v1 = sample(StateSpec{PureState::vacuum()}, sched, 11);
  const auto v2 = sample(StateSpec{PureState::vacuum()}, sched, 12);
  const auto rv = empirical_trifonov(v1, v2, 0.0);
  CHECK(std::abs(rv.lhs - 0.25) < 3 * rv.std_error.value());
  CHECK(rv.satisfied);

  const auto s2 = sample(StateSpec{PureState::gaussian(0, 0, 2)}, sched, 13);
  const auto sh = sample(StateSpec{PureState::gaussian(0, 0, 0.5)}, sched, 14);
  const auto r = empirical_trifonov(s2, sh, 0.0);
  CHECK(std::abs(r.lhs - 0.53125) < 3 * r.std_error.value());
  CHECK(r.satisfied);
  CHECK(report_to_json(r)["stderr"].is_number());
  // pi/2 pairs with pi, which resolves to the mirrored phase-0 records.
  CHECK_NOTHROW(empirical_trifonov(s2, sh, pi / 2));
}

TEST_CASE("dataset CSV and metadata round trip") {
  const auto ds = sample(StateSpec{PureState::number(2)}, schedule({0.0, 1.0}, 200), 99, "fock[2]");
  std::stringstream ss;
  write_dataset_csv(ss, ds);
  CHECK(ss.str().rfind("theta,x\n", 0) == 0);
  const auto back = read_dataset_csv(ss);
  CHECK(back.records == ds.records);

  const auto dir = std::filesystem::temp_directory_path() / "tomo_homodyne_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "data.csv";
  save_dataset(path, ds);
  CHECK(std::filesystem::exists(metadata_path(path)));
  CHECK(load_dataset(path) == ds);
  const auto meta = nlohmann::json::parse(std::ifstream(metadata_path(path)));
  CHECK(meta["seed"] == 99);
  CHECK(meta["state_label"] == "fock[2]");
  CHECK(meta["generator"] == kGeneratorName);
  std::filesystem::remove_all(dir);

  for (const char* bad : {"theta\n", "theta,x\n0,abc\n", "theta,x\n4,0\n", "theta,x\n0,1,2\n"}) {
    std::stringstream b(bad);
    CHECK_THROWS_AS(read_dataset_csv(b), InputError);
  }
}

TEST_CASE("variance estimator is unbiased at N = 1000") {
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto ds = sample(StateSpec{PureState::vacuum()}, schedule({0.0}, 1000), seed);
    sum += estimate_moments(ds, 0.0).moments.variance;
  }
  CHECK(std::abs(sum / 100.0 - 0.5) < 1e-2);
}
