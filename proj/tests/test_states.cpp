#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tomo/errors.hpp"
#include "tomo/states.hpp"

using namespace tomo;
using std::numbers::pi;

namespace {
const double kQuarterPi = std::pow(pi, -0.25);
}

TEST_CASE("position wave function examples") {
  CHECK(std::abs(eval_position_wavefunction(PureState::vacuum(), 0.0) - kQuarterPi) < 1e-15);
  CHECK(std::abs(eval_position_wavefunction(PureState::number(1), 0.0)) < 1e-15);
  const auto displaced = PureState::gaussian(1.0, 0.0, 1.0);
  CHECK(std::abs(eval_position_wavefunction(displaced, 1.0) - kQuarterPi) < 1e-15);
  CHECK(kQuarterPi == doctest::Approx(0.7511255).epsilon(1e-7));
  CHECK_THROWS_AS(eval_position_wavefunction(PureState::vacuum(), NAN), InputError);
}

TEST_CASE("momentum wave function examples") {
  CHECK(std::abs(eval_momentum_wavefunction(PureState::vacuum(), 0.0) - kQuarterPi) < 1e-15);
  const auto two = PureState::number(2);
  for (double p : {-1.5, 0.0, 0.7, 2.0}) {
    CHECK(std::abs(eval_momentum_wavefunction(two, p) + oracle::hermite_function(2, p)) < 1e-13);
  }
  const auto kicked = PureState::gaussian(0.0, 2.0, 1.0);
  CHECK(std::abs(std::abs(eval_momentum_wavefunction(kicked, 2.0)) - kQuarterPi) < 1e-15);
}

TEST_CASE("momentum wave function matches brute-force Fourier quadrature") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 12; ++trial) {
    const auto st = oracle::random_state(gen);
    const auto psi = [&](double y) { return st.wavefunction(y); };
    const double center = st.as_gaussian() ? st.as_gaussian()->mean_q : 0.0;
    for (double p : {-2.0, -0.3, 0.0, 1.1, 2.5}) {
      CHECK(std::abs(st.momentum_wavefunction(p) - oracle::fourier_brute(psi, p, center, 40.0, 32001)) <
            1e-10);
    }
  }
}

TEST_CASE("Hermite functions match explicit polynomials and stay finite at cutoff 64") {
  std::vector<double> out(21);
  for (double y : {-3.0, -0.4, 0.0, 1.3, 4.0}) {
    hermite_functions(y, out);
    for (int n = 0; n <= 20; ++n) {
      CHECK(out[static_cast<std::size_t>(n)] ==
            doctest::Approx(oracle::hermite_function(n, y)).epsilon(1e-11).scale(1e-12));
    }
  }
  std::vector<double> big(65);
  hermite_functions(10.0, big);
  for (double v : big) CHECK(std::isfinite(v));
}

TEST_CASE("normalization and Parseval for random states") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto st = oracle::random_state(gen);
    const double q = oracle::trapezoid([&](double y) { return std::norm(st.wavefunction(y)); },
                                       -40.0, 40.0, 40001);
    const double p = oracle::trapezoid(
        [&](double k) { return std::norm(st.momentum_wavefunction(k)); }, -40.0, 40.0, 40001);
    CHECK(std::abs(q - 1.0) < 1e-8);
    CHECK(std::abs(p - 1.0) < 1e-8);
  }
}

TEST_CASE("analytic moment examples") {
  const auto vac = analytic_moments(PureState::vacuum(), 0.0);
  CHECK(vac.mean == doctest::Approx(0.0));
  CHECK(vac.variance == doctest::Approx(0.5).epsilon(1e-15));
  for (double th : {0.0, 0.4, 1.9, 3.0}) {
    CHECK(analytic_moments(PureState::number(2), th).variance == doctest::Approx(2.5).epsilon(1e-14));
  }
  const auto sq = analytic_moments(PureState::gaussian(0, 0, 2), pi / 4);
  CHECK(sq.variance == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("ladder-operator moments match quadrature of the rotated-frame density") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 12; ++trial) {
    const auto st = oracle::random_state(gen);
    const auto* f = st.as_fock();
    if (!f) continue;
    for (double th : {0.0, 0.7, 2.2}) {
      const auto w = [&](double x) { return oracle::fock_tomogram(f->coeffs, th, x); };
      const double m = oracle::trapezoid([&](double x) { return x * w(x); }, -15, 15);
      const double m2 = oracle::trapezoid([&](double x) { return x * x * w(x); }, -15, 15);
      const auto mom = analytic_moments(st, th);
      CHECK(std::abs(mom.mean - m) < 1e-9);
      CHECK(std::abs(mom.variance - (m2 - m * m)) < 1e-9);
    }
  }
}

TEST_CASE("phase shift by pi negates the mean and keeps the variance") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto st = oracle::random_state(gen);
    for (double th : {0.1, 1.0, 2.5}) {
      const auto a = analytic_moments(st, th);
      const auto b = analytic_moments(st, th + pi);
      CHECK(std::abs(a.mean + b.mean) < 1e-12);
      CHECK(std::abs(a.variance - b.variance) < 1e-12);
    }
    const double h = analytic_moments(st, 0.0).variance * analytic_moments(st, pi / 2).variance;
    CHECK(h >= 0.25 - 1e-12);
  }
}

TEST_CASE("mixed states combine by the law of total variance") {
  const MixedState mix({{0.5, PureState::gaussian(1.0, 0.0, 1.0)},
                        {0.5, PureState::gaussian(-1.0, 0.0, 1.0)}});
  const auto m = analytic_moments(mix, 0.0);
  CHECK(m.mean == doctest::Approx(0.0));
  CHECK(m.variance == doctest::Approx(1.5));
  const auto thermal = MixedState::thermal(1.0);
  for (double th : {0.0, 1.0}) {
    CHECK(std::abs(analytic_moments(thermal, th).variance - 1.5) < 1e-8);
  }
  // Weights are 2^-(n+1); the discarded tail after cutoff K is 2^-(K+1).
  CHECK(std::pow(0.5, static_cast<double>(thermal.components().size())) < 1e-10);
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(PureState::gaussian(0, 0, 0.0), InputError);
  CHECK_THROWS_AS(PureState::gaussian(0, 0, -1.0), InputError);
  CHECK_THROWS_AS(PureState::gaussian(NAN, 0, 1.0), InputError);
  CHECK_THROWS_AS(PureState::fock({}), InputError);
  CHECK_THROWS_AS(PureState::fock({0.0, 0.0}), InputError);
  CHECK_THROWS_AS(PureState::fock(std::vector<cplx>(66, 1.0)), InputError);
  CHECK_NOTHROW(PureState::fock(std::vector<cplx>(65, 1.0)));
  CHECK_THROWS_AS(MixedState({{0.5, PureState::vacuum()}}), InputError);
  CHECK_THROWS_AS(MixedState({{1.5, PureState::vacuum()}, {-0.5, PureState::vacuum()}}),
                  InputError);
  CHECK_THROWS_AS(MixedState({}), InputError);

  const auto f = PureState::fock({3.0, cplx(0, 4.0)});
  double norm = 0.0;
  for (const auto& c : f.as_fock()->coeffs) norm += std::norm(c);
  CHECK(std::abs(norm - 1.0) < 1e-14);
}

TEST_CASE("covariance of a squeezed displaced Gaussian") {
  const auto cov = covariance(StateSpec{PureState::gaussian(1.0, -2.0, 2.0)});
  CHECK(cov.mean_q == doctest::Approx(1.0));
  CHECK(cov.mean_p == doctest::Approx(-2.0));
  CHECK(cov.qq == doctest::Approx(1.0));
  CHECK(cov.pp == doctest::Approx(0.25));
  CHECK(cov.qp == doctest::Approx(0.0));
  CHECK(cov.max_variance() == doctest::Approx(1.0));
}
