#pragma once

// Independent reference values for the test suites.  Nothing here calls into
// the library's quadrature or tomogram code; the oracles are closed forms or
// brute-force sums on fine uniform grids.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "tomo/states.hpp"

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

/// Physicists' Hermite polynomial H_n by explicit recurrence H_{n+1} = 2x H_n - 2n H_{n-1}.
inline double hermite_poly(int n, double x) {
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

/// psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2}; fine for n <= 20.
inline double hermite_function(int n, double x) {
  const double norm = std::pow(2.0, n) * std::tgamma(n + 1.0) * std::sqrt(kPi);
  return hermite_poly(n, x) * std::exp(-0.5 * x * x) / std::sqrt(norm);
}

/// Gaussian density with the given mean and variance.
inline double gaussian_density(double x, double mean, double var) {
  return std::exp(-(x - mean) * (x - mean) / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

/// Closed-form rotated-quadrature density of Gaussian{q0, p0, s}: Gaussian with
/// mean q0 cos + p0 sin and variance (s/2) cos^2 + sin^2 / (2 s).
inline double gaussian_tomogram(double q0, double p0, double s, double phase, double x) {
  const double c = std::cos(phase), sn = std::sin(phase);
  return gaussian_density(x, q0 * c + p0 * sn, 0.5 * s * c * c + sn * sn / (2.0 * s));
}

/// Rotated-frame Fock expansion: w(X, phase) = |sum_n c_n e^{-i n phase} psi_n(X)|^2.
inline double fock_tomogram(const std::vector<cplx>& c, double phase, double x) {
  double norm = 0.0;
  for (const auto& v : c) norm += std::norm(v);
  cplx sum{};
  for (std::size_t n = 0; n < c.size(); ++n) {
    sum += c[n] * std::polar(1.0, -static_cast<double>(n) * phase) *
           hermite_function(static_cast<int>(n), x);
  }
  return std::norm(sum) / norm;
}

/// Momentum wave function by brute-force trapezoid on a wide uniform grid:
/// (2 pi)^{-1/2} int Psi(y) e^{-i p y} dy.
template <typename Psi>
cplx fourier_brute(const Psi& psi, double p, double center, double half_width = 20.0,
                   int n = 8001) {
  const double h = 2.0 * half_width / (n - 1);
  cplx sum{};
  for (int i = 0; i < n; ++i) {
    const double y = center - half_width + i * h;
    const double wgt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    sum += wgt * psi(y) * std::polar(1.0, -p * y);
  }
  return sum * h / std::sqrt(2.0 * kPi);
}

/// Brute-force phase-space integral in the position representation:
/// (1 / (2 pi |sin|)) |int Psi(y) exp(i y^2 cot / 2 - i X y / sin) dy|^2.
template <typename Psi>
double eq4_brute(const Psi& psi, double phase, double x, double half_width = 14.0,
                 int n = 40001) {
  const double s = std::sin(phase), cot = std::cos(phase) / s;
  const double h = 2.0 * half_width / (n - 1);
  cplx sum{};
  for (int i = 0; i < n; ++i) {
    const double y = -half_width + i * h;
    const double wgt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    sum += wgt * psi(y) * std::polar(1.0, 0.5 * y * y * cot - x * y / s);
  }
  sum *= h;
  return std::norm(sum) / (2.0 * kPi * std::abs(s));
}

/// int f(x) dx by trapezoid on [a, b] with n points.
template <typename F>
double trapezoid(const F& f, double a, double b, int n = 20001) {
  const double h = (b - a) / (n - 1);
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n - 1; ++i) sum += f(a + i * h);
  return sum * h;
}

/// Characteristic function of a density by brute-force trapezoid.
template <typename Density>
cplx characteristic_brute(const Density& w, double r, double half_width = 20.0,
                          int n = 20001) {
  const double h = 2.0 * half_width / (n - 1);
  cplx sum{};
  for (int i = 0; i < n; ++i) {
    const double u = -half_width + i * h;
    const double wgt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    sum += wgt * w(u) * std::polar(1.0, r * u);
  }
  return sum * h;
}

/// Radial integral int_0^R r f(r) dr by trapezoid.
template <typename F>
double radial_brute(const F& f, double r_max = 14.0, int n = 20001) {
  return trapezoid([&](double r) { return r * f(r); }, 0.0, r_max, n);
}

/// Random valid states for property tests: Gaussians with squeeze in
/// [0.1, 10] and modest displacement, or Fock superpositions with random
/// complex coefficients up to cutoff 8.
inline tomo::PureState random_state(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(gen) < 0.5) {
    const double log_s = std::log(0.1) + (std::log(10.0) - std::log(0.1)) * unit(gen);
    return tomo::PureState::gaussian(4.0 * unit(gen) - 2.0, 4.0 * unit(gen) - 2.0,
                                     std::exp(log_s));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  const int cutoff = 1 + static_cast<int>(unit(gen) * 8.0);
  std::vector<cplx> c(static_cast<std::size_t>(cutoff) + 1);
  for (auto& v : c) v = {normal(gen), normal(gen)};
  return tomo::PureState::fock(c);
}

}  // namespace oracle
