#include "tomo/moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "tomo/errors.hpp"
#include "tomo/quadrature.hpp"

namespace tomo {

namespace {

constexpr double kNormalizationTolerance = 1e-6;
constexpr double kTailMassLimit = 1e-6;

struct RawMoments {
  double norm;
  double mean;
  double second;
};

RawMoments raw_moments(std::span<const double> row, const XGrid& grid) {
  if (row.size() != grid.size()) throw InputError("row length does not match the x grid");
  std::vector<double> x1(row.size()), x2(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double x = grid.at(i);
    x1[i] = row[i] * x;
    x2[i] = row[i] * x * x;
  }
  const double h = grid.step();
  const RawMoments m{quad::simpson(row, h), quad::simpson(x1, h), quad::simpson(x2, h)};
  if (std::abs(m.norm - 1.0) > kNormalizationTolerance) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "tomogram row integrates to " << m.norm << ", expected 1 within "
        << kNormalizationTolerance;
    throw InputError(msg.str());
  }
  return m;
}

void check_window(std::span<const double> row, const XGrid& grid, double mean, double var) {
  const double sigma = std::sqrt(var);
  const double lo = mean - 6.0 * sigma;
  const double hi = mean + 6.0 * sigma;
  if (lo >= grid.x_min() && hi <= grid.x_max()) return;
  // Gaussian-like tail beyond a boundary at distance d: mass ~ w_b sigma^2 / d.
  auto tail = [&](double w_b, double x_b) {
    const double d = std::max(std::abs(x_b - mean), sigma);
    return w_b * var / d;
  };
  const double mass = tail(row.front(), grid.x_min()) + tail(row.back(), grid.x_max());
  if (mass > kTailMassLimit) {
    std::ostringstream msg;
    msg << "grid window [" << grid.x_min() << ", " << grid.x_max()
        << "] truncates the row (6-sigma range [" << lo << ", " << hi
        << "], estimated tail mass " << mass << ")";
    throw InputError(msg.str());
  }
}

}  // namespace

double tomographic_mean(std::span<const double> row, const XGrid& grid) {
  return raw_moments(row, grid).mean;
}

double tomographic_variance(std::span<const double> row, const XGrid& grid) {
  const RawMoments m = raw_moments(row, grid);
  const double var = std::max(0.0, m.second - m.mean * m.mean);
  check_window(row, grid, m.mean, var);
  return var;
}

MomentSet tomographic_moments(const TomogramGrid& w, double phase) {
  const auto [index, mirror] = w.resolve_phase(phase);
  const auto row = w.row(index);
  const RawMoments m = raw_moments(row, w.x_grid());
  const double var = std::max(0.0, m.second - m.mean * m.mean);
  check_window(row, w.x_grid(), m.mean, var);
  return {mirror ? -m.mean : m.mean, var, phase};
}

MomentSet direct_moments(const StateSpec& state, double phase) {
  const XGrid window = XGrid::for_state(state, 2);
  auto integrate = [&](std::size_t panels) {
    const quad::Rule rule =
        quad::composite_gauss_legendre(window.x_min(), window.x_max(), panels, 16);
    const std::vector<double> w = optical_tomogram(state, phase, rule.nodes);
    RawMoments m{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double x = rule.nodes[i];
      m.norm += rule.weights[i] * w[i];
      m.mean += rule.weights[i] * w[i] * x;
      m.second += rule.weights[i] * w[i] * x * x;
    }
    return m;
  };

  std::size_t panels = 8;
  RawMoments coarse = integrate(panels);
  for (int iter = 0; iter < 6; ++iter) {
    const RawMoments fine = integrate(2 * panels);
    const double change = std::max({std::abs(fine.norm - coarse.norm),
                                    std::abs(fine.mean - coarse.mean),
                                    std::abs(fine.second - coarse.second)});
    if (change < 1e-10) {
      return {fine.mean, std::max(0.0, fine.second - fine.mean * fine.mean), phase};
    }
    coarse = fine;
    panels *= 2;
  }
  throw NumericalError("direct moment quadrature did not converge");
}

}  // namespace tomo
