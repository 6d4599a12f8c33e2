#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tomo::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights of the given order on [-1, 1].
/// Rules are computed once per order and cached; the returned reference
/// stays valid for the lifetime of the program.
const Rule& gauss_legendre(std::size_t order);

/// Composite Gauss-Legendre rule over [a, b] split into `panels` equal panels.
Rule composite_gauss_legendre(double a, double b, std::size_t panels,
                              std::size_t order = 16);

/// Integrates samples on a uniform grid with spacing h.
double trapezoid(std::span<const double> f, double h);

/// Composite Simpson rule on a uniform grid with spacing h.  An odd number of
/// intervals is closed with Simpson's 3/8 rule on the last three intervals.
double simpson(std::span<const double> f, double h);

}  // namespace tomo::quad
