#include "tomo/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "tomo/errors.hpp"

namespace tomo::quad {

namespace {

Rule compute_legendre(std::size_t n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2.0 * jd + 1.0) * z * p2 - jd * p3) / (jd + 1.0);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

}  // namespace

const Rule& gauss_legendre(std::size_t order) {
  if (order == 0) throw InputError("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_legendre(order)).first;
  return it->second;
}

Rule composite_gauss_legendre(double a, double b, std::size_t panels,
                              std::size_t order) {
  if (panels == 0) throw InputError("composite rule needs at least one panel");
  const Rule& base = gauss_legendre(order);
  Rule out;
  out.nodes.reserve(panels * order);
  out.weights.reserve(panels * order);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    for (std::size_t k = 0; k < order; ++k) {
      out.nodes.push_back(mid + 0.5 * h * base.nodes[k]);
      out.weights.push_back(0.5 * h * base.weights[k]);
    }
  }
  return out;
}

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * h;
}

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  if (n == 4) return 3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3]);

  const std::size_t intervals = n - 1;
  // Even part covered by Simpson 1/3; an odd leftover uses 3/8 at the tail.
  const std::size_t simpson_end = (intervals % 2 == 0) ? n - 1 : n - 4;
  double sum = f[0] + f[simpson_end];
  for (std::size_t i = 1; i < simpson_end; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  double total = sum * h / 3.0;
  if (simpson_end != n - 1) {
    const std::size_t j = simpson_end;
    total += 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
  }
  return total;
}

}  // namespace tomo::quad
