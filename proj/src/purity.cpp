#include "tomo/purity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tomo/errors.hpp"
#include "tomo/parallel.hpp"
#include "tomo/quadrature.hpp"

namespace tomo {

namespace {

constexpr double kPi = std::numbers::pi;

// Simpson weights for a uniform grid, matching quad::simpson.
std::vector<double> simpson_weights(std::size_t n, double h) {
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    w[i] = quad::simpson(e, h);
  }
  return w;
}

std::vector<double> uniform_phases_checked(const std::vector<double>& phases) {
  const std::size_t n = phases.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = kPi * static_cast<double>(k) / static_cast<double>(n);
    if (std::abs(phases[k] - expected) > 1e-9) {
      throw InputError("overlap needs a uniform phase grid k*pi/n covering [0, pi)");
    }
  }
  return phases;
}

}  // namespace

TomogramSource::TomogramSource(StateSpec state) : state_(std::move(state)) {}

TomogramSource::TomogramSource(std::shared_ptr<const TomogramGrid> grid)
    : grid_(std::move(grid)) {
  if (!grid_) throw InputError("null tomogram grid");
  if (grid_->source()) state_ = *grid_->source();
}

const std::vector<double>* TomogramSource::grid_phases() const {
  return grid_ ? &grid_->phases() : nullptr;
}

std::vector<cplx> TomogramSource::characteristic(double r, std::span<const double> phases) const {
  if (state_) return tomogram_characteristic(*state_, phases, r);

  const XGrid& g = grid_->x_grid();
  const double dx = g.step();
  if (r * dx > kPi / 2) {
    throw ResolutionError("grid spacing " + std::to_string(dx) + " too coarse for r = " +
                          std::to_string(r) + " (need r*dx <= pi/2)");
  }
  static thread_local std::vector<double> weights;
  if (weights.size() != g.size()) weights = simpson_weights(g.size(), 1.0);
  std::vector<double> c(g.size()), s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = r * g.at(i);
    c[i] = weights[i] * dx * std::cos(u);
    s[i] = weights[i] * dx * std::sin(u);
  }
  std::vector<cplx> out(phases.size());
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const auto [index, mirror] = grid_->resolve_phase(phases[k]);
    const auto row = grid_->row(index);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      re += row[i] * c[i];
      im += row[i] * s[i];
    }
    // Mirrored row: int w(-U) e^{irU} dU = conj of the stored transform.
    out[k] = {re, mirror ? -im : im};
  }
  return out;
}

double purity_overlap(const TomogramSource& a, const TomogramSource& b,
                      const PurityOptions& opts) {
  std::vector<double> half;
  const auto* pa = a.grid_phases();
  const auto* pb = b.grid_phases();
  if (pa && pb && *pa != *pb) throw InputError("overlap needs both grids on the same phases");
  if (pa) {
    half = uniform_phases_checked(*pa);
  } else if (pb) {
    half = uniform_phases_checked(*pb);
  } else {
    half = uniform_phases(opts.phases);
  }
  // Periodic trapezoid over [0, 2 pi); the upper half is evaluated directly
  // rather than by reflection so the imaginary residual is a real check.
  std::vector<double> full(half);
  for (double th : half) full.push_back(th + kPi);
  const double d_phase = 2.0 * kPi / static_cast<double>(full.size());

  auto angular = [&](double r) {
    const auto fa = a.characteristic(r, full);
    const auto fb = b.characteristic(r, full);
    cplx sum{};
    for (std::size_t k = 0; k < full.size(); ++k) sum += fa[k] * std::conj(fb[k]);
    return sum * d_phase / (2.0 * kPi);
  };
  auto tail_at = [&](double r) {
    const auto fa = a.characteristic(r, full);
    const auto fb = b.characteristic(r, full);
    double m = 0.0;
    double prod = 0.0;
    for (std::size_t k = 0; k < full.size(); ++k) {
      m = std::max({m, std::abs(fa[k]), std::abs(fb[k])});
      prod = std::max(prod, std::abs(fa[k]) * std::abs(fb[k]));
    }
    return std::pair{m, prod};
  };

  // Smallest r_max beyond which both characteristic functions stay below the
  // tail threshold; three probes guard against landing on a node.
  double r_max = 2.0;
  for (;;) {
    double worst = 0.0;
    double worst_prod = 0.0;
    for (double f : {1.0, 1.1, 1.25}) {
      const auto [m, prod] = tail_at(r_max * f);
      worst = std::max(worst, m);
      worst_prod = std::max(worst_prod, prod);
    }
    if (worst < opts.tail) break;
    if (r_max * 1.25 > opts.r_cap) {
      if (worst_prod * r_max > opts.tail_failure) {
        std::ostringstream msg;
        msg << "characteristic functions not decayed by r = " << r_max
            << " (truncation estimate " << worst_prod * r_max << ")";
        throw ResolutionError(msg.str());
      }
      break;
    }
    r_max *= 1.25;
  }

  auto integrate = [&](std::size_t panels) {
    const quad::Rule rule = quad::composite_gauss_legendre(0.0, r_max, panels, 16);
    std::vector<cplx> parts(rule.nodes.size());
    parallel_for(rule.nodes.size(), [&](std::size_t i) {
      parts[i] = rule.weights[i] * rule.nodes[i] * angular(rule.nodes[i]);
    });
    cplx total{};
    for (const cplx& p : parts) total += p;
    return total;
  };

  std::size_t panels = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(r_max)));
  cplx coarse = integrate(panels);
  for (int iter = 0; iter < 8; ++iter) {
    const cplx fine = integrate(2 * panels);
    if (std::abs(fine - coarse) < opts.target_change) {
      if (std::abs(fine.imag()) > opts.imaginary_limit) {
        std::ostringstream msg;
        msg << "overlap has imaginary residual " << fine.imag();
        throw NumericalError(msg.str());
      }
      return fine.real();
    }
    coarse = fine;
    panels *= 2;
  }
  throw NumericalError("overlap radial quadrature did not converge");
}

PurityResult purity_classify(const TomogramSource& w, double tolerance,
                             const PurityOptions& opts) {
  if (!(tolerance >= 0.0)) throw InputError("purity tolerance must be non-negative");
  PurityResult r;
  r.overlap = purity_overlap(w, w, opts);
  r.tolerance = tolerance;
  r.classification = std::abs(r.overlap - 1.0) <= tolerance ? PurityClass::pure : PurityClass::mixed;
  return r;
}

std::string to_string(PurityClass c) { return c == PurityClass::pure ? "pure" : "mixed"; }

nlohmann::ordered_json purity_to_json(const PurityResult& r) {
  nlohmann::ordered_json j;
  j["overlap"] = r.overlap;
  j["classification"] = to_string(r.classification);
  j["tolerance"] = r.tolerance;
  return j;
}

}  // namespace tomo
