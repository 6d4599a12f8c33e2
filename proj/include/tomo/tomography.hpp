#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tomo/states.hpp"

namespace tomo {

/// Uniform quadrature grid x_i = x_min + i (x_max - x_min) / (n_x - 1).
class XGrid {
 public:
  XGrid(double x_min, double x_max, std::size_t n_x);

  /// Symmetric window |x| <= R + sigmas * sigma_max, where R is the distance
  /// of the mean (q, p) from the origin and sigma_max the widest quadrature
  /// standard deviation over all phases.  `n_x` is a minimum: it is raised
  /// until the narrowest row has at least four points per standard deviation.
  static XGrid for_state(const StateSpec& state, std::size_t n_x = 256,
                         double sigmas = 8.0);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_x_; }
  double step() const { return (x_max_ - x_min_) / static_cast<double>(n_x_ - 1); }
  /// The last point is x_max exactly, so a grid rebuilt from its own
  /// endpoints reproduces every abscissa bit for bit.
  double at(std::size_t i) const {
    return i + 1 == n_x_ ? x_max_ : x_min_ + static_cast<double>(i) * step();
  }
  std::vector<double> points() const;

  bool operator==(const XGrid&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_x_;
};

/// n phases k pi / n, k = 0..n-1.
std::vector<double> uniform_phases(std::size_t n);

/// Which representation the phase-space integral is carried out in.
/// `automatic` picks the position form when |sin| >= |cos| and returns the
/// exact marginals at phase 0 and pi/2.
enum class Branch { automatic, position, momentum };

struct TomogramOptions {
  Branch branch = Branch::automatic;
  std::size_t order = 16;            // Gauss-Legendre nodes per panel
  double target_change = 1e-11;      // refinement stops below this change
  double failure_change = 1e-8;      // error if still above this at the cap
  std::size_t max_doublings = 6;
};

/// Tomogram w(X, phase) of a pure state at the given quadrature values.
std::vector<double> optical_tomogram(const PureState& state, double phase,
                                     const XGrid& grid, const TomogramOptions& opts = {});
std::vector<double> optical_tomogram(const PureState& state, double phase,
                                     std::span<const double> xs,
                                     const TomogramOptions& opts = {});
std::vector<double> optical_tomogram(const StateSpec& state, double phase,
                                     std::span<const double> xs,
                                     const TomogramOptions& opts = {});

/// Sampled tomogram on a phase x quadrature grid, phases in [0, pi).
/// Values are row-major by phase.  Construction validates the layout,
/// rejects values below -1e-12, clamps the rest to >= 0 and checks that each
/// row integrates to one within 1e-6 (trapezoid).  An optional originating
/// state enables exact re-evaluation in place of interpolation.
class TomogramGrid {
 public:
  TomogramGrid(std::vector<double> phases, XGrid grid, std::vector<double> values,
               std::shared_ptr<const StateSpec> source = nullptr);

  const std::vector<double>& phases() const { return phases_; }
  const XGrid& x_grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::span<const double> row(std::size_t phase_index) const;
  const StateSpec* source() const { return source_.get(); }

  /// Index of the grid phase equal to `phase` within `tol`.
  std::optional<std::size_t> find_phase(double phase, double tol = 1e-9) const;

  /// Row matching `phase`, which may lie anywhere in [0, 2 pi); phases in
  /// [pi, 2 pi) resolve through w(X, phase + pi) = w(-X, phase).  Returns the
  /// index and whether X must be mirrored.  Throws InputError if absent.
  std::pair<std::size_t, bool> resolve_phase(double phase, double tol = 1e-9) const;

  /// Linear interpolation of row `phase_index` at x.
  double interpolate(std::size_t phase_index, double x) const;

 private:
  std::vector<double> phases_;
  XGrid grid_;
  std::vector<double> values_;
  std::shared_ptr<const StateSpec> source_;
};

TomogramGrid compute_tomogram(const StateSpec& state, const std::vector<double>& phases,
                              const XGrid& grid, const TomogramOptions& opts = {});
TomogramGrid tomogram_of_mixed(const MixedState& state, const std::vector<double>& phases,
                               const XGrid& grid, const TomogramOptions& opts = {});

/// Grid from an arbitrary density w(theta, x); used for non-quantum test
/// distributions.  The same validation as the TomogramGrid constructor applies.
TomogramGrid tomogram_from_density(const std::vector<double>& phases, const XGrid& grid,
                                   const std::function<double(double, double)>& density);

struct SymplecticQuery {
  double x = 0.0;
  double mu = 1.0;
  double nu = 0.0;
};

/// w(X, mu, nu) = w(X / r, theta*) / r with r = |(mu, nu)| and theta* the
/// polar angle of (mu, nu) folded into [0, pi) by the parity rule.
double symplectic_tomogram(const TomogramGrid& w, const SymplecticQuery& q);

/// phi(r, phase) = int w(U, phase) e^{i r U} dU from the stored row.  Throws
/// ResolutionError when r * dx > pi / 2.
cplx tomogram_characteristic(const TomogramGrid& w, double phase, double r);
/// Closed-form characteristic function of the state's tomogram.
cplx tomogram_characteristic(const StateSpec& state, double phase, double r);
/// Closed form at one r for several phases at once.
std::vector<cplx> tomogram_characteristic(const StateSpec& state,
                                          std::span<const double> phases, double r);

}  // namespace tomo
