#include "tomo/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "tomo/errors.hpp"
#include "tomo/parallel.hpp"
#include "tomo/quadrature.hpp"

namespace tomo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEndpointTolerance = 1e-14;
constexpr double kTailTolerance = 1e-12;
constexpr double kNormalizationTolerance = 1e-6;
constexpr double kNegativeTolerance = 1e-12;
// Phase advance per Gauss-Legendre panel used for the initial panel count.
constexpr double kPhasePerPanel = 24.0;
constexpr double kPointsPerSigma = 4.0;
// Re-seed the phase recurrence this often to bound rounding drift.
constexpr std::size_t kReseedInterval = 64;

// The wave function that plays the role of Psi in the phase-space integral.
// In the momentum branch that is the momentum-representation wave function,
// whose own conjugate variable is -q.
struct Representation {
  const PureState& state;
  bool momentum;

  cplx operator()(double y) const {
    return momentum ? state.momentum_wavefunction(y) : state.wavefunction(y);
  }
  double conjugate_abs(double k) const {
    return momentum ? std::abs(state.wavefunction(-k))
                    : std::abs(state.momentum_wavefunction(k));
  }
};

// Half-width h around `center` beyond which int |f| < kTailTolerance.
template <typename AbsFn>
double support_half_width(const AbsFn& absf, double center, double variance) {
  const auto& gl = quad::gauss_legendre(32);
  double h = 2.0 * std::sqrt(2.0 * variance) + 1.0;
  for (int iter = 0; iter < 40; ++iter) {
    double tail = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double t = h * (1.5 + 0.5 * gl.nodes[k]);
      const double wk = 0.5 * h * gl.weights[k];
      tail += wk * (absf(center + t) + absf(center - t));
    }
    if (tail < kTailTolerance) return h;
    h *= 1.5;
  }
  throw NumericalError("wave function support did not converge (tail above 1e-12)");
}

struct Support {
  double center;
  double half_width;
  double conj_center;
  double conj_half_width;
};

Support support_for(const Representation& rep) {
  const Covariance cov = covariance(StateSpec{rep.state});
  const double center = rep.momentum ? cov.mean_p : cov.mean_q;
  const double var = rep.momentum ? cov.pp : cov.qq;
  const double conj_center = rep.momentum ? -cov.mean_q : cov.mean_p;
  const double conj_var = rep.momentum ? cov.qq : cov.pp;
  Support s{};
  s.center = center;
  s.half_width = support_half_width([&](double y) { return std::abs(rep(y)); }, center, var);
  s.conj_center = conj_center;
  s.conj_half_width = support_half_width(
      [&](double k) { return rep.conjugate_abs(k); }, conj_center, conj_var);
  return s;
}

// Integrand samples g_j = weight_j f(y_j) exp(i y_j^2 cot(a) / 2) on a
// composite Gauss-Legendre rule, stored split for the inner loops.
struct Chirped {
  std::vector<double> y;
  std::vector<double> re;
  std::vector<double> im;
};

Chirped chirped_samples(const Representation& rep, const Support& sup, double cot,
                        std::size_t panels, std::size_t order) {
  const quad::Rule rule = quad::composite_gauss_legendre(
      sup.center - sup.half_width, sup.center + sup.half_width, panels, order);
  Chirped c;
  c.y = rule.nodes;
  c.re.resize(rule.nodes.size());
  c.im.resize(rule.nodes.size());
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double y = rule.nodes[j];
    const cplx g = rule.weights[j] * rep(y) * std::polar(1.0, 0.5 * y * y * cot);
    c.re[j] = g.real();
    c.im[j] = g.imag();
  }
  return c;
}

// |sum_j g_j exp(-i x_k y_j / s)|^2 / (2 pi |s|) on x_k = x0 + k dx.
std::vector<double> transform_uniform(const Chirped& c, double sin_a, double x0, double dx,
                                      std::size_t n) {
  const std::size_t m = c.y.size();
  std::vector<double> er(m), ei(m), dr(m), di(m);
  for (std::size_t j = 0; j < m; ++j) {
    dr[j] = std::cos(-dx * c.y[j] / sin_a);
    di[j] = std::sin(-dx * c.y[j] / sin_a);
  }
  const double norm = 1.0 / (2.0 * kPi * std::abs(sin_a));
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k % kReseedInterval == 0) {
      const double x = x0 + static_cast<double>(k) * dx;
      for (std::size_t j = 0; j < m; ++j) {
        er[j] = std::cos(-x * c.y[j] / sin_a);
        ei[j] = std::sin(-x * c.y[j] / sin_a);
      }
    }
    double sr0 = 0.0, sr1 = 0.0, si0 = 0.0, si1 = 0.0;
    std::size_t j = 0;
    for (; j + 1 < m; j += 2) {
      sr0 += c.re[j] * er[j] - c.im[j] * ei[j];
      si0 += c.re[j] * ei[j] + c.im[j] * er[j];
      sr1 += c.re[j + 1] * er[j + 1] - c.im[j + 1] * ei[j + 1];
      si1 += c.re[j + 1] * ei[j + 1] + c.im[j + 1] * er[j + 1];
    }
    for (; j < m; ++j) {
      sr0 += c.re[j] * er[j] - c.im[j] * ei[j];
      si0 += c.re[j] * ei[j] + c.im[j] * er[j];
    }
    const double sr = sr0 + sr1;
    const double si = si0 + si1;
    out[k] = norm * (sr * sr + si * si);
    for (std::size_t jj = 0; jj < m; ++jj) {
      const double nr = er[jj] * dr[jj] - ei[jj] * di[jj];
      ei[jj] = er[jj] * di[jj] + ei[jj] * dr[jj];
      er[jj] = nr;
    }
  }
  return out;
}

std::vector<double> transform_points(const Chirped& c, double sin_a,
                                     std::span<const double> xs) {
  const double norm = 1.0 / (2.0 * kPi * std::abs(sin_a));
  std::vector<double> out(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double sr = 0.0, si = 0.0;
    for (std::size_t j = 0; j < c.y.size(); ++j) {
      const double ph = -xs[k] * c.y[j] / sin_a;
      const double cr = std::cos(ph);
      const double ci = std::sin(ph);
      sr += c.re[j] * cr - c.im[j] * ci;
      si += c.re[j] * ci + c.im[j] * cr;
    }
    out[k] = norm * (sr * sr + si * si);
  }
  return out;
}

struct Abscissae {
  std::span<const double> points;  // used when not uniform
  bool uniform = false;
  double x0 = 0.0;
  double dx = 0.0;
  std::size_t n = 0;

  double max_abs() const {
    if (uniform) {
      return std::max(std::abs(x0), std::abs(x0 + dx * static_cast<double>(n - 1)));
    }
    double m = 0.0;
    for (double x : points) m = std::max(m, std::abs(x));
    return m;
  }
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Phase-space integral in the given representation at angle `angle`.
std::vector<double> branch_row(const Representation& rep, double angle, const Abscissae& xs,
                               const TomogramOptions& opts) {
  const double sin_a = std::sin(angle);
  const double cos_a = std::cos(angle);
  if (std::abs(sin_a) < 1e-12) {
    throw InputError("phase-space integral is singular at this phase in the requested branch");
  }
  const double cot = cos_a / sin_a;
  const Support sup = support_for(rep);

  const double k_max = std::abs(sup.conj_center) + sup.conj_half_width +
                       std::abs(cot) * (std::abs(sup.center) + sup.half_width) +
                       xs.max_abs() / std::abs(sin_a);
  auto panels = static_cast<std::size_t>(
      std::ceil(2.0 * sup.half_width * k_max / kPhasePerPanel));
  panels = std::max<std::size_t>(panels, 4);

  // Convergence is judged on a thinned copy of the abscissae; the accepted
  // panel count is then applied to the full set.
  auto evaluate = [&](std::size_t p, bool thinned) {
    const Chirped c = chirped_samples(rep, sup, cot, p, opts.order);
    if (xs.uniform) {
      if (thinned) {
        const std::size_t stride = 8;
        return transform_uniform(c, sin_a, xs.x0, xs.dx * stride, (xs.n - 1) / stride + 1);
      }
      return transform_uniform(c, sin_a, xs.x0, xs.dx, xs.n);
    }
    return transform_points(c, sin_a, xs.points);
  };

  const bool thin = xs.uniform && xs.n > 32;
  std::vector<double> coarse = evaluate(panels, thin);
  double change = 0.0;
  for (std::size_t d = 0; d <= opts.max_doublings; ++d) {
    std::vector<double> fine = evaluate(2 * panels, thin);
    change = max_abs_diff(coarse, fine);
    // The change bounds the error of the coarser rule, which is kept.
    if (change <= opts.target_change) return thin ? evaluate(panels, false) : coarse;
    panels *= 2;
    coarse = std::move(fine);
  }
  if (change > opts.failure_change) {
    std::ostringstream msg;
    msg << "tomogram quadrature did not converge: angle=" << angle << " panels=" << panels
        << " last change=" << change << " (limit " << opts.failure_change << ")";
    throw NumericalError(msg.str());
  }
  return thin ? evaluate(panels, false) : coarse;
}

std::vector<double> pure_row(const PureState& state, double phase, const Abscissae& xs,
                             const TomogramOptions& opts) {
  if (!std::isfinite(phase)) throw InputError("phase must be finite");
  auto at = [&](std::size_t i) {
    return xs.uniform ? xs.x0 + static_cast<double>(i) * xs.dx : xs.points[i];
  };
  const std::size_t n = xs.uniform ? xs.n : xs.points.size();

  if (opts.branch == Branch::automatic) {
    if (std::abs(phase) < kEndpointTolerance) {
      std::vector<double> out(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = std::norm(state.wavefunction(at(i)));
      return out;
    }
    if (std::abs(phase - kPi / 2) < kEndpointTolerance) {
      std::vector<double> out(n);
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::norm(state.momentum_wavefunction(at(i)));
      }
      return out;
    }
  }

  bool momentum = false;
  switch (opts.branch) {
    case Branch::automatic:
      momentum = std::abs(std::sin(phase)) < std::abs(std::cos(phase));
      break;
    case Branch::position: momentum = false; break;
    case Branch::momentum: momentum = true; break;
  }
  // In the momentum representation the rotated quadrature at `phase` is the
  // position-form quadrature at phase - pi/2.
  const double angle = momentum ? phase - kPi / 2 : phase;
  return branch_row(Representation{state, momentum}, angle, xs, opts);
}

void validate_phases(const std::vector<double>& phases) {
  if (phases.empty()) throw InputError("phase list is empty");
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (!std::isfinite(phases[i]) || phases[i] < 0.0 || phases[i] >= kPi) {
      throw InputError("phase " + std::to_string(phases[i]) + " outside [0, pi)");
    }
    if (i > 0 && !(phases[i] > phases[i - 1])) {
      throw InputError("phases must be strictly increasing");
    }
  }
}

std::vector<double> state_row(const StateSpec& state, double phase, const Abscissae& xs,
                              const TomogramOptions& opts) {
  if (const auto* pure = std::get_if<PureState>(&state)) return pure_row(*pure, phase, xs, opts);
  std::vector<double> sum;
  for (const auto& comp : std::get<MixedState>(state).components()) {
    if (comp.weight == 0.0) continue;
    std::vector<double> row = pure_row(comp.state, phase, xs, opts);
    if (sum.empty()) sum.assign(row.size(), 0.0);
    for (std::size_t i = 0; i < row.size(); ++i) sum[i] += comp.weight * row[i];
  }
  return sum;
}

// Matrix elements <n+d| exp(i r q) |n> for n + d <= cutoff, indexed [d][n].
class DisplacementTable {
 public:
  DisplacementTable(std::size_t cutoff, double r) : cutoff_(cutoff), table_(cutoff + 1) {
    const double x = 0.5 * r * r;
    for (std::size_t d = 0; d <= cutoff; ++d) {
      auto& col = table_[d];
      col.resize(cutoff - d + 1);
      const double dd = static_cast<double>(d);
      if (r == 0.0) {
        for (auto& v : col) v = (d == 0) ? 1.0 : 0.0;
        continue;
      }
      // Laguerre L_n^{(d)}(x) by forward recurrence in n.
      double l_prev = 1.0;
      double l_curr = 1.0 + dd - x;
      const cplx i_pow = std::pow(cplx(0.0, 1.0), static_cast<int>(d % 4));
      for (std::size_t n = 0; n < col.size(); ++n) {
        double lag;
        if (n == 0) {
          lag = 1.0;
        } else if (n == 1) {
          lag = l_curr;
        } else {
          const double k = static_cast<double>(n - 1);
          const double next = ((2.0 * k + 1.0 + dd - x) * l_curr - (k + dd) * l_prev) / (k + 1.0);
          l_prev = l_curr;
          l_curr = next;
          lag = next;
        }
        const double nd = static_cast<double>(n);
        const double log_scale = dd * std::log(r / std::numbers::sqrt2) +
                                 0.5 * (std::lgamma(nd + 1.0) - std::lgamma(nd + dd + 1.0)) -
                                 0.5 * x;
        col[n] = i_pow * (std::exp(log_scale) * lag);
      }
    }
  }

  std::size_t cutoff() const { return cutoff_; }
  cplx at(std::size_t d, std::size_t n) const { return table_[d][n]; }

 private:
  std::size_t cutoff_;
  std::vector<std::vector<cplx>> table_;
};

std::vector<cplx> fock_characteristic(const FockSuperposition& f,
                                      std::span<const double> phases,
                                      const DisplacementTable& table) {
  const auto& c = f.coeffs;
  const std::size_t n_max = c.size() - 1;
  // phi = sum_d S_d e^{i d phase} + sum_{d>0} T_d e^{-i d phase}
  std::vector<cplx> up(n_max + 1), down(n_max + 1);
  for (std::size_t d = 0; d <= n_max; ++d) {
    for (std::size_t n = 0; n + d <= n_max; ++n) {
      const cplx e = table.at(d, n);
      up[d] += std::conj(c[n + d]) * c[n] * e;
      if (d > 0) down[d] += std::conj(c[n]) * c[n + d] * e;
    }
  }
  std::vector<cplx> out(phases.size());
  for (std::size_t k = 0; k < phases.size(); ++k) {
    cplx sum = up[0];
    for (std::size_t d = 1; d <= n_max; ++d) {
      const cplx rot = std::polar(1.0, static_cast<double>(d) * phases[k]);
      sum += up[d] * rot + down[d] * std::conj(rot);
    }
    out[k] = sum;
  }
  return out;
}

std::vector<cplx> pure_characteristic(const PureState& s, std::span<const double> phases,
                                      double r, const DisplacementTable* table) {
  if (s.as_gaussian()) {
    std::vector<cplx> out(phases.size());
    for (std::size_t k = 0; k < phases.size(); ++k) {
      const MomentSet m = analytic_moments(s, phases[k]);
      out[k] = std::exp(cplx(-0.5 * r * r * m.variance, r * m.mean));
    }
    return out;
  }
  const auto& f = *s.as_fock();
  if (table && table->cutoff() >= f.coeffs.size() - 1) {
    return fock_characteristic(f, phases, *table);
  }
  return fock_characteristic(f, phases, DisplacementTable(f.coeffs.size() - 1, r));
}

}  // namespace

// ---------------------------------------------------------------------------

XGrid::XGrid(double x_min, double x_max, std::size_t n_x)
    : x_min_(x_min), x_max_(x_max), n_x_(n_x) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw InputError("x grid needs finite x_min < x_max");
  }
  if (n_x < 2) throw InputError("x grid needs at least two points");
}

XGrid XGrid::for_state(const StateSpec& state, std::size_t n_x, double sigmas) {
  const Covariance cov = covariance(state);
  const double radius = std::hypot(cov.mean_q, cov.mean_p);
  const double half = radius + sigmas * std::sqrt(cov.max_variance());
  // Simpson moments need a few points across the narrowest row.
  const double narrow = std::sqrt(narrowest_variance(state));
  const auto needed = static_cast<std::size_t>(
      std::ceil(2.0 * half * kPointsPerSigma / narrow)) + 1;
  return XGrid(-half, half, std::max(n_x, needed));
}

std::vector<double> XGrid::points() const {
  std::vector<double> xs(n_x_);
  for (std::size_t i = 0; i < n_x_; ++i) xs[i] = at(i);
  return xs;
}

std::vector<double> uniform_phases(std::size_t n) {
  if (n == 0) throw InputError("need at least one phase");
  std::vector<double> phases(n);
  for (std::size_t k = 0; k < n; ++k) {
    phases[k] = kPi * static_cast<double>(k) / static_cast<double>(n);
  }
  return phases;
}

std::vector<double> optical_tomogram(const PureState& state, double phase, const XGrid& grid,
                                     const TomogramOptions& opts) {
  Abscissae xs;
  xs.uniform = true;
  xs.x0 = grid.x_min();
  xs.dx = grid.step();
  xs.n = grid.size();
  return pure_row(state, phase, xs, opts);
}

std::vector<double> optical_tomogram(const PureState& state, double phase,
                                     std::span<const double> xs, const TomogramOptions& opts) {
  Abscissae a;
  a.points = xs;
  return pure_row(state, phase, a, opts);
}

std::vector<double> optical_tomogram(const StateSpec& state, double phase,
                                     std::span<const double> xs, const TomogramOptions& opts) {
  Abscissae a;
  a.points = xs;
  return state_row(state, phase, a, opts);
}

// ---------------------------------------------------------------------------

TomogramGrid::TomogramGrid(std::vector<double> phases, XGrid grid, std::vector<double> values,
                           std::shared_ptr<const StateSpec> source)
    : phases_(std::move(phases)),
      grid_(grid),
      values_(std::move(values)),
      source_(std::move(source)) {
  validate_phases(phases_);
  if (values_.size() != phases_.size() * grid_.size()) {
    throw InputError("tomogram has " + std::to_string(values_.size()) + " values, expected " +
                     std::to_string(phases_.size() * grid_.size()));
  }
  for (double& v : values_) {
    if (!std::isfinite(v) || v < -kNegativeTolerance) {
      throw InputError("tomogram value " + std::to_string(v) + " is negative or non-finite");
    }
    v = std::max(v, 0.0);
  }
  for (std::size_t k = 0; k < phases_.size(); ++k) {
    const double total = quad::trapezoid(row(k), grid_.step());
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
      std::ostringstream msg;
      msg.precision(10);
      msg << "tomogram row at phase " << phases_[k] << " integrates to " << total
          << " (expected 1 within " << kNormalizationTolerance << ")";
      throw InputError(msg.str());
    }
  }
}

std::span<const double> TomogramGrid::row(std::size_t phase_index) const {
  if (phase_index >= phases_.size()) throw InputError("phase index out of range");
  return std::span<const double>(values_).subspan(phase_index * grid_.size(), grid_.size());
}

std::optional<std::size_t> TomogramGrid::find_phase(double phase, double tol) const {
  for (std::size_t k = 0; k < phases_.size(); ++k) {
    if (std::abs(phases_[k] - phase) <= tol) return k;
  }
  return std::nullopt;
}

std::pair<std::size_t, bool> TomogramGrid::resolve_phase(double phase, double tol) const {
  if (!std::isfinite(phase)) throw InputError("phase must be finite");
  double reduced = std::fmod(phase, 2.0 * kPi);
  if (reduced < 0.0) reduced += 2.0 * kPi;
  bool mirror = false;
  if (reduced >= kPi - tol) {
    reduced -= kPi;
    mirror = true;
  }
  if (auto k = find_phase(reduced, tol)) return {*k, mirror};
  // A phase just below pi folds onto 0 without the tolerance shift above.
  if (auto k = find_phase(reduced + kPi, tol)) return {*k, !mirror};
  throw InputError("phase " + std::to_string(phase) + " is not on the tomogram grid");
}

double TomogramGrid::interpolate(std::size_t phase_index, double x) const {
  const auto r = row(phase_index);
  const double pos = (x - grid_.x_min()) / grid_.step();
  if (!std::isfinite(pos) || pos < -1e-9 || pos > static_cast<double>(grid_.size() - 1) + 1e-9) {
    throw ExtrapolationError("x = " + std::to_string(x) + " outside tomogram window [" +
                             std::to_string(grid_.x_min()) + ", " +
                             std::to_string(grid_.x_max()) + "]");
  }
  const double clamped = std::clamp(pos, 0.0, static_cast<double>(grid_.size() - 1));
  const auto i = std::min(static_cast<std::size_t>(clamped), grid_.size() - 2);
  const double t = clamped - static_cast<double>(i);
  return (1.0 - t) * r[i] + t * r[i + 1];
}

TomogramGrid compute_tomogram(const StateSpec& state, const std::vector<double>& phases,
                              const XGrid& grid, const TomogramOptions& opts) {
  validate_phases(phases);
  Abscissae xs;
  xs.uniform = true;
  xs.x0 = grid.x_min();
  xs.dx = grid.step();
  xs.n = grid.size();

  std::vector<std::vector<double>> rows(phases.size());
  parallel_for(phases.size(), [&](std::size_t k) { rows[k] = state_row(state, phases[k], xs, opts); });

  std::vector<double> values;
  values.reserve(phases.size() * grid.size());
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  return TomogramGrid(phases, grid, std::move(values), std::make_shared<const StateSpec>(state));
}

TomogramGrid tomogram_of_mixed(const MixedState& state, const std::vector<double>& phases,
                               const XGrid& grid, const TomogramOptions& opts) {
  return compute_tomogram(StateSpec{state}, phases, grid, opts);
}

TomogramGrid tomogram_from_density(const std::vector<double>& phases, const XGrid& grid,
                                   const std::function<double(double, double)>& density) {
  std::vector<double> values;
  values.reserve(phases.size() * grid.size());
  for (double th : phases) {
    for (std::size_t i = 0; i < grid.size(); ++i) values.push_back(density(th, grid.at(i)));
  }
  return TomogramGrid(phases, grid, std::move(values));
}

// ---------------------------------------------------------------------------

double symplectic_tomogram(const TomogramGrid& w, const SymplecticQuery& q) {
  if (!std::isfinite(q.x) || !std::isfinite(q.mu) || !std::isfinite(q.nu)) {
    throw InputError("symplectic query must be finite");
  }
  const double r = std::hypot(q.mu, q.nu);
  if (r == 0.0) throw InputError("symplectic tomogram needs (mu, nu) != (0, 0)");
  double phase = std::atan2(q.nu, q.mu);  // (-pi, pi]
  double x = q.x / r;
  if (phase < 0.0) {
    phase += kPi;
    x = -x;
  }
  if (phase >= kPi) {
    phase -= kPi;
    x = -x;
  }

  if (const StateSpec* src = w.source()) {
    const double xs[] = {x};
    return state_row(*src, phase, Abscissae{xs}, TomogramOptions{})[0] / r;
  }

  // Nearest stored phase, measured around the circle of period pi.
  std::size_t best = 0;
  double best_dist = INFINITY;
  bool best_mirror = false;
  for (std::size_t k = 0; k < w.phases().size(); ++k) {
    const double d = std::abs(w.phases()[k] - phase);
    const double wrapped = kPi - d;
    if (d < best_dist) {
      best = k;
      best_dist = d;
      best_mirror = false;
    }
    if (wrapped < best_dist) {
      best = k;
      best_dist = wrapped;
      best_mirror = true;
    }
  }
  return w.interpolate(best, best_mirror ? -x : x) / r;
}

cplx tomogram_characteristic(const TomogramGrid& w, double phase, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InputError("r must be finite and non-negative");
  const double dx = w.x_grid().step();
  if (r * dx > kPi / 2) {
    throw ResolutionError("grid spacing " + std::to_string(dx) + " too coarse for r = " +
                          std::to_string(r) + " (need r*dx <= pi/2)");
  }
  const auto [index, mirror] = w.resolve_phase(phase);
  const auto row = w.row(index);
  const double sign = mirror ? -1.0 : 1.0;
  std::vector<double> re(row.size()), im(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double u = sign * w.x_grid().at(i);
    re[i] = row[i] * std::cos(r * u);
    im[i] = row[i] * std::sin(r * u);
  }
  return {quad::simpson(re, dx), quad::simpson(im, dx)};
}

std::vector<cplx> tomogram_characteristic(const StateSpec& state,
                                          std::span<const double> phases, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InputError("r must be finite and non-negative");
  if (const auto* pure = std::get_if<PureState>(&state)) {
    return pure_characteristic(*pure, phases, r, nullptr);
  }
  const auto& mixed = std::get<MixedState>(state);
  std::size_t cutoff = 0;
  for (const auto& c : mixed.components()) {
    if (const auto* f = c.state.as_fock()) cutoff = std::max(cutoff, f->coeffs.size() - 1);
  }
  const DisplacementTable table(cutoff, r);
  std::vector<cplx> out(phases.size());
  for (const auto& c : mixed.components()) {
    const auto part = pure_characteristic(c.state, phases, r, &table);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += c.weight * part[k];
  }
  return out;
}

cplx tomogram_characteristic(const StateSpec& state, double phase, double r) {
  const double phases[] = {phase};
  return tomogram_characteristic(state, std::span<const double>(phases), r)[0];
}

}  // namespace tomo
