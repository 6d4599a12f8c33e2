#include "tomo/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tomo/errors.hpp"

namespace tomo {

namespace {

constexpr double kNormTolerance = 1e-10;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InputError(std::string(what) + " must be finite");
}

// (-i)^n
cplx minus_i_power(std::size_t n) {
  switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

struct LadderMoments {
  cplx a;        // <a>
  cplx a2;       // <a^2>
  double n = 0;  // <a^dagger a>
};

LadderMoments ladder_moments(const FockSuperposition& f) {
  LadderMoments m{};
  const auto& c = f.coeffs;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double kd = static_cast<double>(k);
    m.n += kd * std::norm(c[k]);
    if (k >= 1) m.a += std::conj(c[k - 1]) * c[k] * std::sqrt(kd);
    if (k >= 2) m.a2 += std::conj(c[k - 2]) * c[k] * std::sqrt(kd * (kd - 1.0));
  }
  return m;
}

}  // namespace

void hermite_functions(double y, std::span<double> out) {
  if (out.empty()) return;
  out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
  if (out.size() == 1) return;
  out[1] = std::numbers::sqrt2 * y * out[0];
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double nd = static_cast<double>(n);
    out[n + 1] = std::sqrt(2.0 / (nd + 1.0)) * y * out[n] -
                 std::sqrt(nd / (nd + 1.0)) * out[n - 1];
  }
}

PureState PureState::gaussian(double mean_q, double mean_p, double squeeze) {
  require_finite(mean_q, "mean_q");
  require_finite(mean_p, "mean_p");
  require_finite(squeeze, "squeeze");
  if (squeeze <= 0.0) throw InputError("squeeze must be positive");
  return PureState(Gaussian{mean_q, mean_p, squeeze});
}

PureState PureState::fock(std::vector<cplx> coeffs, std::size_t max_cutoff) {
  if (coeffs.empty()) throw InputError("Fock superposition needs at least one coefficient");
  if (coeffs.size() - 1 > max_cutoff) {
    throw InputError("Fock cutoff " + std::to_string(coeffs.size() - 1) +
                     " exceeds maximum " + std::to_string(max_cutoff));
  }
  double norm = 0.0;
  for (const cplx& c : coeffs) {
    require_finite(c.real(), "Fock coefficient");
    require_finite(c.imag(), "Fock coefficient");
    norm += std::norm(c);
  }
  if (!(norm > 0.0)) throw InputError("Fock coefficients are all zero");
  const double scale = 1.0 / std::sqrt(norm);
  for (cplx& c : coeffs) c *= scale;
  // Trailing zeros only cost time in every evaluation.
  while (coeffs.size() > 1 && coeffs.back() == cplx{}) coeffs.pop_back();
  return PureState(FockSuperposition{std::move(coeffs)});
}

PureState PureState::number(std::size_t n) {
  std::vector<cplx> c(n + 1);
  c[n] = 1.0;
  return fock(std::move(c), std::max(n, kDefaultMaxCutoff));
}

cplx PureState::wavefunction(double y) const {
  require_finite(y, "position argument");
  if (const auto* g = as_gaussian()) {
    const double d = y - g->mean_q;
    const double amp = std::pow(std::numbers::pi * g->squeeze, -0.25) *
                       std::exp(-d * d / (2.0 * g->squeeze));
    return std::polar(amp, g->mean_p * y);
  }
  const auto& c = as_fock()->coeffs;
  std::vector<double> psi(c.size());
  hermite_functions(y, psi);
  cplx sum{};
  for (std::size_t n = 0; n < c.size(); ++n) sum += c[n] * psi[n];
  return sum;
}

cplx PureState::momentum_wavefunction(double p) const {
  require_finite(p, "momentum argument");
  if (const auto* g = as_gaussian()) {
    const double d = p - g->mean_p;
    const double amp = std::pow(g->squeeze / std::numbers::pi, 0.25) *
                       std::exp(-0.5 * g->squeeze * d * d);
    return std::polar(amp, -d * g->mean_q);
  }
  const auto& c = as_fock()->coeffs;
  std::vector<double> psi(c.size());
  hermite_functions(p, psi);
  cplx sum{};
  for (std::size_t n = 0; n < c.size(); ++n) sum += c[n] * minus_i_power(n) * psi[n];
  return sum;
}

MixedState::MixedState(std::vector<WeightedState> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InputError("mixed state needs at least one component");
  double total = 0.0;
  for (const auto& c : components_) {
    require_finite(c.weight, "mixture weight");
    if (c.weight < 0.0) throw InputError("mixture weights must be non-negative");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw InputError("mixture weights sum to " + std::to_string(total) + ", expected 1");
  }
}

MixedState MixedState::thermal(double mean_occupation, std::size_t max_cutoff) {
  require_finite(mean_occupation, "mean occupation");
  if (mean_occupation < 0.0) throw InputError("mean occupation must be non-negative");
  if (mean_occupation == 0.0) return MixedState({{1.0, PureState::vacuum()}});

  const double ratio = mean_occupation / (1.0 + mean_occupation);
  // Discarded weight after keeping n = 0..N is ratio^(N+1).
  const auto cutoff = static_cast<std::size_t>(
      std::floor(std::log(1e-10) / std::log(ratio)));
  if (cutoff > max_cutoff) {
    throw InputError("thermal state needs cutoff " + std::to_string(cutoff) +
                     " above maximum " + std::to_string(max_cutoff));
  }
  std::vector<WeightedState> comps;
  double kept = 0.0;
  for (std::size_t n = 0; n <= cutoff; ++n) {
    const double p = std::pow(ratio, static_cast<double>(n)) / (1.0 + mean_occupation);
    kept += p;
    comps.push_back({p, PureState::number(n)});
  }
  for (auto& c : comps) c.weight /= kept;
  return MixedState(std::move(comps));
}

cplx eval_position_wavefunction(const PureState& state, double y) {
  return state.wavefunction(y);
}

cplx eval_momentum_wavefunction(const PureState& state, double p) {
  return state.momentum_wavefunction(p);
}

MomentSet analytic_moments(const PureState& state, double phase) {
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  if (const auto* g = state.as_gaussian()) {
    return {g->mean_q * c + g->mean_p * s,
            0.5 * g->squeeze * c * c + s * s / (2.0 * g->squeeze), phase};
  }
  // X = (a e^{-i phase} + a^dagger e^{i phase}) / sqrt 2
  const LadderMoments m = ladder_moments(*state.as_fock());
  const cplx rot = std::polar(1.0, -phase);
  const double mean = std::numbers::sqrt2 * (m.a * rot).real();
  const double second = (m.a2 * rot * rot).real() + m.n + 0.5;
  return {mean, std::max(0.0, second - mean * mean), phase};
}

MomentSet analytic_moments(const MixedState& state, double phase) {
  double mean = 0.0;
  double second = 0.0;
  for (const auto& comp : state.components()) {
    const MomentSet m = analytic_moments(comp.state, phase);
    mean += comp.weight * m.mean;
    second += comp.weight * (m.variance + m.mean * m.mean);
  }
  return {mean, std::max(0.0, second - mean * mean), phase};
}

MomentSet analytic_moments(const StateSpec& state, double phase) {
  return std::visit([phase](const auto& s) { return analytic_moments(s, phase); }, state);
}

Covariance covariance(const StateSpec& state) {
  const MomentSet q = analytic_moments(state, 0.0);
  const MomentSet p = analytic_moments(state, std::numbers::pi / 2);
  const MomentSet d = analytic_moments(state, std::numbers::pi / 4);
  Covariance cov;
  cov.mean_q = q.mean;
  cov.mean_p = p.mean;
  cov.qq = q.variance;
  cov.pp = p.variance;
  // var(pi/4) = (qq + pp) / 2 + qp
  cov.qp = d.variance - 0.5 * (q.variance + p.variance);
  return cov;
}

double Covariance::max_variance() const {
  const double half_trace = 0.5 * (qq + pp);
  const double half_diff = 0.5 * (qq - pp);
  return half_trace + std::sqrt(half_diff * half_diff + qp * qp);
}

double Covariance::min_variance() const {
  const double half_trace = 0.5 * (qq + pp);
  const double half_diff = 0.5 * (qq - pp);
  return half_trace - std::sqrt(half_diff * half_diff + qp * qp);
}

double narrowest_variance(const StateSpec& state) {
  if (const auto* pure = std::get_if<PureState>(&state)) {
    return covariance(StateSpec{*pure}).min_variance();
  }
  double v = std::numeric_limits<double>::infinity();
  for (const auto& c : std::get<MixedState>(state).components()) {
    v = std::min(v, covariance(StateSpec{c.state}).min_variance());
  }
  return v;
}

}  // namespace tomo
