#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace tomo {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultMaxCutoff = 64;

/// Gaussian wave packet (pi s)^(-1/4) exp(-(y - q0)^2 / (2 s) + i p0 y).
/// Position variance s/2, momentum variance 1/(2s).
struct Gaussian {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double squeeze = 1.0;
};

/// Superposition sum_n c_n |n> over number states, n = 0..cutoff.
struct FockSuperposition {
  std::vector<cplx> coeffs;
};

/// Immutable pure single-mode state.  Construct through the factories, which
/// validate parameters and normalize Fock coefficients.
class PureState {
 public:
  static PureState gaussian(double mean_q, double mean_p, double squeeze);
  static PureState vacuum() { return gaussian(0.0, 0.0, 1.0); }
  static PureState fock(std::vector<cplx> coeffs,
                        std::size_t max_cutoff = kDefaultMaxCutoff);
  static PureState number(std::size_t n);

  const std::variant<Gaussian, FockSuperposition>& form() const { return form_; }
  const Gaussian* as_gaussian() const { return std::get_if<Gaussian>(&form_); }
  const FockSuperposition* as_fock() const {
    return std::get_if<FockSuperposition>(&form_);
  }

  /// Position-representation wave function Psi(y).
  cplx wavefunction(double y) const;
  /// Momentum-representation wave function (2 pi)^(-1/2) int Psi(y) e^{-ipy} dy.
  cplx momentum_wavefunction(double p) const;

 private:
  explicit PureState(std::variant<Gaussian, FockSuperposition> form)
      : form_(std::move(form)) {}
  std::variant<Gaussian, FockSuperposition> form_;
};

struct WeightedState {
  double weight;
  PureState state;
};

/// Convex combination of pure states.  Weights must be non-negative and sum
/// to one within 1e-10.
class MixedState {
 public:
  explicit MixedState(std::vector<WeightedState> components);

  /// Number-diagonal thermal state with mean occupation `mean_occupation`,
  /// truncated where the discarded weight drops below 1e-10.
  static MixedState thermal(double mean_occupation,
                            std::size_t max_cutoff = kDefaultMaxCutoff);

  std::span<const WeightedState> components() const { return components_; }

 private:
  std::vector<WeightedState> components_;
};

using StateSpec = std::variant<PureState, MixedState>;

/// Moments of the rotated quadrature X = q cos(phase) + p sin(phase).
struct MomentSet {
  double mean = 0.0;
  double variance = 0.0;
  double phase = 0.0;
};

/// First and second moments of (q, p).
struct Covariance {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double qq = 0.0;
  double pp = 0.0;
  double qp = 0.0;  // symmetrized

  /// Largest and smallest quadrature variance over all phases.
  double max_variance() const;
  double min_variance() const;
};

cplx eval_position_wavefunction(const PureState& state, double y);
cplx eval_momentum_wavefunction(const PureState& state, double p);

/// Closed-form quadrature moments from ladder-operator algebra.
MomentSet analytic_moments(const PureState& state, double phase);
MomentSet analytic_moments(const MixedState& state, double phase);
MomentSet analytic_moments(const StateSpec& state, double phase);

Covariance covariance(const StateSpec& state);

/// Narrowest quadrature variance of any pure component over all phases.
/// For a mixture this is the width that sets the grid resolution.
double narrowest_variance(const StateSpec& state);

/// Fills out[n] with the normalized Hermite function psi_n(y) for
/// n = 0..out.size()-1, using the three-term recurrence on psi_n.
void hermite_functions(double y, std::span<double> out);

}  // namespace tomo
