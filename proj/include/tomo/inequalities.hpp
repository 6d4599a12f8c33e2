#pragma once

#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "tomo/states.hpp"
#include "tomo/tomography.hpp"

namespace tomo {

/// Right-hand side shared by the Heisenberg and state-extended relations
/// (hbar = 1).
inline constexpr double kUncertaintyBound = 0.25;
inline constexpr double kAnalyticTolerance = 1e-9;
inline constexpr double kEmpiricalSigmas = 3.0;
/// Sweep values within this relative distance of the minimum are ties.
inline constexpr double kSweepTieTolerance = 1e-12;

enum class InequalityKind { heisenberg, trifonov, trifonov_sweep };

std::string to_string(InequalityKind kind);
InequalityKind inequality_kind_from_string(const std::string& s);

/// Outcome of one inequality check.  `satisfied` holds iff
/// margin >= -tolerance, where tolerance is fixed for analytic checks and
/// 3 standard errors for empirical ones.
struct InequalityReport {
  InequalityKind kind = InequalityKind::heisenberg;
  double phase = 0.0;  // argmin phase for sweeps
  double lhs = 0.0;
  double bound = kUncertaintyBound;
  double margin = 0.0;
  bool satisfied = false;
  std::optional<double> std_error;
  double tolerance = kAnalyticTolerance;
};

InequalityReport make_report(InequalityKind kind, double phase, double lhs,
                             double tolerance = kAnalyticTolerance);
InequalityReport make_empirical_report(InequalityKind kind, double phase, double lhs,
                                       double std_error);

/// Symmetric cross product of the two states' dispersions at a phase and at
/// the phase shifted by pi/2.
inline double state_extended_product(double var1_phase, double var2_shifted,
                                     double var2_phase, double var1_shifted) {
  return 0.5 * var1_phase * var2_shifted + 0.5 * var2_phase * var1_shifted;
}

/// Product of the dispersions at phases 0 and pi/2.
InequalityReport heisenberg_lhs(const TomogramGrid& w, double tolerance = kAnalyticTolerance);

/// State-extended relation at `phase` for two tomograms.  The phase and
/// phase + pi/2 must both resolve on each grid (the latter through the
/// parity rule when it reaches pi).
InequalityReport trifonov_lhs(const TomogramGrid& w1, const TomogramGrid& w2, double phase,
                              double tolerance = kAnalyticTolerance);

/// Minimum of trifonov_lhs over `phases`; ties (see kSweepTieTolerance) go
/// to the smallest phase.
InequalityReport trifonov_sweep(const TomogramGrid& w1, const TomogramGrid& w2,
                                std::span<const double> phases,
                                double tolerance = kAnalyticTolerance);

/// The same quantity at phase 0 from closed-form moments only.
double operator_trifonov_lhs(const StateSpec& s1, const StateSpec& s2);

/// {"kind","phase","lhs","bound","margin","satisfied","stderr"} followed by
/// the tolerance used.
nlohmann::ordered_json report_to_json(const InequalityReport& r);
InequalityReport report_from_json(const nlohmann::json& j);

}  // namespace tomo
