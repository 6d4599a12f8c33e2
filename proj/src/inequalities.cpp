#include "tomo/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "tomo/errors.hpp"
#include "tomo/moments.hpp"
#include "tomo/parallel.hpp"

namespace tomo {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

double variance_at(const TomogramGrid& w, double phase, const char* which) {
  try {
    return tomographic_moments(w, phase).variance;
  } catch (const InputError& e) {
    throw InputError(std::string(which) + ": " + e.what());
  }
}

}  // namespace

std::string to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::heisenberg: return "heisenberg";
    case InequalityKind::trifonov: return "trifonov";
    case InequalityKind::trifonov_sweep: return "trifonov_sweep";
  }
  return "unknown";
}

InequalityKind inequality_kind_from_string(const std::string& s) {
  if (s == "heisenberg") return InequalityKind::heisenberg;
  if (s == "trifonov") return InequalityKind::trifonov;
  if (s == "trifonov_sweep") return InequalityKind::trifonov_sweep;
  throw InputError("unknown inequality kind \"" + s + "\"");
}

InequalityReport make_report(InequalityKind kind, double phase, double lhs, double tolerance) {
  InequalityReport r;
  r.kind = kind;
  r.phase = phase;
  r.lhs = lhs;
  r.margin = lhs - r.bound;
  r.tolerance = tolerance;
  r.satisfied = r.margin >= -tolerance;
  return r;
}

InequalityReport make_empirical_report(InequalityKind kind, double phase, double lhs,
                                       double std_error) {
  InequalityReport r = make_report(kind, phase, lhs, kEmpiricalSigmas * std_error);
  r.std_error = std_error;
  return r;
}

InequalityReport heisenberg_lhs(const TomogramGrid& w, double tolerance) {
  if (!w.find_phase(0.0) || !w.find_phase(kHalfPi)) {
    throw InputError("Heisenberg check needs phases 0 and pi/2 on the tomogram grid");
  }
  const double vq = variance_at(w, 0.0, "tomogram");
  const double vp = variance_at(w, kHalfPi, "tomogram");
  return make_report(InequalityKind::heisenberg, 0.0, vq * vp, tolerance);
}

InequalityReport trifonov_lhs(const TomogramGrid& w1, const TomogramGrid& w2, double phase,
                              double tolerance) {
  if (!std::isfinite(phase)) throw InputError("phase must be finite");
  const double v1 = variance_at(w1, phase, "first tomogram");
  const double v1s = variance_at(w1, phase + kHalfPi, "first tomogram");
  const double v2 = variance_at(w2, phase, "second tomogram");
  const double v2s = variance_at(w2, phase + kHalfPi, "second tomogram");
  return make_report(InequalityKind::trifonov, phase,
                     state_extended_product(v1, v2s, v2, v1s), tolerance);
}

InequalityReport trifonov_sweep(const TomogramGrid& w1, const TomogramGrid& w2,
                                std::span<const double> phases, double tolerance) {
  if (phases.empty()) throw InputError("sweep needs at least one phase");
  std::vector<double> lhs(phases.size());
  parallel_for(phases.size(), [&](std::size_t k) {
    lhs[k] = trifonov_lhs(w1, w2, phases[k], tolerance).lhs;
  });
  // Values within rounding of the minimum count as ties, so flat sweeps
  // report the smallest phase rather than whichever row rounded lowest.
  const double lowest = *std::min_element(lhs.begin(), lhs.end());
  const double tie = kSweepTieTolerance * std::max(1.0, std::abs(lowest));
  std::size_t best = phases.size();
  for (std::size_t k = 0; k < phases.size(); ++k) {
    if (lhs[k] <= lowest + tie && (best == phases.size() || phases[k] < phases[best])) best = k;
  }
  return make_report(InequalityKind::trifonov_sweep, phases[best], lhs[best], tolerance);
}

double operator_trifonov_lhs(const StateSpec& s1, const StateSpec& s2) {
  return state_extended_product(analytic_moments(s1, 0.0).variance,
                                analytic_moments(s2, kHalfPi).variance,
                                analytic_moments(s2, 0.0).variance,
                                analytic_moments(s1, kHalfPi).variance);
}

nlohmann::ordered_json report_to_json(const InequalityReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(r.kind);
  j["phase"] = r.phase;
  j["lhs"] = r.lhs;
  j["bound"] = r.bound;
  j["margin"] = r.margin;
  j["satisfied"] = r.satisfied;
  j["stderr"] = r.std_error ? nlohmann::ordered_json(*r.std_error) : nullptr;
  j["tolerance"] = r.tolerance;
  if (r.std_error) j["error_propagation"] = "first-order delta method";
  return j;
}

InequalityReport report_from_json(const nlohmann::json& j) {
  try {
    InequalityReport r;
    r.kind = inequality_kind_from_string(j.at("kind").get<std::string>());
    r.phase = j.at("phase").get<double>();
    r.lhs = j.at("lhs").get<double>();
    r.bound = j.at("bound").get<double>();
    r.margin = j.at("margin").get<double>();
    r.satisfied = j.at("satisfied").get<bool>();
    if (j.contains("stderr") && !j.at("stderr").is_null()) {
      r.std_error = j.at("stderr").get<double>();
    }
    if (j.contains("tolerance")) r.tolerance = j.at("tolerance").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed inequality report: ") + e.what());
  }
}

}  // namespace tomo
