#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tomo/states.hpp"
#include "tomo/tomography.hpp"

namespace tomo {

/// Anything that can supply tomogram characteristic functions phi(r, phase):
/// a state (closed form) or a stored grid (row quadrature, or closed form when
/// the grid carries its originating state).
class TomogramSource {
 public:
  explicit TomogramSource(StateSpec state);
  explicit TomogramSource(std::shared_ptr<const TomogramGrid> grid);
  explicit TomogramSource(TomogramGrid grid)
      : TomogramSource(std::make_shared<const TomogramGrid>(std::move(grid))) {}

  /// phi(r, phase) for phases anywhere in [0, 2 pi).
  std::vector<cplx> characteristic(double r, std::span<const double> phases) const;

  /// Stored phases when backed by a grid.
  const std::vector<double>* grid_phases() const;

 private:
  std::optional<StateSpec> state_;
  std::shared_ptr<const TomogramGrid> grid_;
};

struct PurityOptions {
  std::size_t phases = 64;     // phase count when neither source is a grid
  double tail = 1e-10;         // |phi| threshold that fixes the r cutoff
  double tail_failure = 1e-8;  // truncation estimate that is an error
  double r_cap = 64.0;
  double target_change = 1e-10;
  double imaginary_limit = 1e-8;
};

/// (1 / 2 pi) int_0^{2 pi} d phase int_0^inf r dr phi_1 conj(phi_2): the
/// tomographic overlap functional, equal to one for a pure state with itself.
double purity_overlap(const TomogramSource& a, const TomogramSource& b,
                      const PurityOptions& opts = {});

enum class PurityClass { pure, mixed };

struct PurityResult {
  double overlap = 0.0;
  PurityClass classification = PurityClass::mixed;
  double tolerance = 1e-3;
};

inline constexpr double kPurityTolerance = 1e-3;

PurityResult purity_classify(const TomogramSource& w, double tolerance = kPurityTolerance,
                             const PurityOptions& opts = {});

std::string to_string(PurityClass c);
nlohmann::ordered_json purity_to_json(const PurityResult& r);

}  // namespace tomo
