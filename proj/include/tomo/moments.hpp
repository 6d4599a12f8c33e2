#pragma once

#include <span>

#include "tomo/states.hpp"
#include "tomo/tomography.hpp"

namespace tomo {

// Moments of stored tomogram rows use Simpson's rule on the uniform grid.
// Rows must integrate to one within 1e-6.  A row whose +-6 sigma range spills
// past the grid window is rejected when the estimated tail mass exceeds 1e-6.

double tomographic_mean(std::span<const double> row, const XGrid& grid);
double tomographic_variance(std::span<const double> row, const XGrid& grid);

/// Mean and variance of the row at `phase`; phases in [pi, 2 pi) use the
/// mirrored row, which negates the mean.
MomentSet tomographic_moments(const TomogramGrid& w, double phase);

/// Moments straight from the state by adaptive quadrature of its tomogram,
/// independent of any stored grid.
MomentSet direct_moments(const StateSpec& state, double phase);

}  // namespace tomo
