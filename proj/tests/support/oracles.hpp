#pragma once

// Test-only oracles. Eigen is used here as an independent reference
// implementation; the library itself must not depend on it.

#include <functional>

#include "spatialsim/geometry.hpp"
#include "spatialsim/matrix.hpp"

namespace spatialsim::testing {

// Best similarity fit (Umeyama) of the sample's positions onto the
// reference's positions, returning the largest per-object residual in
// reference units. Small for genuine similarity copies, large otherwise.
double align_residual(const Configuration& sample, const Configuration& ref);

// Central finite difference of f with respect to (*param)(r, c).
double finite_diff(const std::function<double()>& f, Matrix* param, int r, int c,
                   double h = 1e-6);

}  // namespace spatialsim::testing
