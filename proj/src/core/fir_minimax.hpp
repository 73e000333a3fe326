#pragma once

#include <vector>

#include "lifting.hpp"

namespace sdrecon {

struct FirMinimaxResult {
  DiscreteSS controller;  ///< 1 input, L outputs, taps - 1 delay states
  Matrix coefficients;    ///< L x taps, column t multiplies z^-t
  double objective = 0.0;  ///< max over the grid of sigma_max of the error system
  int iterations = 0;
  bool converged = false;
};

struct FirMinimaxOptions {
  int max_iterations = 5000;
  double tau_start = 1e-1;  ///< soft-max temperature relative to the objective
  double tau_end = 1e-4;
};

/// Minimax FIR design over a frequency grid, independent of the Riccati route.
FirMinimaxResult fir_minimax(const DesignSpec& spec, int taps, const std::vector<double>& grid,
                             const FirMinimaxOptions& options = {});

/// State-space realization of sum_t coefficients(:, t) z^-t.
DiscreteSS fir_realization(const Matrix& coefficients, double sample_period);

}  // namespace sdrecon
