#pragma once

#include <optional>
#include <vector>

#include "lifting.hpp"

namespace sdrecon {

/// Bilinear map z = (alpha + s) / (alpha - s) between the unit disk and the
/// left half plane. Frequency responses agree at s = j alpha tan(theta / 2).
ContinuousSS bilinear_to_continuous(const DiscreteSS& sys, double alpha = 1.0);
DiscreteSS bilinear_to_discrete(const ContinuousSS& sys, double sample_period,
                                double alpha = 1.0);

/// H-infinity norm of a stable system, relative accuracy `tol`. The
/// frequency (rad/sample for discrete) where the peak was found goes to
/// `peak_frequency` if provided.
double hinf_norm(const DiscreteSS& sys, double tol = 1e-6, double* peak_frequency = nullptr);
double hinf_norm(const ContinuousSS& sys, double tol = 1e-6, double* peak_frequency = nullptr);

struct SynthesisResult {
  DiscreteSS controller;
  double gamma_achieved = 0.0;
  double gamma_lower = 0.0;
  int iterations = 0;
  /// Set when D12 or D21 needed an epsilon augmentation to meet rank conditions.
  bool regularized = false;
};

struct SynthesisAttempt {
  std::optional<DiscreteSS> controller;  ///< empty when gamma is infeasible
  bool regularized = false;
  std::string reason;  ///< why gamma was rejected
};

/// Central suboptimal controller for closed-loop norm < gamma.
SynthesisAttempt synthesize(const GeneralizedPlant& plant, double gamma);

/// Bisection on gamma. Throws NumericalError when no feasible gamma is found
/// below 1e6 times the open-loop norm.
SynthesisResult gamma_iterate(const GeneralizedPlant& plant, double rel_tol = 1e-3);

/// Frequency-wise lower bound max_w inf_Q sigma_max(P11 + P12 Q P21) for a
/// stable plant with P22 = 0.
double pointwise_lower_bound(const GeneralizedPlant& plant, const std::vector<double>& grid);

}  // namespace sdrecon
