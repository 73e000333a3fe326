#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "signal.hpp"

namespace sdrecon {

/// Consistent-reconstruction filter for the pair (fa, p) at h = 1.
struct ConsistentFilter {
  RationalTF k_op;    ///< 1 / (z H_d(z)), descending powers of z
  RationalTF h_d;     ///< step-invariant discretization of fa * p
  std::vector<double> delta1;  ///< prod (1 - e^{a} z^-1) over poles of fa, ascending in z^-1
  std::vector<double> delta2;  ///< same for p
  std::vector<double> beta;    ///< beta(0..n1+n2+1)
  std::vector<Complex> unstable_poles;  ///< poles of k_op with |z| >= 1
  int causality_shift = 1;     ///< the extra z^-1 applied to 1 / H_d
};

ConsistentFilter consistent_filter(const ContinuousSS& fa, const ContinuousSS& p);

struct BetaFilter {
  RationalTF k;  ///< Delta1 Delta2 / sum beta(k) z^-k, normalized (see shift)
  std::vector<double> beta;
  /// Leading zero samples of beta removed before forming the denominator.
  int shift = 0;
};

/// Same filter built from sampled beta(t), obtained by fast-rate simulation
/// of the hold response of fa * p convolved with the localization FIR.
BetaFilter consistent_filter_via_beta(const ContinuousSS& fa, const ContinuousSS& p,
                                      int fast_factor = 256);

struct SplitFilter {
  RationalTF causal;  ///< stable part, descending powers of z
  /// Coefficients of z^k, k = 0 .. trunc-1 (time indices 0, -1, -2, ...).
  std::vector<double> anticausal;
  double tail_energy = 0.0;  ///< energy of the dropped anticausal taps
};

/// Partial-fraction split by pole magnitude. Refuses poles within 1e-9 of
/// the unit circle.
SplitFilter split_causal_anticausal(const RationalTF& f, int trunc = 31);

struct LocusPoint {
  double d;
  Complex pole;
};

struct LocusResult {
  std::vector<LocusPoint> points;
  /// Parameter value where the dominant pole crosses the unit circle.
  std::optional<double> crossing;
};

/// Dominant pole of the consistent filter built from p_family(d).
LocusResult pole_locus(const ContinuousSS& fa,
                       const std::function<ContinuousSS(double)>& p_family, double d_lo,
                       double d_hi, int steps);

/// Inner products <y_c - y_p, phi(. - k)> with phi(t) = f(-t), f the
/// impulse response of fa, by trapezoidal quadrature at the signal rate.
std::vector<double> consistency_residual(const SampledSignal& y_c, const SampledSignal& y_p,
                                         const ContinuousSS& fa, long k_first, long k_last);

struct PiecewiseComparison {
  double consistent_error;  ///< squared L2 error of the sample-and-hold reconstruction
  double midvalue_error;    ///< squared L2 error of the +-1/2 reconstruction
  std::vector<double> consistent_sample_mismatch;  ///< y(kh) - sin(kh)
};

/// sin t on [0, 4h], h = pi/2: ideal sampling with a box reconstruction
/// kernel versus the half-amplitude two-level fit. Quadrature at
/// `per_period` points per h.
PiecewiseComparison sine_box_comparison(int per_period = 256);

}  // namespace sdrecon
