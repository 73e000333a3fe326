#pragma once

#include <optional>
#include <vector>

#include "linalg.hpp"

namespace sdrecon {

/// Matrices (A, B, C, D) of a finite-dimensional LTI realization. Validates
/// conformability and finiteness on construction; immutable afterwards.
class Realization {
 public:
  Realization(Matrix a, Matrix b, Matrix c, Matrix d);

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  const Matrix& d() const { return d_; }

  Eigen::Index states() const { return a_.rows(); }
  Eigen::Index inputs() const { return d_.cols(); }
  Eigen::Index outputs() const { return d_.rows(); }
  bool is_siso() const { return inputs() == 1 && outputs() == 1; }

 private:
  Matrix a_, b_, c_, d_;
};

class ContinuousSS : public Realization {
 public:
  using Realization::Realization;

  /// Static gain with no state.
  static ContinuousSS gain(const Matrix& d);
};

class DiscreteSS : public Realization {
 public:
  DiscreteSS(Matrix a, Matrix b, Matrix c, Matrix d, double sample_period);

  double sample_period() const { return sample_period_; }

  static DiscreteSS gain(const Matrix& d, double sample_period);

 private:
  double sample_period_;
};

/// SISO rational transfer function in descending powers of z.
struct RationalTF {
  std::vector<double> num;
  std::vector<double> den;
  double sample_period = 1.0;

  RationalTF() : num{0.0}, den{1.0} {}
  RationalTF(std::vector<double> numerator, std::vector<double> denominator,
             double period = 1.0);

  Complex evaluate(Complex z) const;
  /// Degree difference deg(den) - deg(num), after stripping leading zeros.
  int relative_degree() const;
};

struct FrequencyResponse {
  CMatrix value;
  /// Set when the resolvent was close to singular (e^{jwh} near a pole).
  bool ill_conditioned = false;
};

// construction / conversion
DiscreteSS c2d_step_invariant(const ContinuousSS& sys, double h);
RationalTF to_tf(const DiscreteSS& sys);
/// Controllable-canonical realization; requires deg(num) <= deg(den).
DiscreteSS to_ss(const RationalTF& tf);

// interconnection: the result realizes g2 * g1 (g1 first).
ContinuousSS series(const ContinuousSS& g1, const ContinuousSS& g2);
DiscreteSS series(const DiscreteSS& g1, const DiscreteSS& g2);
DiscreteSS parallel(const DiscreteSS& g1, const DiscreteSS& g2, double sign = 1.0);
DiscreteSS scale(const DiscreteSS& g, double alpha);
/// Column concatenation of input-side gains: [g1, g2] acting on stacked inputs.
DiscreteSS hstack(const DiscreteSS& g1, const DiscreteSS& g2);

// analysis
FrequencyResponse freq_response(const DiscreteSS& sys, double omega);
FrequencyResponse freq_response_at(const Realization& sys, Complex point);
std::vector<Complex> poles(const Realization& sys);
std::vector<Complex> zeros(const Realization& sys);
bool is_stable(const DiscreteSS& sys);
bool is_stable(const ContinuousSS& sys);
double spectral_radius(const Matrix& a);

/// Removes uncontrollable then unobservable states (rank tolerance relative
/// to the largest column norm). Never applied implicitly.
DiscreteSS minimal_realization(const DiscreteSS& sys, double tol = 1e-8);

/// Zero-state response; returns outputs x inputs time series (one row per
/// output, one column per sample).
Matrix simulate(const DiscreteSS& sys, const Matrix& inputs);

/// Impulse response of a SISO system. Stops after max_len samples or once
/// |C| |x| drops below tol * peak.
std::vector<double> impulse_response(const DiscreteSS& sys, std::size_t max_len,
                                     double tol = 1e-13);

constexpr double kStabilityTolerance = 1e-9;

}  // namespace sdrecon
