#pragma once

#include <vector>

#include "statespace.hpp"

namespace sdrecon {

/// Design parameters of the sampled-data reconstruction problem.
struct DesignSpec {
  ContinuousSS f_model;  ///< signal generator, strictly proper
  ContinuousSS p_model;  ///< post filter after the hold
  double h = 1.0;        ///< sampling period of the incoming data
  int upsample_L = 2;
  int delay_m = 0;  ///< preview, in periods h
  int fsfh_N = 10;  ///< fast-sample/fast-hold factor, multiple of upsample_L
  /// Extra reference delay in units of h / N, added to delay_m periods.
  int delay_sub = 0;

  /// Throws ParameterError on any violated invariant.
  void validate() const;
  int hold_length() const { return fsfh_N / upsample_L; }
  /// Total reference delay in units of h / N.
  long total_delay() const { return static_cast<long>(delay_m) * fsfh_N + delay_sub; }
};

/// Partitioned discrete two-port: inputs [w; u], outputs [e; y].
class GeneralizedPlant {
 public:
  GeneralizedPlant(DiscreteSS system, Eigen::Index n_w, Eigen::Index n_u, Eigen::Index n_e,
                   Eigen::Index n_y);

  const DiscreteSS& system() const { return system_; }
  Eigen::Index n_w() const { return n_w_; }
  Eigen::Index n_u() const { return n_u_; }
  Eigen::Index n_e() const { return n_e_; }
  Eigen::Index n_y() const { return n_y_; }

  Matrix a() const { return system_.a(); }
  Matrix b1() const { return system_.b().leftCols(n_w_); }
  Matrix b2() const { return system_.b().rightCols(n_u_); }
  Matrix c1() const { return system_.c().topRows(n_e_); }
  Matrix c2() const { return system_.c().bottomRows(n_y_); }
  Matrix d11() const { return system_.d().topLeftCorner(n_e_, n_w_); }
  Matrix d12() const { return system_.d().topRightCorner(n_e_, n_u_); }
  Matrix d21() const { return system_.d().bottomLeftCorner(n_y_, n_w_); }
  Matrix d22() const { return system_.d().bottomRightCorner(n_y_, n_u_); }

 private:
  DiscreteSS system_;
  Eigen::Index n_w_, n_u_, n_e_, n_y_;
};

struct LiftedBlocks {
  DiscreteSS f_n;  ///< N-input / N-output lifted F
  DiscreteSS p_n;  ///< N-input / N-output lifted P
  Matrix h_mat;    ///< N x L, diag of ones-columns of height N/L
  Matrix s_mat;    ///< 1 x N selector [1, 0, ..., 0]
};

/// Fast-sample/fast-hold lifting of `sys` over one period h with N
/// subintervals. Block (i, j) of the feedthrough is D on the diagonal and
/// C A^{i-1-j} B below it.
DiscreteSS fsfh_lift(const ContinuousSS& sys, double h, int n);

LiftedBlocks lift_blocks(const DesignSpec& spec);

/// Polyphase decomposition: a SISO filter running at period T after an
/// L-fold upsampler becomes a 1-input / L-output filter at period L*T.
DiscreteSS polyphase_decompose(const DiscreteSS& k, int upsample);

/// Inverse of polyphase_decompose: K(z) = [1, z^-1, ..., z^{-L+1}] Kt(z^L).
DiscreteSS polyphase_recompose(const DiscreteSS& k_tilde, int upsample);

/// Lifted form of a delay of `delay` samples on a stream at period h / n:
/// n inputs, n outputs, `delay` states holding the most recent samples.
DiscreteSS lifted_delay(int n, long delay, double h);

/// Generalized plant with blocks [[z^-m F_N, -P_N H], [S F_N, 0]]; the
/// reference delay also includes delay_sub fast samples.
GeneralizedPlant assemble_plant(const DesignSpec& spec);

/// Lower linear fractional closure u = K y.
DiscreteSS close_loop(const GeneralizedPlant& plant, const DiscreteSS& controller);

/// Largest singular value of T_N(e^{jwh}) at each grid frequency.
std::vector<double> error_system_gain(const DesignSpec& spec, const DiscreteSS& k_tilde,
                                      const std::vector<double>& omega_grid);

/// Mixed linear/logarithmic grid on [0, pi/h], endpoints included, sorted.
std::vector<double> frequency_grid(double h, int points = 512);

}  // namespace sdrecon
