#pragma once

#include <vector>

#include "lifting.hpp"

namespace sdrecon {

/// Uniformly sampled real signal. Sample i sits at time (i - origin_index) / rate.
struct SampledSignal {
  std::vector<double> samples;
  double rate = 1.0;
  long origin_index = 0;

  SampledSignal() = default;
  SampledSignal(std::vector<double> values, double sample_rate, long origin = 0);

  std::size_t size() const { return samples.size(); }
  double time_of(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(origin_index)) / rate;
  }
  double energy() const;  ///< sum of squares
};

SampledSignal upsample(const SampledSignal& x, int factor);
SampledSignal downsample(const SampledSignal& x, int factor);

/// Zero-initial-state recursion of a SISO filter whose period is 1/x.rate.
/// `latency` samples of known delay are folded into origin_index so that
/// aligned comparisons stay correct. Unstable filters run anyway; check
/// is_stable separately if that matters.
SampledSignal apply_filter(const DiscreteSS& sys, const SampledSignal& x, long latency = 0);

/// Direct-form FIR convolution, same length as x.
SampledSignal apply_fir(const std::vector<double>& taps, const SampledSignal& x, long latency = 0);

/// +-amplitude alternating half periods, starting positive.
SampledSignal rect_wave(int period, double amplitude, std::size_t length, double rate = 1.0);
SampledSignal sinusoid(double omega, double rate, std::size_t length, double amplitude = 1.0,
                       double phase = 0.0);

struct Reconstruction {
  SampledSignal y_p;  ///< reconstructed analog output at the fast rate
  SampledSignal e_c;  ///< y_c(t - m h) - y_p(t) at the fast rate
  SampledSignal y_c;  ///< F output at the fast rate, not delayed
};

/// Fast-rate simulation of F -> sample(h) -> up L -> K -> hold(h/L) -> P and
/// the delayed error. w.rate * h must be an integer multiple of L, and the
/// sub-period delay must land on a simulation sample. K runs at
/// period h/L.
Reconstruction simulate_reconstruction(const DesignSpec& spec, const DiscreteSS& k,
                                       const SampledSignal& w);

/// Lifted single-rate model: drives the closed generalized plant with the
/// lifted fast-rate input (w.rate = N / h) and unlifts the error.
SampledSignal simulate_lifted_error(const DesignSpec& spec, const DiscreteSS& k_tilde,
                                    const SampledSignal& w);

enum class Window { rect, hann };

/// Magnitude of the n-point FFT (n a power of two; x zero padded or
/// truncated). Returns n/2 + 1 bins.
std::vector<double> spectrum(const SampledSignal& x, Window window, std::size_t n,
                             bool decibels = false);

/// In-place radix-2 FFT; size must be a power of two.
void fft(std::vector<Complex>& data, bool inverse = false);

/// Peak |y| beyond |level|, relative to |level|; 0 when |y| never exceeds it.
double overshoot(const SampledSignal& y, double level);

/// Synthetic wide-band test clip: a few Karplus-Strong plucked strings with
/// noise-burst excitation plus a faint cymbal-like noise floor. Deterministic
/// for a given seed.
SampledSignal pluck_clip(double rate, double seconds, unsigned seed = 1);

}  // namespace sdrecon
