#pragma once

#include <vector>

#include "hinf.hpp"
#include "image.hpp"
#include "signal.hpp"

namespace sdrecon {

/// 1 / ((T s + 1)(0.1 T s + 1)) in controllable form.
ContinuousSS two_pole_generator(double time_constant);

/// Signal generator two_pole_generator(T), P = 1, h = 1.
DesignSpec lowpass_spec(double time_constant, int upsample, int delay, int fsfh_n,
                        int delay_sub = 0);

struct Design {
  SynthesisResult synthesis;
  DiscreteSS interpolator;  ///< K at period h / L
};

Design design_filter(const DesignSpec& spec, double rel_tol = 1e-3);

/// Polyphase form of an FIR interpolator given by its taps at period h / L.
DiscreteSS fir_polyphase(const std::vector<double>& taps, int upsample, double h);

/// Upsample by `upsample` and run K at the fast rate.
SampledSignal interpolate(const SampledSignal& slow, int upsample, const DiscreteSS& k);
SampledSignal interpolate_fir(const SampledSignal& slow, int upsample, const std::vector<double>& taps);

/// Overshoot of K's response to a slow-rate rectangular wave (half_period
/// samples high, then low), relative to the DC level K(1) * amplitude / L.
double rect_overshoot(const DiscreteSS& k, int upsample, int half_period, int periods,
                      double amplitude = 1.0);

double dc_gain(const DiscreteSS& k);

/// Mean spectral magnitude of x between f_lo and f_hi (Hz), Hann window.
double band_magnitude(const SampledSignal& x, double f_lo, double f_hi, std::size_t fft_size);

/// Impulse response of K long enough to hold its memory.
std::vector<double> interpolator_taps(const DiscreteSS& k, std::size_t max_len = 512);

/// Image resize with a designed interpolator. floor(total_delay * L / N)
/// output samples of latency are removed. A held sample best matches the
/// centre of its hold interval, so a delay_sub of N / (2 L) puts that centre
/// on the source grid.
ImageGrid sampled_data_resize(const ImageGrid& img, const DesignSpec& spec, const DiscreteSS& k);

}  // namespace sdrecon
