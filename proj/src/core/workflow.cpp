#include "workflow.hpp"

#include "fir_minimax.hpp"

#include <algorithm>
#include <cmath>

namespace sdrecon {

ContinuousSS two_pole_generator(double time_constant) {
  if (!(time_constant > 0.0)) throw ParameterError("two_pole_generator: T must be positive");
  const double a2 = 0.1 * time_constant * time_constant;
  const double a1 = 1.1 * time_constant;
  Matrix a(2, 2), b(2, 1), c(1, 2);
  a << 0.0, 1.0, -1.0 / a2, -a1 / a2;
  b << 0.0, 1.0 / a2;
  c << 1.0, 0.0;
  return ContinuousSS(a, b, c, Matrix::Zero(1, 1));
}

DesignSpec lowpass_spec(double time_constant, int upsample, int delay, int fsfh_n, int delay_sub) {
  DesignSpec spec{two_pole_generator(time_constant), ContinuousSS::gain(Matrix::Ones(1, 1)),
                  1.0, upsample, delay, fsfh_n, delay_sub};
  spec.validate();
  return spec;
}

Design design_filter(const DesignSpec& spec, double rel_tol) {
  SynthesisResult syn = gamma_iterate(assemble_plant(spec), rel_tol);
  DiscreteSS k = polyphase_recompose(syn.controller, spec.upsample_L);
  return Design{std::move(syn), std::move(k)};
}

DiscreteSS fir_polyphase(const std::vector<double>& taps, int upsample, double h) {
  if (taps.empty()) throw ParameterError("fir_polyphase: no taps");
  Matrix coeff(1, static_cast<Eigen::Index>(taps.size()));
  for (std::size_t i = 0; i < taps.size(); ++i) coeff(0, static_cast<Eigen::Index>(i)) = taps[i];
  return polyphase_decompose(fir_realization(coeff, h / upsample), upsample);
}

SampledSignal interpolate(const SampledSignal& slow, int upsample, const DiscreteSS& k) {
  return apply_filter(k, sdrecon::upsample(slow, upsample));
}

SampledSignal interpolate_fir(const SampledSignal& slow, int upsample, const std::vector<double>& taps) {
  return apply_fir(taps, sdrecon::upsample(slow, upsample));
}

double dc_gain(const DiscreteSS& k) {
  const FrequencyResponse r = freq_response(k, 0.0);
  if (r.ill_conditioned) throw NumericalError("dc_gain: pole at z = 1");
  return r.value(0, 0).real();
}

double rect_overshoot(const DiscreteSS& k, int upsample, int half_period, int periods,
                      double amplitude) {
  const SampledSignal w = rect_wave(2 * half_period, amplitude,
                                    static_cast<std::size_t>(2 * half_period * periods));
  const SampledSignal y = interpolate(w, upsample, k);
  return overshoot(y, dc_gain(k) * amplitude / upsample);
}

double band_magnitude(const SampledSignal& x, double f_lo, double f_hi, std::size_t fft_size) {
  const std::vector<double> mag = spectrum(x, Window::hann, fft_size);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double f = static_cast<double>(i) * x.rate / static_cast<double>(fft_size);
    if (f >= f_lo && f <= f_hi) {
      sum += mag[i];
      ++count;
    }
  }
  if (count == 0) throw ParameterError("band_magnitude: band holds no FFT bins");
  return sum / static_cast<double>(count);
}

std::vector<double> interpolator_taps(const DiscreteSS& k, std::size_t max_len) {
  if (!is_stable(k)) throw NumericalError("interpolator_taps: K is unstable");
  return impulse_response(k, max_len, 1e-12);
}

ImageGrid sampled_data_resize(const ImageGrid& img, const DesignSpec& spec, const DiscreteSS& k) {
  const long shift = spec.total_delay() * spec.upsample_L / spec.fsfh_N;
  return sampled_data_resize(img, spec.upsample_L, interpolator_taps(k), shift);
}

}  // namespace sdrecon
