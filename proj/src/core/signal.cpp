#include "signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace sdrecon {

SampledSignal::SampledSignal(std::vector<double> values, double sample_rate, long origin)
    : samples(std::move(values)), rate(sample_rate), origin_index(origin) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ParameterError("signal: rate must be positive");
  for (double v : samples) {
    if (!std::isfinite(v)) throw ParameterError("signal: non-finite sample");
  }
}

double SampledSignal::energy() const {
  double e = 0.0;
  for (double v : samples) e += v * v;
  return e;
}

SampledSignal upsample(const SampledSignal& x, int factor) {
  if (factor < 1) throw ParameterError("upsample: factor must be >= 1");
  std::vector<double> y(x.size() * static_cast<std::size_t>(factor), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) y[i * static_cast<std::size_t>(factor)] = x.samples[i];
  return SampledSignal(std::move(y), x.rate * factor, x.origin_index * factor);
}

SampledSignal downsample(const SampledSignal& x, int factor) {
  if (factor < 1) throw ParameterError("downsample: factor must be >= 1");
  std::vector<double> y;
  y.reserve(x.size() / static_cast<std::size_t>(factor) + 1);
  for (std::size_t i = 0; i < x.size(); i += static_cast<std::size_t>(factor)) {
    y.push_back(x.samples[i]);
  }
  return SampledSignal(std::move(y), x.rate / factor, x.origin_index / factor);
}

SampledSignal apply_filter(const DiscreteSS& sys, const SampledSignal& x, long latency) {
  if (!sys.is_siso()) throw UnsupportedError("apply_filter: SISO filters only");
  std::vector<double> y(x.size());
  Vector state = Vector::Zero(sys.states());
  const Matrix& a = sys.a();
  const Vector b = sys.b().col(0);
  const Eigen::RowVectorXd c = sys.c().row(0);
  const double d = sys.d()(0, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = x.samples[i];
    y[i] = c.dot(state) + d * u;
    state = a * state + b * u;
  }
  SampledSignal out;
  out.samples = std::move(y);
  out.rate = x.rate;
  out.origin_index = x.origin_index + latency;
  return out;
}

SampledSignal apply_fir(const std::vector<double>& taps, const SampledSignal& x, long latency) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double acc = 0.0;
    const std::size_t span = std::min(taps.size(), i + 1);
    for (std::size_t j = 0; j < span; ++j) acc += taps[j] * x.samples[i - j];
    y[i] = acc;
  }
  SampledSignal out;
  out.samples = std::move(y);
  out.rate = x.rate;
  out.origin_index = x.origin_index + latency;
  return out;
}

SampledSignal rect_wave(int period, double amplitude, std::size_t length, double rate) {
  if (period < 2) throw ParameterError("rect_wave: period must be >= 2");
  std::vector<double> y(length);
  for (std::size_t i = 0; i < length; ++i) {
    y[i] = (static_cast<int>(i % static_cast<std::size_t>(period)) < period / 2) ? amplitude
                                                                                 : -amplitude;
  }
  return SampledSignal(std::move(y), rate);
}

SampledSignal sinusoid(double omega, double rate, std::size_t length, double amplitude,
                       double phase) {
  std::vector<double> y(length);
  for (std::size_t i = 0; i < length; ++i) {
    y[i] = amplitude * std::sin(omega * static_cast<double>(i) / rate + phase);
  }
  return SampledSignal(std::move(y), rate);
}

namespace {

int fast_per_period(const DesignSpec& spec, double rate) {
  const double r = rate * spec.h;
  const long ratio = std::lround(r);
  if (ratio < 1 || std::abs(r - static_cast<double>(ratio)) > 1e-9 * r) {
    throw ParameterError("simulation: rate * h must be a positive integer");
  }
  if (ratio % spec.upsample_L != 0) {
    throw ParameterError("simulation: rate * h must be a multiple of L");
  }
  return static_cast<int>(ratio);
}

Matrix as_row(const std::vector<double>& v) {
  Matrix m(1, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = v[i];
  return m;
}

}  // namespace

Reconstruction simulate_reconstruction(const DesignSpec& spec, const DiscreteSS& k,
                                       const SampledSignal& w) {
  spec.validate();
  if (!k.is_siso()) throw DimensionError("simulate_reconstruction: K must be SISO");
  const int per = fast_per_period(spec, w.rate);
  const int hold = per / spec.upsample_L;
  const double dt = 1.0 / w.rate;
  if (std::abs(k.sample_period() - spec.h / spec.upsample_L) > 1e-9 * spec.h) {
    throw ParameterError("simulate_reconstruction: K must run at period h / L");
  }
  const std::size_t total = w.size();

  const Matrix yc = simulate(c2d_step_invariant(spec.f_model, dt), as_row(w.samples));
  const std::size_t slow = (total + static_cast<std::size_t>(per) - 1) / static_cast<std::size_t>(per);
  Matrix up = Matrix::Zero(1, static_cast<Eigen::Index>(slow) * spec.upsample_L);
  for (std::size_t s = 0; s < slow; ++s) {
    up(0, static_cast<Eigen::Index>(s) * spec.upsample_L) = yc(0, static_cast<Eigen::Index>(s * per));
  }
  const Matrix v = simulate(k, up);
  Matrix held(1, static_cast<Eigen::Index>(total));
  for (std::size_t i = 0; i < total; ++i) held(0, static_cast<Eigen::Index>(i)) = v(0, static_cast<Eigen::Index>(i / hold));
  const Matrix yp = simulate(c2d_step_invariant(spec.p_model, dt), held);

  Reconstruction out;
  out.y_c = SampledSignal(std::vector<double>(yc.data(), yc.data() + total), w.rate, w.origin_index);
  out.y_p = SampledSignal(std::vector<double>(yp.data(), yp.data() + total), w.rate, w.origin_index);
  std::vector<double> e(total);
  const long lag_scaled = spec.total_delay() * per;
  if (lag_scaled % spec.fsfh_N != 0) {
    throw ParameterError("simulate_reconstruction: delay_sub does not fall on a simulation sample");
  }
  const auto lag = static_cast<std::size_t>(lag_scaled / spec.fsfh_N);
  for (std::size_t i = 0; i < total; ++i) {
    const double delayed = i >= lag ? out.y_c.samples[i - lag] : 0.0;
    e[i] = delayed - out.y_p.samples[i];
  }
  out.e_c = SampledSignal(std::move(e), w.rate, w.origin_index);
  return out;
}

SampledSignal simulate_lifted_error(const DesignSpec& spec, const DiscreteSS& k_tilde,
                                    const SampledSignal& w) {
  const int per = fast_per_period(spec, w.rate);
  if (per != spec.fsfh_N) throw ParameterError("simulate_lifted_error: rate must be N / h");
  const GeneralizedPlant plant = assemble_plant(spec);
  const DiscreteSS closed = close_loop(plant, k_tilde);
  const std::size_t n = static_cast<std::size_t>(per);
  const std::size_t blocks = (w.size() + n - 1) / n;
  Matrix lifted = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(blocks));
  for (std::size_t i = 0; i < w.size(); ++i) {
    lifted(static_cast<Eigen::Index>(i % n), static_cast<Eigen::Index>(i / n)) = w.samples[i];
  }
  const Matrix e = simulate(closed, lifted);
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[i] = e(static_cast<Eigen::Index>(i % n), static_cast<Eigen::Index>(i / n));
  }
  return SampledSignal(std::move(out), w.rate, w.origin_index);
}

void fft(std::vector<Complex>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) throw ParameterError("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const Complex wl = std::polar(1.0, ang);
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const Complex u = data[i + j];
        const Complex v = data[i + j + len / 2] * w;
        data[i + j] = u + v;
        data[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    for (Complex& c : data) c /= static_cast<double>(n);
  }
}

std::vector<double> spectrum(const SampledSignal& x, Window window, std::size_t n,
                             bool decibels) {
  std::vector<Complex> buf(n, Complex(0.0, 0.0));
  const std::size_t used = std::min(n, x.size());
  for (std::size_t i = 0; i < used; ++i) {
    double w = 1.0;
    if (window == Window::hann && used > 1) {
      w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(used - 1));
    }
    buf[i] = x.samples[i] * w;
  }
  fft(buf);
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) {
    mag[k] = std::abs(buf[k]);
    if (decibels) mag[k] = 20.0 * std::log10(std::max(mag[k], 1e-300));
  }
  return mag;
}

double overshoot(const SampledSignal& y, double level) {
  if (level == 0.0) throw ParameterError("overshoot: level must be nonzero");
  double peak = 0.0;
  for (double v : y.samples) peak = std::max(peak, std::abs(v));
  return std::max(0.0, peak / std::abs(level) - 1.0);
}

SampledSignal pluck_clip(double rate, double seconds, unsigned seed) {
  if (!(rate > 0.0) || !(seconds > 0.0)) throw ParameterError("pluck_clip: bad parameters");
  // Each note needs a delay line of at least two samples.
  if (rate < 2.0 * 987.77) throw ParameterError("pluck_clip: rate must be at least 1976 Hz");
  const std::size_t total = static_cast<std::size_t>(rate * seconds);
  if (total < 10) throw ParameterError("pluck_clip: clip shorter than 10 samples");
  std::mt19937 gen(seed);
  auto uniform = [&gen]() { return static_cast<double>(gen()) / 4294967295.0 * 2.0 - 1.0; };
  std::vector<double> y(total, 0.0);
  const double notes[] = {196.0, 246.94, 293.66, 392.0, 493.88, 587.33, 783.99, 987.77};
  const std::size_t spacing = total / 10;
  for (std::size_t n = 0; n < 8; ++n) {
    const std::size_t start = n * spacing;
    const std::size_t delay = static_cast<std::size_t>(rate / notes[n]);
    std::vector<double> line(delay);
    for (double& v : line) v = uniform();
    std::size_t pos = 0;
    for (std::size_t i = start; i < total; ++i) {
      const double cur = line[pos];
      const double next = line[(pos + 1) % delay];
      y[i] += 0.3 * cur;
      line[pos] = 0.998 * 0.5 * (cur + next);
      pos = (pos + 1) % delay;
    }
  }
  // Hi-hat-like bursts: exponentially decaying white noise.
  for (std::size_t t = spacing / 2; t < total; t += spacing) {
    const std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(0.08 * rate), total - t);
    for (std::size_t i = 0; i < len; ++i) {
      y[t + i] += 0.15 * uniform() * std::exp(-static_cast<double>(i) / (0.015 * rate));
    }
  }
  for (double& v : y) v += 0.003 * uniform();
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : y) v *= 0.9 / peak;
  }
  return SampledSignal(std::move(y), rate);
}

}  // namespace sdrecon
