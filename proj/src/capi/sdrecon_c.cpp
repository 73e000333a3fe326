#include "sdrecon/sdrecon.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "fir_minimax.hpp"
#include "fixtures.hpp"
#include "serialize.hpp"
#include "wav.hpp"
#include "workflow.hpp"

using namespace sdrecon;

struct sdr_spec {
  DesignSpec value;
};

struct sdr_filter {
  DiscreteSS value;
};

struct sdr_design {
  Design value;
};

struct sdr_audio {
  WavData value;
};

struct sdr_image {
  ImageGrid value;
};

namespace {

thread_local std::string last_error;

sdr_status fail(sdr_status code, const char* message) {
  last_error = message;
  return code;
}

// Runs body, mapping exceptions onto status codes.
template <typename Body>
sdr_status guarded(Body&& body) {
  try {
    body();
    last_error.clear();
    return SDR_OK;
  } catch (const DimensionError& e) {
    return fail(SDR_ERR_DIMENSION, e.what());
  } catch (const ParameterError& e) {
    return fail(SDR_ERR_ARGUMENT, e.what());
  } catch (const NumericalError& e) {
    return fail(SDR_ERR_NUMERICAL, e.what());
  } catch (const UnsupportedError& e) {
    return fail(SDR_ERR_UNSUPPORTED, e.what());
  } catch (const IoError& e) {
    return fail(SDR_ERR_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SDR_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SDR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SDR_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw ParameterError(std::string(what) + " must not be null");
}

Json parse(const char* text) {
  need(text, "json");
  return Json::parse(text);
}

Json complex_json(const std::vector<Complex>& values) {
  Json out = Json::array();
  for (const Complex& c : values) out.push_back({c.real(), c.imag()});
  return out;
}

std::vector<double> to_vector(const double* x, size_t n) {
  if (n > 0) need(x, "input array");
  return std::vector<double>(x, x + n);
}

}  // namespace

extern "C" {

const char* sdr_last_error(void) { return last_error.c_str(); }

const char* sdr_version(void) { return "0.1.0"; }

void sdr_string_free(char* s) { delete[] s; }

sdr_status sdr_spec_from_json(const char* json, sdr_spec** out) {
  return guarded([&] {
    need(out, "out");
    *out = new sdr_spec{spec_from_json(parse(json))};
  });
}

sdr_status sdr_spec_to_json(const sdr_spec* spec, char** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = copy_string(to_json(spec->value).dump());
  });
}

void sdr_spec_free(sdr_spec* spec) { delete spec; }

sdr_status sdr_spec_plant_json(const sdr_spec* spec, char** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = copy_string(to_json(assemble_plant(spec->value)).dump());
  });
}

sdr_status sdr_filter_from_json(const char* json, sdr_filter** out) {
  return guarded([&] {
    need(out, "out");
    *out = new sdr_filter{discrete_from_json(parse(json))};
  });
}

sdr_status sdr_filter_to_json(const sdr_filter* f, char** out) {
  return guarded([&] {
    need(f, "filter");
    need(out, "out");
    *out = copy_string(to_json(f->value).dump());
  });
}

void sdr_filter_free(sdr_filter* f) { delete f; }

sdr_status sdr_filter_shape(const sdr_filter* f, size_t* inputs, size_t* outputs, size_t* states,
                            double* sample_period) {
  return guarded([&] {
    need(f, "filter");
    if (inputs) *inputs = static_cast<size_t>(f->value.inputs());
    if (outputs) *outputs = static_cast<size_t>(f->value.outputs());
    if (states) *states = static_cast<size_t>(f->value.states());
    if (sample_period) *sample_period = f->value.sample_period();
  });
}

sdr_status sdr_filter_is_stable(const sdr_filter* f, int* stable) {
  return guarded([&] {
    need(f, "filter");
    need(stable, "stable");
    *stable = is_stable(f->value) ? 1 : 0;
  });
}

sdr_status sdr_filter_poles_zeros(const sdr_filter* f, char** out) {
  return guarded([&] {
    need(f, "filter");
    need(out, "out");
    Json j{{"poles", complex_json(poles(f->value))}};
    if (f->value.is_siso()) j["zeros"] = complex_json(zeros(f->value));
    *out = copy_string(j.dump());
  });
}

sdr_status sdr_filter_hinf_norm(const sdr_filter* f, double tol, double* norm) {
  return guarded([&] {
    need(f, "filter");
    need(norm, "norm");
    *norm = hinf_norm(f->value, tol);
  });
}

sdr_status sdr_filter_bode(const sdr_filter* f, const double* omega, size_t n,
                           double* magnitude_db, double* phase_rad) {
  return guarded([&] {
    need(f, "filter");
    if (!f->value.is_siso()) throw UnsupportedError("bode: SISO filters only");
    for (size_t i = 0; i < n; ++i) {
      const Complex g = freq_response(f->value, omega[i]).value(0, 0);
      if (magnitude_db) magnitude_db[i] = 20.0 * std::log10(std::max(std::abs(g), 1e-300));
      if (phase_rad) phase_rad[i] = std::arg(g);
    }
  });
}

sdr_status sdr_filter_impulse(const sdr_filter* f, size_t n, double* out) {
  return guarded([&] {
    need(f, "filter");
    need(out, "out");
    if (!f->value.is_siso()) throw UnsupportedError("impulse: SISO filters only");
    Matrix u = Matrix::Zero(1, static_cast<Eigen::Index>(n));
    if (n > 0) u(0, 0) = 1.0;
    const Matrix y = simulate(f->value, u);
    for (size_t i = 0; i < n; ++i) out[i] = y(0, static_cast<Eigen::Index>(i));
  });
}

sdr_status sdr_filter_apply(const sdr_filter* f, const double* x, size_t n, double* y) {
  return guarded([&] {
    need(f, "filter");
    need(y, "y");
    const SampledSignal in(to_vector(x, n), 1.0 / f->value.sample_period());
    const SampledSignal res = apply_filter(f->value, in);
    std::copy(res.samples.begin(), res.samples.end(), y);
  });
}

sdr_status sdr_filter_polyphase(const sdr_filter* k, int upsample, sdr_filter** out) {
  return guarded([&] {
    need(k, "filter");
    need(out, "out");
    *out = new sdr_filter{polyphase_decompose(k->value, upsample)};
  });
}

sdr_status sdr_filter_recompose(const sdr_filter* k_tilde, int upsample, sdr_filter** out) {
  return guarded([&] {
    need(k_tilde, "filter");
    need(out, "out");
    *out = new sdr_filter{polyphase_recompose(k_tilde->value, upsample)};
  });
}

sdr_status sdr_filter_from_fir(const double* taps, size_t n, int upsample, double h,
                               sdr_filter** out) {
  return guarded([&] {
    need(out, "out");
    *out = new sdr_filter{fir_polyphase(to_vector(taps, n), upsample, h)};
  });
}

sdr_status sdr_design_run(const sdr_spec* spec, double rel_tol, sdr_design** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new sdr_design{design_filter(spec->value, rel_tol)};
  });
}

sdr_status sdr_design_fir_minimax(const sdr_spec* spec, int taps, size_t grid_points,
                                  sdr_design** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    const FirMinimaxResult r = fir_minimax(spec->value, taps,
                                           frequency_grid(spec->value.h, static_cast<int>(grid_points)));
    SynthesisResult syn{r.controller, r.objective, 0.0, r.iterations, false};
    DiscreteSS k = polyphase_recompose(r.controller, spec->value.upsample_L);
    *out = new sdr_design{Design{std::move(syn), std::move(k)}};
  });
}

sdr_status sdr_design_gamma(const sdr_design* d, double* achieved, double* lower, int* iterations) {
  return guarded([&] {
    need(d, "design");
    if (achieved) *achieved = d->value.synthesis.gamma_achieved;
    if (lower) *lower = d->value.synthesis.gamma_lower;
    if (iterations) *iterations = d->value.synthesis.iterations;
  });
}

sdr_status sdr_design_controller(const sdr_design* d, sdr_filter** k_tilde) {
  return guarded([&] {
    need(d, "design");
    need(k_tilde, "out");
    *k_tilde = new sdr_filter{d->value.synthesis.controller};
  });
}

sdr_status sdr_design_interpolator(const sdr_design* d, sdr_filter** k) {
  return guarded([&] {
    need(d, "design");
    need(k, "out");
    *k = new sdr_filter{d->value.interpolator};
  });
}

sdr_status sdr_design_to_json(const sdr_design* d, char** out) {
  return guarded([&] {
    need(d, "design");
    need(out, "out");
    const SynthesisResult& s = d->value.synthesis;
    Json j{{"k_tilde", to_json(s.controller)},
           {"k", to_json(d->value.interpolator)},
           {"gamma_achieved", s.gamma_achieved},
           {"gamma_lower", s.gamma_lower},
           {"iterations", s.iterations},
           {"regularized", s.regularized}};
    *out = copy_string(j.dump());
  });
}

void sdr_design_free(sdr_design* d) { delete d; }

sdr_status sdr_frequency_grid(double h, size_t points, double* omega) {
  return guarded([&] {
    need(omega, "omega");
    const std::vector<double> g = frequency_grid(h, static_cast<int>(points));
    std::copy(g.begin(), g.end(), omega);
  });
}

sdr_status sdr_error_gain(const sdr_spec* spec, const sdr_filter* k_tilde, const double* omega,
                          size_t n, double* gains) {
  return guarded([&] {
    need(spec, "spec");
    need(k_tilde, "filter");
    need(gains, "gains");
    const std::vector<double> g = error_system_gain(spec->value, k_tilde->value, to_vector(omega, n));
    std::copy(g.begin(), g.end(), gains);
  });
}

sdr_status sdr_rect_overshoot(const sdr_filter* k, int upsample, int half_period, int periods,
                              double* value) {
  return guarded([&] {
    need(k, "filter");
    need(value, "overshoot");
    *value = rect_overshoot(k->value, upsample, half_period, periods);
  });
}

sdr_status sdr_simulate(const sdr_spec* spec, const sdr_filter* k, const double* w, size_t n,
                        double rate, double* y_p, double* e_c) {
  return guarded([&] {
    need(spec, "spec");
    need(k, "filter");
    const Reconstruction r =
        simulate_reconstruction(spec->value, k->value, SampledSignal(to_vector(w, n), rate));
    if (y_p) std::copy(r.y_p.samples.begin(), r.y_p.samples.end(), y_p);
    if (e_c) std::copy(r.e_c.samples.begin(), r.e_c.samples.end(), e_c);
  });
}

sdr_status sdr_baseline_taps(int which, double* taps, size_t cap, size_t* count) {
  return guarded([&] {
    std::vector<double> t;
    if (which == 0) {
      t = johnston_interpolator();
    } else if (which == 1) {
      t = equiripple_interpolator();
    } else {
      throw ParameterError("baseline: unknown id");
    }
    if (count) *count = t.size();
    if (cap > 0) need(taps, "taps");
    std::copy(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(std::min(cap, t.size())), taps);
  });
}

sdr_status sdr_spectrum(const double* x, size_t n, double rate, size_t fft_size, int window,
                        int decibels, double* out) {
  return guarded([&] {
    need(out, "out");
    const std::vector<double> s = spectrum(SampledSignal(to_vector(x, n), rate),
                                           window == 1 ? Window::hann : Window::rect, fft_size,
                                           decibels != 0);
    std::copy(s.begin(), s.end(), out);
  });
}

sdr_status sdr_synthetic_clip(double rate, double seconds, unsigned seed, double* out, size_t cap,
                              size_t* count) {
  return guarded([&] {
    const SampledSignal s = pluck_clip(rate, seconds, seed);
    if (count) *count = s.size();
    if (cap > 0) need(out, "out");
    std::copy(s.samples.begin(),
              s.samples.begin() + static_cast<std::ptrdiff_t>(std::min(cap, s.size())), out);
  });
}

sdr_status sdr_audio_read(const char* path, sdr_audio** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sdr_audio{read_wav(path)};
  });
}

sdr_status sdr_audio_create(int sample_rate, size_t channels, size_t frames, sdr_audio** out) {
  return guarded([&] {
    need(out, "out");
    if (sample_rate < 1 || channels < 1 || channels > 2) throw ParameterError("audio: bad shape");
    WavData w;
    w.sample_rate = sample_rate;
    w.channels.assign(channels, std::vector<double>(frames, 0.0));
    *out = new sdr_audio{std::move(w)};
  });
}

sdr_status sdr_audio_info(const sdr_audio* a, int* sample_rate, size_t* channels, size_t* frames) {
  return guarded([&] {
    need(a, "audio");
    if (sample_rate) *sample_rate = a->value.sample_rate;
    if (channels) *channels = a->value.channels.size();
    if (frames) *frames = a->value.frames();
  });
}

sdr_status sdr_audio_channel(const sdr_audio* a, size_t channel, double* out) {
  return guarded([&] {
    need(a, "audio");
    need(out, "out");
    if (channel >= a->value.channels.size()) throw ParameterError("audio: channel out of range");
    const auto& c = a->value.channels[channel];
    std::copy(c.begin(), c.end(), out);
  });
}

sdr_status sdr_audio_set_channel(sdr_audio* a, size_t channel, const double* in) {
  return guarded([&] {
    need(a, "audio");
    if (channel >= a->value.channels.size()) throw ParameterError("audio: channel out of range");
    auto& c = a->value.channels[channel];
    if (!c.empty()) need(in, "in");
    std::copy(in, in + c.size(), c.begin());
  });
}

sdr_status sdr_audio_write(const sdr_audio* a, const char* path) {
  return guarded([&] {
    need(a, "audio");
    need(path, "path");
    write_wav(path, a->value);
  });
}

void sdr_audio_free(sdr_audio* a) { delete a; }

sdr_status sdr_image_read(const char* path, sdr_image** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sdr_image{read_pgm(path)};
  });
}

sdr_status sdr_image_write(const sdr_image* img, const char* path) {
  return guarded([&] {
    need(img, "image");
    need(path, "path");
    write_pgm(path, img->value);
  });
}

sdr_status sdr_image_size(const sdr_image* img, int* rows, int* cols) {
  return guarded([&] {
    need(img, "image");
    if (rows) *rows = img->value.rows;
    if (cols) *cols = img->value.cols;
  });
}

sdr_status sdr_image_decimate(const sdr_image* img, int factor, sdr_image** out) {
  return guarded([&] {
    need(img, "image");
    need(out, "out");
    *out = new sdr_image{decimate(img->value, factor)};
  });
}

sdr_status sdr_image_lanczos(const sdr_image* img, int factor, sdr_image** out) {
  return guarded([&] {
    need(img, "image");
    need(out, "out");
    *out = new sdr_image{lanczos_resize(img->value, factor)};
  });
}

sdr_status sdr_image_sampled_data(const sdr_image* img, const sdr_spec* spec, const sdr_filter* k,
                                  sdr_image** out) {
  return guarded([&] {
    need(img, "image");
    need(spec, "spec");
    need(k, "filter");
    need(out, "out");
    *out = new sdr_image{sampled_data_resize(img->value, spec->value, k->value)};
  });
}

sdr_status sdr_image_psnr(const sdr_image* a, const sdr_image* b, double* value) {
  return guarded([&] {
    need(a, "image");
    need(b, "image");
    need(value, "psnr");
    *value = psnr(a->value, b->value);
  });
}

sdr_status sdr_image_ssim(const sdr_image* a, const sdr_image* b, double* value) {
  return guarded([&] {
    need(a, "image");
    need(b, "image");
    need(value, "ssim");
    *value = ssim(a->value, b->value);
  });
}

void sdr_image_free(sdr_image* img) { delete img; }

sdr_status sdr_oblique_filter(const char* fa_json, const char* p_json, char** out) {
  return guarded([&] {
    need(out, "out");
    const ConsistentFilter f =
        consistent_filter(continuous_from_json(parse(fa_json)), continuous_from_json(parse(p_json)));
    *out = copy_string(to_json(f).dump());
  });
}

sdr_status sdr_oblique_filter_beta(const char* fa_json, const char* p_json, char** out) {
  return guarded([&] {
    need(out, "out");
    const BetaFilter f = consistent_filter_via_beta(continuous_from_json(parse(fa_json)),
                                                    continuous_from_json(parse(p_json)));
    *out = copy_string(Json{{"k", to_json(f.k)}, {"beta", f.beta}, {"shift", f.shift}}.dump());
  });
}

sdr_status sdr_oblique_split(const char* tf_json, int trunc, char** out) {
  return guarded([&] {
    need(out, "out");
    const SplitFilter s = split_causal_anticausal(tf_from_json(parse(tf_json)), trunc);
    *out = copy_string(Json{{"causal", to_json(s.causal)},
                            {"anticausal", s.anticausal},
                            {"tail_energy", s.tail_energy}}
                           .dump());
  });
}

sdr_status sdr_oblique_locus(const char* fa_json, const char* p_base_json, double d_lo, double d_hi,
                             int steps, char** csv, double* crossing, int* has_crossing) {
  return guarded([&] {
    need(csv, "csv");
    const ContinuousSS fa = continuous_from_json(parse(fa_json));
    const ContinuousSS base = continuous_from_json(parse(p_base_json));
    auto family = [&base](double d) {
      return series(base, continuous_from_tf({1.0}, {1.0, d}));
    };
    const LocusResult r = pole_locus(fa, family, d_lo, d_hi, steps);
    *csv = copy_string(locus_csv(r));
    if (has_crossing) *has_crossing = r.crossing ? 1 : 0;
    if (crossing && r.crossing) *crossing = *r.crossing;
  });
}

sdr_status sdr_sine_box(int per_period, double* consistent, double* midvalue) {
  return guarded([&] {
    const PiecewiseComparison c = sine_box_comparison(per_period);
    if (consistent) *consistent = c.consistent_error;
    if (midvalue) *midvalue = c.midvalue_error;
  });
}

}  // extern "C"
