#ifndef SDRECON_SDRECON_H
#define SDRECON_SDRECON_H

#include <stddef.h>

#if defined(SDR_BUILDING_LIBRARY)
#define SDR_API __attribute__((visibility("default")))
#else
#define SDR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sdr_status {
  SDR_OK = 0,
  SDR_ERR_ARGUMENT = 1,    /* invalid parameter or malformed document */
  SDR_ERR_DIMENSION = 2,   /* inconsistent sizes */
  SDR_ERR_NUMERICAL = 3,   /* solver failure, unstable result, singular system */
  SDR_ERR_UNSUPPORTED = 4, /* valid request outside what is implemented */
  SDR_ERR_IO = 5,
  SDR_ERR_INTERNAL = 6
} sdr_status;

/* Message for the last failing call on this thread; never NULL. */
SDR_API const char* sdr_last_error(void);
SDR_API const char* sdr_version(void);

/* Every char* returned through an out parameter is released with this. */
SDR_API void sdr_string_free(char* s);

/* ---- design specification ---------------------------------------------- */

typedef struct sdr_spec sdr_spec;

/* {"f_model", "p_model", "h", "L", "m", "N", "delay_sub"}; models are
   {"a","b","c","d"} or {"num","den"} in descending powers of s. */
SDR_API sdr_status sdr_spec_from_json(const char* json, sdr_spec** out);
SDR_API sdr_status sdr_spec_to_json(const sdr_spec* spec, char** out);
SDR_API void sdr_spec_free(sdr_spec* spec);
SDR_API sdr_status sdr_spec_plant_json(const sdr_spec* spec, char** out);

/* ---- discrete filters ---------------------------------------------------- */

typedef struct sdr_filter sdr_filter;

/* {"a","b","c","d","sample_period"} or {"num","den","sample_period"}. */
SDR_API sdr_status sdr_filter_from_json(const char* json, sdr_filter** out);
SDR_API sdr_status sdr_filter_to_json(const sdr_filter* f, char** out);
SDR_API void sdr_filter_free(sdr_filter* f);
SDR_API sdr_status sdr_filter_shape(const sdr_filter* f, size_t* inputs, size_t* outputs,
                                    size_t* states, double* sample_period);
SDR_API sdr_status sdr_filter_is_stable(const sdr_filter* f, int* stable);
/* JSON {"poles": [[re, im], ...], "zeros": [...]} (zeros for SISO only). */
SDR_API sdr_status sdr_filter_poles_zeros(const sdr_filter* f, char** out);
SDR_API sdr_status sdr_filter_hinf_norm(const sdr_filter* f, double tol, double* norm);
/* |K(e^{jw h})| in dB at n frequencies (rad/s). SISO only. */
SDR_API sdr_status sdr_filter_bode(const sdr_filter* f, const double* omega, size_t n,
                                   double* magnitude_db, double* phase_rad);
SDR_API sdr_status sdr_filter_impulse(const sdr_filter* f, size_t n, double* out);
/* Zero-state response of a SISO filter. */
SDR_API sdr_status sdr_filter_apply(const sdr_filter* f, const double* x, size_t n, double* y);
SDR_API sdr_status sdr_filter_polyphase(const sdr_filter* k, int upsample, sdr_filter** out);
SDR_API sdr_status sdr_filter_recompose(const sdr_filter* k_tilde, int upsample,
                                        sdr_filter** out);
/* FIR taps at period h / upsample, returned in polyphase form at period h. */
SDR_API sdr_status sdr_filter_from_fir(const double* taps, size_t n, int upsample, double h,
                                       sdr_filter** out);

/* ---- synthesis ----------------------------------------------------------- */

typedef struct sdr_design sdr_design;

SDR_API sdr_status sdr_design_run(const sdr_spec* spec, double rel_tol, sdr_design** out);
/* Independent FIR minimax design with `taps` taps per branch over `grid_points`
   frequencies. The result carries gamma_lower = 0. */
SDR_API sdr_status sdr_design_fir_minimax(const sdr_spec* spec, int taps, size_t grid_points,
                                          sdr_design** out);
SDR_API sdr_status sdr_design_gamma(const sdr_design* d, double* achieved, double* lower,
                                    int* iterations);
/* Copies; release with sdr_filter_free. */
SDR_API sdr_status sdr_design_controller(const sdr_design* d, sdr_filter** k_tilde);
SDR_API sdr_status sdr_design_interpolator(const sdr_design* d, sdr_filter** k);
/* {"k_tilde", "k", "gamma_achieved", "gamma_lower", "iterations", "regularized"} */
SDR_API sdr_status sdr_design_to_json(const sdr_design* d, char** out);
SDR_API void sdr_design_free(sdr_design* d);

/* ---- analysis ------------------------------------------------------------ */

SDR_API sdr_status sdr_frequency_grid(double h, size_t points, double* omega);
SDR_API sdr_status sdr_error_gain(const sdr_spec* spec, const sdr_filter* k_tilde,
                                  const double* omega, size_t n, double* gains);
/* Overshoot of a SISO interpolator on a slow rectangular wave. */
SDR_API sdr_status sdr_rect_overshoot(const sdr_filter* k, int upsample, int half_period,
                                      int periods, double* overshoot);
/* Fast-rate simulation of the reconstruction chain. y_p and e_c have n entries. */
SDR_API sdr_status sdr_simulate(const sdr_spec* spec, const sdr_filter* k, const double* w,
                                size_t n, double rate, double* y_p, double* e_c);
/* 0 = johnston (32 taps), 1 = equiripple (127 taps). Writes min(cap, size)
   taps and the full size to *count. */
SDR_API sdr_status sdr_baseline_taps(int which, double* taps, size_t cap, size_t* count);

/* ---- signals ------------------------------------------------------------- */

/* n/2 + 1 magnitudes of an fft_size-point FFT; window 0 = rect, 1 = hann. */
SDR_API sdr_status sdr_spectrum(const double* x, size_t n, double rate, size_t fft_size,
                                int window, int decibels, double* out);
SDR_API sdr_status sdr_synthetic_clip(double rate, double seconds, unsigned seed,
                                      double* out, size_t cap, size_t* count);

typedef struct sdr_audio sdr_audio;

SDR_API sdr_status sdr_audio_read(const char* path, sdr_audio** out);
SDR_API sdr_status sdr_audio_create(int sample_rate, size_t channels, size_t frames,
                                    sdr_audio** out);
SDR_API sdr_status sdr_audio_info(const sdr_audio* a, int* sample_rate, size_t* channels,
                                  size_t* frames);
SDR_API sdr_status sdr_audio_channel(const sdr_audio* a, size_t channel, double* out);
SDR_API sdr_status sdr_audio_set_channel(sdr_audio* a, size_t channel, const double* in);
SDR_API sdr_status sdr_audio_write(const sdr_audio* a, const char* path);
SDR_API void sdr_audio_free(sdr_audio* a);

/* ---- images -------------------------------------------------------------- */

typedef struct sdr_image sdr_image;

SDR_API sdr_status sdr_image_read(const char* path, sdr_image** out);
SDR_API sdr_status sdr_image_write(const sdr_image* img, const char* path);
SDR_API sdr_status sdr_image_size(const sdr_image* img, int* rows, int* cols);
SDR_API sdr_status sdr_image_decimate(const sdr_image* img, int factor, sdr_image** out);
SDR_API sdr_status sdr_image_lanczos(const sdr_image* img, int factor, sdr_image** out);
/* Separable reconstruction through the interpolator K of a design for spec. */
SDR_API sdr_status sdr_image_sampled_data(const sdr_image* img, const sdr_spec* spec,
                                          const sdr_filter* k, sdr_image** out);
/* PSNR in dB; +infinity for identical images. */
SDR_API sdr_status sdr_image_psnr(const sdr_image* a, const sdr_image* b, double* psnr);
SDR_API sdr_status sdr_image_ssim(const sdr_image* a, const sdr_image* b, double* ssim);
SDR_API void sdr_image_free(sdr_image* img);

/* ---- consistent reconstruction ------------------------------------------- */

/* fa and p are continuous model documents; the result is the filter JSON
   {"k_op","h_d","delta1","delta2","beta","unstable_poles","causality_shift"}. */
SDR_API sdr_status sdr_oblique_filter(const char* fa_json, const char* p_json, char** out);
/* Same filter from the sampled beta sequence: {"k", "beta", "shift"}. */
SDR_API sdr_status sdr_oblique_filter_beta(const char* fa_json, const char* p_json, char** out);
/* tf_json {"num","den"}; result {"causal": {...}, "anticausal": [...], "tail_energy"}. */
SDR_API sdr_status sdr_oblique_split(const char* tf_json, int trunc, char** out);
/* Family P_d(s) = p_base(s) / (s + d). CSV "d,re,im" in *csv; crossing
   written when *has_crossing is set. */
SDR_API sdr_status sdr_oblique_locus(const char* fa_json, const char* p_base_json, double d_lo,
                                     double d_hi, int steps, char** csv, double* crossing,
                                     int* has_crossing);
/* Squared L2 errors of the two piecewise-constant fits of sin t. */
SDR_API sdr_status sdr_sine_box(int per_period, double* consistent, double* midvalue);

#ifdef __cplusplus
}
#endif

#endif
